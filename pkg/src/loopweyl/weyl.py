"""Iwahori-Weyl groups and generic Bruhat-order machinery.

Two engine classes present one duck-typed protocol (identity, gen, mul, inv,
lmul, rmul, descent tests, length, sort_key): AffineEngine realizes the
extended group W_0 x P^vee as affine transformations of the realization V,
with Omega-classes and length-zero tau representatives; CartanContext
realizes the Coxeter group of an arbitrary GCM through its integer root
representation.  Reduced words, Bruhat comparison, coset minima, labeled
covers and interval graphs are written against the protocol only, so the
same code serves the affine group, its finite parabolics, and the finite
calibration contexts.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import ResourceCapError


@dataclass(frozen=True)
class Element:
    """An affine transformation v -> w0(v) + lam of the realization V."""

    fin: object
    w0: tuple
    lam: tuple

    def apply(self, v):
        return tuple(
            a + b for a, b in zip(linalg.matvec(self.w0, v), self.lam)
        )


class AffineEngine:
    """The extended affine Weyl group of a FiniteRootDatum."""

    def __init__(self, fin):
        self.fin = fin
        self.nodes = fin.datum.nodes
        r = fin.r
        self._id_mat = tuple(
            tuple(1 if i == j else 0 for j in range(r)) for i in range(r)
        )
        self._zero = tuple(Fraction(0) for _ in range(r))
        self._gens = {i: self._make_gen(i) for i in self.nodes}
        self._len_cache = {}
        self._inv_cache = {}
        self._leq_cache = {}
        self._word_cache = {}
        self._tau_cache = {}
        self._tau_perm_cache = {}

    def _make_gen(self, i):
        fin = self.fin
        r = fin.r
        if i != fin.x:
            return Element(fin, fin._w0_gens[i], self._zero)
        grad = linalg.matvec(fin.a_del, fin.theta_coef)
        rows = []
        for a in range(r):
            row = []
            for b in range(r):
                v = (1 if a == b else 0) - fin.psi[a] * grad[b]
                assert Fraction(v).denominator == 1
                row.append(int(v))
            rows.append(tuple(row))
        return Element(
            fin, tuple(rows), tuple(Fraction(c) for c in fin.t_star)
        )

    # -- protocol --

    def identity(self):
        return Element(self.fin, self._id_mat, self._zero)

    def gen(self, i):
        return self._gens[i]

    def mul(self, a, b):
        return Element(
            self.fin,
            linalg.int_mat(linalg.matmul(a.w0, b.w0)),
            tuple(
                x + y for x, y in zip(a.lam, linalg.matvec(a.w0, b.lam))
            ),
        )

    def inv(self, a):
        if a not in self._inv_cache:
            w = linalg.int_mat(linalg.inverse(a.w0))
            self._inv_cache[a] = Element(
                self.fin, w, tuple(-c for c in linalg.matvec(w, a.lam))
            )
        return self._inv_cache[a]

    def lmul(self, i, a):
        return self.mul(self._gens[i], a)

    def rmul(self, a, i):
        return self.mul(a, self._gens[i])

    def is_left_descent(self, i, a):
        return self.fin.affine_value(i, a.apply(self.fin.v0)) < 0

    def is_right_descent(self, a, i):
        return self.is_left_descent(i, self.inv(a))

    def length(self, a):
        if a not in self._len_cache:
            fin = self.fin
            winv = linalg.int_mat(linalg.inverse(a.w0))
            total = 0
            for grad, coroot in fin.ech_pos:
                val = sum(g * c for g, c in zip(grad, a.lam))
                pos = all(c >= 0 for c in linalg.matvec(winv, coroot))
                total += abs(val) if pos else abs(val - 1)
            assert Fraction(total).denominator == 1
            self._len_cache[a] = int(total)
        return self._len_cache[a]

    def sort_key(self, a):
        return (self.length(a), a.w0, a.lam)

    # -- Omega-classes and tau representatives --

    def translation(self, lam):
        return Element(self.fin, self._id_mat, tuple(map(Fraction, lam)))

    def omega_class(self, a):
        return linalg.reduce_mod_lattice(a.lam, self.fin.t_basis)

    def omega_residues(self):
        fin = self.fin
        n = linalg.lattice_index(fin.t_basis, fin.p_basis)
        seen = {self._zero}
        frontier = [self._zero]
        while frontier and len(seen) < n:
            nxt = []
            for v in frontier:
                for row in fin.p_basis:
                    for s in (1, -1):
                        u = linalg.reduce_mod_lattice(
                            tuple(a + s * b for a, b in zip(v, row)),
                            fin.t_basis,
                        )
                        if u not in seen:
                            seen.add(u)
                            nxt.append(u)
            frontier = nxt
        assert len(seen) == n
        return tuple(sorted(seen))

    def tau_for_class(self, res):
        if res not in self._tau_cache:
            x = self.translation(res)
            _, rem = reduced_word(self, x)
            assert self.length(rem) == 0
            self._tau_cache[res] = rem
        return self._tau_cache[res]

    def tau_conj_node(self, tau, i):
        """The node j with tau s_i tau^{-1} = s_j."""
        key = (tau, i)
        if key not in self._tau_perm_cache:
            x = self.mul(self.mul(tau, self._gens[i]), self.inv(tau))
            for j in self.nodes:
                if x == self._gens[j]:
                    self._tau_perm_cache[key] = j
                    break
            else:
                raise AssertionError("tau does not permute the generators")
        return self._tau_perm_cache[key]

    def bruhat_leq(self, v, w):
        """Extended Bruhat order: comparable only inside one Omega-class."""
        cv, cw = self.omega_class(v), self.omega_class(w)
        if cv != cw:
            return False
        tau_inv = self.inv(self.tau_for_class(cv))
        return bruhat_leq_cox(
            self, self.mul(v, tau_inv), self.mul(w, tau_inv)
        )


class CoxElement:
    """Group element as paired root and coroot representation matrices."""

    __slots__ = ("m", "minv", "mco", "mcoinv", "_hash")

    def __init__(self, m, minv, mco, mcoinv):
        self.m = m
        self.minv = minv
        self.mco = mco
        self.mcoinv = mcoinv
        self._hash = hash(m)

    def __eq__(self, other):
        return isinstance(other, CoxElement) and self.m == other.m

    def __hash__(self):
        return self._hash


class CartanContext:
    """Coxeter group of a square GCM, in its root representation.

    Generator i sends alpha_j to alpha_j - a_ij alpha_i (root side) and
    alpha_j^vee to alpha_j^vee - a_ji alpha_i^vee (coroot side).  Real roots
    of affine or finite GCMs have coordinate vectors of a single sign, so
    column-sign inspection decides descents.
    """

    def __init__(self, a, nodes=None):
        self.a = tuple(tuple(row) for row in a)
        n = len(self.a)
        self.nodes = tuple(range(n)) if nodes is None else tuple(nodes)
        assert len(self.nodes) == n
        self.npos = {i: p for p, i in enumerate(self.nodes)}
        eye = tuple(
            tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
        )
        self._id = CoxElement(eye, eye, eye, eye)
        self._root_gen = {}
        self._co_gen = {}
        for i in self.nodes:
            p = self.npos[i]
            self._root_gen[i] = tuple(
                tuple(
                    (1 if r == c else 0) - (self.a[p][c] if r == p else 0)
                    for c in range(n)
                )
                for r in range(n)
            )
            self._co_gen[i] = tuple(
                tuple(
                    (1 if r == c else 0) - (self.a[c][p] if r == p else 0)
                    for c in range(n)
                )
                for r in range(n)
            )
        self._len_cache = {}
        self._leq_cache = {}
        self._word_cache = {}

    def identity(self):
        return self._id

    def gen(self, i):
        r, c = self._root_gen[i], self._co_gen[i]
        return CoxElement(r, r, c, c)

    def mul(self, x, y):
        return CoxElement(
            linalg.int_mat(linalg.matmul(x.m, y.m)),
            linalg.int_mat(linalg.matmul(y.minv, x.minv)),
            linalg.int_mat(linalg.matmul(x.mco, y.mco)),
            linalg.int_mat(linalg.matmul(y.mcoinv, x.mcoinv)),
        )

    def inv(self, x):
        return CoxElement(x.minv, x.m, x.mcoinv, x.mco)

    def lmul(self, i, x):
        return self.mul(self.gen(i), x)

    def rmul(self, x, i):
        return self.mul(x, self.gen(i))

    def _col_negative(self, m, i):
        p = self.npos[i]
        col = [m[r][p] for r in range(len(self.nodes))]
        neg = any(c < 0 for c in col)
        assert not (neg and any(c > 0 for c in col)), "mixed-sign root column"
        return neg

    def is_left_descent(self, i, x):
        return self._col_negative(x.minv, i)

    def is_right_descent(self, x, i):
        return self._col_negative(x.m, i)

    def length(self, x):
        if x not in self._len_cache:
            n = 0
            y = x
            while True:
                i = next(
                    (j for j in self.nodes if self.is_left_descent(j, y)),
                    None,
                )
                if i is None:
                    break
                y = self.lmul(i, y)
                n += 1
            assert y == self._id, "length-zero element is not the identity"
            self._len_cache[x] = n
        return self._len_cache[x]

    def sort_key(self, x):
        return (self.length(x), x.m)

    def root_coords(self, x, i):
        """Coordinates of x(alpha_i) over the simple roots."""
        p = self.npos[i]
        return tuple(row[p] for row in x.m)

    def coroot_coords(self, x, i):
        """Coordinates of x(alpha_i^vee) over the simple coroots."""
        p = self.npos[i]
        return tuple(row[p] for row in x.mco)

    def coroot_apply_inv(self, x, c):
        """x^{-1} applied to a simple-coroot coordinate vector."""
        return linalg.matvec(x.mcoinv, c)


# -- generic machinery over either engine --


def reduced_word(eng, x):
    """Deterministic reduced word by least-descent stripping.

    Returns (word, remainder); the remainder has length zero (the identity,
    or a tau-twist in the extended affine group).
    """
    if x in eng._word_cache:
        return eng._word_cache[x]
    word = []
    y = x
    while True:
        i = next((j for j in eng.nodes if eng.is_left_descent(j, y)), None)
        if i is None:
            break
        word.append(i)
        y = eng.lmul(i, y)
    out = (tuple(word), y)
    eng._word_cache[x] = out
    return out


def from_word(eng, word, rem=None):
    x = eng.identity() if rem is None else rem
    for i in reversed(word):
        x = eng.lmul(i, x)
    return x


def longest_element(eng, cap=100000):
    """The longest element of a finite Coxeter engine, by greedy ascent."""
    x = eng.identity()
    for _ in range(cap):
        i = next(
            (j for j in eng.nodes if not eng.is_right_descent(x, j)), None
        )
        if i is None:
            return x
        x = eng.rmul(x, i)
    raise ResourceCapError("longest element ascent", cap, cap)


def bruhat_leq_cox(eng, v, w):
    """Bruhat order inside one Coxeter group, by descent lifting."""
    key = (v, w)
    cached = eng._leq_cache.get(key)
    if cached is not None:
        return cached
    lv, lw = eng.length(v), eng.length(w)
    if lv > lw:
        out = False
    elif lv == lw:
        out = v == w
    else:
        i = next(j for j in eng.nodes if eng.is_left_descent(j, w))
        wi = eng.lmul(i, w)
        if eng.is_left_descent(i, v):
            out = bruhat_leq_cox(eng, eng.lmul(i, v), wi)
        else:
            out = bruhat_leq_cox(eng, v, wi)
    eng._leq_cache[key] = out
    return out


def coset_min(eng, x, left_gens=(), right_gens=()):
    """The minimal element of W_{left_gens} x W_{right_gens}."""
    while True:
        moved = False
        for i in left_gens:
            while eng.is_left_descent(i, x):
                x = eng.lmul(i, x)
                moved = True
        for i in right_gens:
            while eng.is_right_descent(x, i):
                x = eng.rmul(x, i)
                moved = True
        if not moved:
            return x


def labeled_covers_down(eng, ctx, x):
    """Covers v <| x with reflection labels, via single-letter word drops.

    ctx is the CartanContext over the same generator alphabet, used to read
    off the positive root beta (and coroot) with x = s_beta v.  Returns a
    list of (v, beta_root_coords, beta_coroot_coords).
    """
    word, rem = reduced_word(eng, x)
    lx = eng.length(x)
    n = len(word)
    pre = [eng.identity()]
    for i in word:
        pre.append(eng.mul(pre[-1], eng.gen(i)))
    suf = [rem]
    for i in reversed(word):
        suf.insert(0, eng.mul(eng.gen(i), suf[0]))
    cpre = [ctx.identity()]
    for i in word:
        cpre.append(ctx.mul(cpre[-1], ctx.gen(i)))
    out = []
    seen = set()
    for k in range(n):
        v = eng.mul(pre[k], suf[k + 1])
        if eng.length(v) != lx - 1 or v in seen:
            continue
        seen.add(v)
        beta = ctx.root_coords(cpre[k], word[k])
        beta_co = ctx.coroot_coords(cpre[k], word[k])
        out.append((v, beta, beta_co))
    return out


@dataclass(frozen=True)
class BruhatGraph:
    """Lower closure of a set of elements, with labeled cover edges."""

    nodes: tuple
    edges: tuple  # (upper, lower, beta, beta_co)
    tops: tuple

    def down(self):
        adj = {x: [] for x in self.nodes}
        for up, lo, beta, beta_co in self.edges:
            adj[up].append((lo, beta, beta_co))
        return adj


def bruhat_interval(eng, ctx, tops, right_quotient=(), cap=20000):
    """Lower-closure graph of coset minima below the given elements.

    With right_quotient nonempty, nodes are the minimal representatives of
    cosets modulo the standard parabolic on those generators, ordered by the
    quotient Bruhat order; cover labels are inherited from word drops.
    """
    start = [coset_min(eng, t, (), right_quotient) for t in tops]
    nodes = set(start)
    edges = set()
    frontier = list(nodes)
    while frontier:
        nxt = []
        for x in frontier:
            lx = eng.length(x)
            for v, beta, beta_co in labeled_covers_down(eng, ctx, x):
                v = coset_min(eng, v, (), right_quotient)
                if eng.length(v) != lx - 1:
                    continue
                edges.add((x, v, beta, beta_co))
                if v not in nodes:
                    nodes.add(v)
                    nxt.append(v)
            if len(nodes) > cap:
                raise ResourceCapError("bruhat interval nodes", len(nodes), cap)
        frontier = nxt
    key = eng.sort_key
    return BruhatGraph(
        nodes=tuple(sorted(nodes, key=key)),
        edges=tuple(
            sorted(edges, key=lambda e: (key(e[0]), key(e[1]), e[2]))
        ),
        tops=tuple(sorted(set(start), key=key)),
    )

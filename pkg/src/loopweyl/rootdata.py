"""Affine root data and their finite echelonnage systems.

An AffineRootDatum is a generalized Cartan matrix of affine type together
with its marks, comarks and multiplicability data.  Deleting a special node
x yields a realization of the affine Weyl group as W_0 x T acting on the
rational span V of the remaining simple coroots; FiniteRootDatum packages
that realization together with the rescaled (echelonnage) finite root
system whose coroot lattice equals the translation lattice T.

All vectors over V are tuples in simple-coroot coordinates of the deleted
diagram, in increasing node order.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import kactables, linalg
from .errors import UnknownDatumError, UnsupportedDatumError


@dataclass(frozen=True, eq=False)
class AffineRootDatum:
    name: str
    cartan: tuple
    twist_order: int
    marks: tuple
    comarks: tuple
    kappa: tuple
    su_n: Optional[int]

    @property
    def nodes(self):
        return tuple(range(len(self.cartan)))

    @property
    def rank(self):
        return len(self.cartan) - 1


def _build_datum(name, cartan, twist_order, su_n, kappa=None):
    a = tuple(tuple(row) for row in cartan)
    marks = linalg.primitive_positive_nullvector(a)
    comarks = linalg.primitive_positive_nullvector(linalg.transpose(a))
    if kappa is None:
        # a node carries a multipliable root exactly when the twist is 2 and
        # (mark, comark) = (2, 1); this singles out node 0 of A(2)_{2m}
        kappa = tuple(
            2 if twist_order == 2 and marks[i] == 2 and comarks[i] == 1 else 1
            for i in range(len(a))
        )
    return AffineRootDatum(
        name=name,
        cartan=a,
        twist_order=twist_order,
        marks=tuple(marks),
        comarks=tuple(comarks),
        kappa=tuple(kappa),
        su_n=su_n,
    )


_DATUM_CACHE = {}


def load_affine_datum(name):
    """Load a datum by Kac label, e.g. "C(1)_2" or "A(2)_2"."""
    if name not in _DATUM_CACHE:
        cartan, twist, su_n = kactables.cartan_matrix(name)
        _DATUM_CACHE[name] = _build_datum(name, cartan, twist, su_n)
    return _DATUM_CACHE[name]


def datum_from_json(text):
    """Build a datum from its JSON interchange form."""
    fields = kactables.datum_dict_from_json(text)
    su_n = None
    try:
        letter, twist, sub = kactables.parse_name(fields["name"])
        if letter == "A" and twist == 2:
            su_n = sub + 1
    except UnknownDatumError:
        pass
    return _build_datum(
        fields["name"], fields["cartan"], fields["twist_order"], su_n,
        kappa=fields["kappa"],
    )


def datum_to_json(datum):
    """Serialize a datum to its JSON interchange form."""
    return json.dumps(
        {
            "name": datum.name,
            "cartan": [list(row) for row in datum.cartan],
            "twist_order": datum.twist_order,
            "kappa": list(datum.kappa),
        },
        sort_keys=True,
    )


def special_nodes(datum):
    """Nodes with comark 1; these admit the W_0 x T realization."""
    return tuple(i for i in datum.nodes if datum.comarks[i] == 1)


def root_closure(a):
    """Positive roots of a finite-type GCM as (root, coroot) coordinate pairs.

    Coordinates are taken over the simple roots resp. simple coroots.  Pairs
    are sorted by height then lexicographically.
    """
    n = len(a)
    simple = [
        (
            tuple(1 if k == i else 0 for k in range(n)),
            tuple(1 if k == i else 0 for k in range(n)),
        )
        for i in range(n)
    ]
    seen = {p[0]: p[1] for p in simple}
    frontier = list(simple)
    while frontier:
        nxt = []
        for root, coroot in frontier:
            for j in range(n):
                pair = sum(root[i] * a[j][i] for i in range(n))
                r2 = tuple(
                    root[k] - (pair if k == j else 0) for k in range(n)
                )
                if any(c < 0 for c in r2):
                    continue
                cpair = sum(coroot[i] * a[i][j] for i in range(n))
                c2 = tuple(
                    coroot[k] - (cpair if k == j else 0) for k in range(n)
                )
                if r2 in seen:
                    assert seen[r2] == c2
                    continue
                seen[r2] = c2
                nxt.append((r2, c2))
        frontier = nxt
        if len(seen) > 10000:
            raise UnsupportedDatumError("root closure did not terminate")
    return tuple(sorted(seen.items(), key=lambda p: (sum(p[0]), p[0])))


class FiniteRootDatum:
    """Realization of an affine datum with a special node deleted.

    Carries the translation lattice T, the echelonnage root system (whose
    simple coroots generate T), the coweight lattice, and the affine wall
    functionals of the base alcove.
    """

    def __init__(self, datum, x=0):
        if x not in datum.nodes:
            raise UnknownDatumError(f"no node {x} in {datum.name}")
        if datum.comarks[x] != 1:
            raise UnsupportedDatumError(
                f"node {x} of {datum.name} is not special (comark != 1)"
            )
        self.datum = datum
        self.x = x
        self.nodes = tuple(i for i in datum.nodes if i != x)
        self.r = len(self.nodes)
        self.npos = {i: p for p, i in enumerate(self.nodes)}
        a = datum.cartan
        self.a_del = tuple(
            tuple(a[i][j] for j in self.nodes) for i in self.nodes
        )
        self.a_x = datum.marks[x]
        self.theta_coef = tuple(
            Fraction(datum.marks[i], self.a_x) for i in self.nodes
        )
        self.psi = tuple(datum.comarks[i] for i in self.nodes)
        t_star = tuple(
            Fraction(datum.comarks[i], self.a_x) for i in self.nodes
        )
        if any(c.denominator != 1 for c in t_star):
            # needs mark(x) | comark(i) for every i, as in all supported cases
            raise UnsupportedDatumError(
                f"no integral translation normalization at node {x} "
                f"of {datum.name}"
            )
        self.t_star = tuple(int(c) for c in t_star)
        # theta_x(psi) = 2 pins the normalization of the x-wall
        assert self._theta(self.psi) == 2

        self._w0_gens = {i: self._coroot_reflection(i) for i in self.nodes}
        orbit = self._orbit(tuple(Fraction(c) for c in self.t_star))
        self.t_basis = linalg.lattice_basis(orbit)
        assert len(self.t_basis) == self.r

        self.g = tuple(self._rescale_factor(p) for p in range(self.r))
        assert self.t_basis == linalg.lattice_basis(
            [
                tuple(self.g[p] if k == p else 0 for k in range(self.r))
                for p in range(self.r)
            ]
        )
        ech = [
            [
                Fraction(self.g[p] * self.a_del[p][q], self.g[q])
                for q in range(self.r)
            ]
            for p in range(self.r)
        ]
        assert all(c.denominator == 1 for row in ech for c in row)
        self.ech_cartan = tuple(tuple(int(c) for c in row) for row in ech)
        self.ech_pairs = root_closure(self.ech_cartan)

        # f_q = gradient of the rescaled simple root alpha_q / g_q
        self.fun_simple = tuple(
            tuple(Fraction(self.a_del[r][q], self.g[q]) for r in range(self.r))
            for q in range(self.r)
        )
        self.ech_pos = tuple(
            (
                tuple(
                    sum(m[q] * self.fun_simple[q][r] for q in range(self.r))
                    for r in range(self.r)
                ),
                tuple(c[q] * self.g[q] for q in range(self.r)),
            )
            for m, c in self.ech_pairs
        )
        self.two_rho_fun = tuple(
            sum(grad[r] for grad, _ in self.ech_pos) for r in range(self.r)
        )

        phi = tuple(self.fun_simple[q] for q in range(self.r))
        self.pw_mat = linalg.inverse(phi)
        self.p_basis = linalg.lattice_basis(linalg.transpose(self.pw_mat))

        dmat = linalg.inverse(linalg.transpose(self.a_del))
        p_sum = tuple(sum(row) for row in dmat)
        t = Fraction(1, self.a_x * (sum(self.theta_coef) + 1))
        self.v0 = tuple(t * c for c in p_sum)
        assert all(self.affine_value(i, self.v0) > 0 for i in datum.nodes)

    # -- linear algebra helpers on coroot coordinates --

    def _theta(self, v):
        grad = linalg.matvec(self.a_del, self.theta_coef)
        return sum(v[r] * grad[r] for r in range(self.r))

    def _coroot_reflection(self, i):
        p = self.npos[i]
        rows = []
        for r in range(self.r):
            if r != p:
                rows.append(tuple(1 if q == r else 0 for q in range(self.r)))
            else:
                rows.append(
                    tuple(
                        (1 if q == p else 0) - self.a_del[q][p]
                        for q in range(self.r)
                    )
                )
        return tuple(rows)

    def _orbit(self, v):
        seen = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for m in self._w0_gens.values():
                    w = linalg.matvec(m, u)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(seen)

    def _rescale_factor(self, p):
        e_p = tuple(1 if k == p else 0 for k in range(self.r))
        for c in range(1, 7):
            if linalg.in_lattice(tuple(c * v for v in e_p), self.t_basis):
                return c
        raise UnsupportedDatumError(
            f"no small rescale factor for simple direction {p}"
        )

    # -- root and wall evaluations --

    def simple_root_value(self, i, v):
        """alpha_i(v) for a deleted node i, at GCM normalization."""
        p = self.npos[i]
        return sum(v[r] * self.a_del[r][p] for r in range(self.r))

    def affine_gradient(self, i):
        if i != self.x:
            p = self.npos[i]
            return (
                tuple(Fraction(self.a_del[r][p]) for r in range(self.r)),
                Fraction(0),
            )
        grad = linalg.matvec(self.a_del, self.theta_coef)
        return (
            tuple(-c for c in grad),
            Fraction(1, self.a_x),
        )

    def affine_value(self, i, v):
        grad, const = self.affine_gradient(i)
        return const + sum(v[r] * grad[r] for r in range(self.r))

    def reflect_point(self, i, v):
        """Apply the affine simple reflection s_i to a point of V."""
        if i != self.x:
            c = self.simple_root_value(i, v)
            p = self.npos[i]
            return tuple(v[r] - (c if r == p else 0) for r in range(self.r))
        c = self.affine_value(self.x, v)
        return tuple(v[r] + c * self.psi[r] for r in range(self.r))

    def alcove_normalize(self, v):
        """Walk a point into the closed base alcove by simple reflections."""
        v = tuple(Fraction(c) for c in v)
        for _ in range(100000):
            neg = next(
                (
                    i
                    for i in self.datum.nodes
                    if self.affine_value(i, v) < 0
                ),
                None,
            )
            if neg is None:
                return v
            v = self.reflect_point(neg, v)
        raise UnsupportedDatumError("alcove walk did not terminate")

    # -- coweight lattice --

    def pweight_coords(self, lam):
        """Coordinates of lam in the fundamental-coweight basis."""
        return tuple(
            sum(f[r] * lam[r] for r in range(self.r)) for f in self.fun_simple
        )

    def in_coweight_lattice(self, lam):
        return all(c.denominator == 1 for c in map(Fraction, self.pweight_coords(lam)))

    def from_pweight_coords(self, mu):
        return linalg.matvec(self.pw_mat, tuple(Fraction(c) for c in mu))

    def dominant_rep(self, lam):
        """The dominant W_0-conjugate of lam."""
        lam = tuple(Fraction(c) for c in lam)
        while True:
            neg = next(
                (
                    i
                    for i in self.nodes
                    if self.simple_root_value(i, lam) < 0
                ),
                None,
            )
            if neg is None:
                return lam
            p = self.npos[neg]
            c = self.simple_root_value(neg, lam)
            lam = tuple(
                lam[r] - (c if r == p else 0) for r in range(self.r)
            )

    def w0_orbit(self, lam):
        """The full W_0-orbit of lam, sorted."""
        return tuple(self._orbit(tuple(Fraction(c) for c in lam)))

    def translation_length(self, lam):
        """l(t_lam) = <lam+, 2 rho> over the echelonnage system."""
        lam = self.dominant_rep(lam)
        val = sum(self.two_rho_fun[r] * lam[r] for r in range(self.r))
        assert Fraction(val).denominator == 1
        return int(val)


_FIN_CACHE = {}


def echelon_system(datum, x=0):
    key = (id(datum), x)
    if key not in _FIN_CACHE:
        _FIN_CACHE[key] = FiniteRootDatum(datum, x)
    return _FIN_CACHE[key]


# -- coweight projection --


def _su_model(fin):
    """Distinguish the B_2-shaped n=4 alias from the C_m-shaped families."""
    n = fin.datum.su_n
    if n is None:
        raise UnsupportedDatumError(
            f"{fin.datum.name} has no unitary coweight model"
        )
    if fin.x != 0:
        raise UnsupportedDatumError(
            "unitary coweight model requires deleting node 0"
        )
    return "b2" if n == 4 else "cm"


def _su_e_to_coroot(fin, v):
    if _su_model(fin) == "b2":
        return (Fraction(v[0]), Fraction(v[0] + v[1], 2))
    acc = Fraction(0)
    out = []
    for c in v:
        acc += c
        out.append(acc)
    return tuple(out)


def project_coweight(fin, mu):
    """Image of a geometric cocharacter mu in the coweight lattice of V.

    For split type A the input is Z^n modulo the diagonal; for other split
    types it lists fundamental-coweight coordinates on nodes 1..l.  For the
    twisted A(2) families the input is Z^n for the associated unitary group
    of size n.  Other twisted types have no implemented model; pass lam
    directly to the consumers instead.
    """
    datum = fin.datum
    mu = tuple(int(c) for c in mu)
    if datum.twist_order == 1:
        letter, _, _ = kactables.parse_name(datum.name)
        if letter == "A":
            n = datum.rank + 1
            if len(mu) != n:
                raise ValueError(f"expected mu in Z^{n}")
            if fin.x != 0:
                raise UnsupportedDatumError(
                    "type A coweight model requires deleting node 0"
                )
            total = sum(mu)
            lam = tuple(
                sum(mu[:p]) - Fraction(p * total, n) for p in range(1, n)
            )
        else:
            if len(mu) != fin.r:
                raise ValueError(
                    f"expected {fin.r} fundamental-coweight coordinates"
                )
            lam = fin.from_pweight_coords(mu)
    elif datum.su_n is not None:
        n = datum.su_n
        if len(mu) != n:
            raise ValueError(f"expected mu in Z^{n}")
        m = n // 2
        two_nu = tuple(mu[i] - mu[n - 1 - i] for i in range(m))
        if _su_model(fin) == "b2":
            d1, d2 = Fraction(two_nu[0], 2), Fraction(two_nu[1], 2)
            v = (2 * (d1 + d2), 2 * (d1 - d2))
        else:
            v = tuple(Fraction(c) for c in two_nu)
        lam = _su_e_to_coroot(fin, v)
    else:
        raise UnsupportedDatumError(
            f"no coweight model for {datum.name}; supply lam directly"
        )
    if not fin.in_coweight_lattice(lam):
        raise ValueError("mu does not project into the coweight lattice")
    return lam


# -- dictionary between lattice-chain indices and diagram nodes --


def _su_vertex_point(fin, token):
    n = fin.datum.su_n
    m = n // 2
    if token == "m'":
        if n % 2 == 1:
            raise ValueError("index m' only exists for even n")
        d = [Fraction(1, 4)] * (m - 1) + [Fraction(-1, 4)]
    else:
        i = int(token)
        if not 0 <= i <= m:
            raise ValueError(f"chain index {i} out of range 0..{m}")
        d = [Fraction(1, 4)] * i + [Fraction(0)] * (m - i)
    if n % 2 == 1:
        v = tuple(2 * c for c in d)
    elif n == 4:
        v = (2 * (d[0] + d[1]) - 1, 2 * (d[0] - d[1]))
    else:
        v = tuple(2 * c - Fraction(1, 2) for c in d)
    return _su_e_to_coroot(fin, v)


def bt_nodes(fin, tokens):
    """Diagram nodes of the parahoric fixing the listed chain indices.

    Tokens are integers 0..m, plus "m'" for even n.  The returned node set Y
    satisfies W^Y = W_{S-Y} = the finite Weyl group of the parahoric.
    """
    out = set()
    for token in tokens:
        p = fin.alcove_normalize(_su_vertex_point(fin, token))
        pos = {
            i for i in fin.datum.nodes if fin.affine_value(i, p) > 0
        }
        assert pos, "chain point did not normalize to a facet"
        out |= pos
    return tuple(sorted(out))


def split_parent(datum):
    """The finite datum of the split form whose dimensions enter h_mu."""
    if datum.twist_order == 1:
        return echelon_system(datum, 0)
    if datum.su_n is not None:
        return echelon_system(load_affine_datum(f"A(1)_{datum.su_n - 1}"), 0)
    raise UnsupportedDatumError(
        f"no split parent model for {datum.name}"
    )

"""Closed-form dimension counts and the coherence comparison.

h_mu(datum, mu, m) is the dimension of the irreducible representation of
the split parent group with highest weight e*m times the fundamental weight
matching the minuscule coweight mu, where e is the twist order.  The
comparison pits the path count for (mu, Y, a) against h_mu at m = |Y| * a.
"""

import time
from dataclasses import dataclass
from fractions import Fraction

from . import kactables, lspaths, rootdata
from .errors import UnsupportedDatumError


def weyl_dim(fin, lam):
    """Dimension of the highest-weight module, by the product formula.

    lam lists nonnegative fundamental-weight coordinates over the
    echelonnage system of fin.
    """
    lam = tuple(int(c) for c in lam)
    if len(lam) != fin.r or any(c < 0 for c in lam):
        raise ValueError("expected dominant fundamental-weight coordinates")
    out = Fraction(1)
    for _, coroot in fin.ech_pairs:
        num = sum((l + 1) * c for l, c in zip(lam, coroot))
        den = sum(coroot)
        out *= Fraction(num, den)
    assert out.denominator == 1 and out > 0
    return int(out)


def _type_a_level(mu):
    """The r with sorted(mu) - min = (1^r, 0^s), or None."""
    base = min(mu)
    norm = sorted((c - base for c in mu), reverse=True)
    if any(c not in (0, 1) for c in norm):
        return None
    return sum(norm)


def minuscule_node(datum, mu):
    """The fundamental-coweight node named by a minuscule mu."""
    letter, _, _ = kactables.parse_name(datum.name)
    if datum.su_n is not None or (datum.twist_order == 1 and letter == "A"):
        n = datum.su_n if datum.su_n is not None else datum.rank + 1
        if len(mu) != n:
            raise ValueError(f"expected mu in Z^{n}")
        r = _type_a_level(mu)
        if r is None or not 0 < r < n:
            raise ValueError(f"mu {tuple(mu)} is not minuscule")
        return r
    if datum.twist_order != 1:
        raise UnsupportedDatumError(
            f"no minuscule coweight model for {datum.name}"
        )
    if len(mu) != datum.rank:
        raise ValueError(f"expected {datum.rank} coordinates")
    hot = [i + 1 for i, c in enumerate(mu) if c != 0]
    if len(hot) != 1 or mu[hot[0] - 1] != 1:
        raise ValueError(f"mu {tuple(mu)} is not a fundamental coweight")
    node = hot[0]
    if datum.marks[node] != 1:
        raise ValueError(f"node {node} of {datum.name} is not minuscule")
    return node


def h_mu(datum, mu, m):
    """Closed-form count for a single minuscule mu at scale m."""
    if m == 0:
        return 1
    if m < 0:
        raise ValueError("scale m must be nonnegative")
    node = minuscule_node(datum, mu)
    parent = rootdata.split_parent(datum)
    lam = tuple(
        datum.twist_order * m if i == node else 0 for i in parent.nodes
    )
    return weyl_dim(parent, lam)


def h_mu_sum(datum, parts, m):
    """Product of h_mu over the parts of a sum decomposition."""
    out = 1
    for mu in parts:
        out *= h_mu(datum, mu, m)
    return out


def hook_content(n, r, m):
    """prod_{i<=r, j<=n-r} (i+j+m-1)/(i+j-1); the type A closed form."""
    if not 0 < r < n or m < 0:
        raise ValueError("need 0 < r < n and m >= 0")
    out = Fraction(1)
    for i in range(1, r + 1):
        for j in range(1, n - r + 1):
            out *= Fraction(i + j + m - 1, i + j - 1)
    assert out.denominator == 1
    return int(out)


def central_charge(datum, weights):
    """Pairing of an S-indexed weight vector with the comarks."""
    if len(weights) != len(datum.nodes):
        raise ValueError("expected one coordinate per node")
    return sum(c * a for c, a in zip(weights, datum.comarks))


def iota_embed(datum, weights):
    """Lift eps_i -> eps_i - comark_i * eps_0 of a finite weight vector."""
    if datum.twist_order != 1:
        raise UnsupportedDatumError(
            "the finite-weight lift is only defined for untwisted data"
        )
    if len(weights) != datum.rank:
        raise ValueError(f"expected {datum.rank} coordinates")
    head = -sum(c * datum.comarks[i + 1] for i, c in enumerate(weights))
    return (head,) + tuple(weights)


@dataclass(frozen=True)
class CoherenceReport:
    datum: str
    mu: tuple
    y: tuple
    a: int
    h_path: int
    h_closed: int
    equal: bool
    seconds_path: float
    seconds_closed: float


def check_coherence(fin, mu_parts, y, a, cap=20000):
    """Compare the path count for (mu, Y, a) with h_mu at m = |Y| * a.

    mu_parts is a tuple of summands, each naming a minuscule class; the path
    side sums the dominant representatives of their coweight projections, the
    closed side multiplies their counts.
    """
    datum = fin.datum
    mu_parts = tuple(tuple(mu) for mu in mu_parts)
    lam = None
    for mu in mu_parts:
        part = fin.dominant_rep(rootdata.project_coweight(fin, mu))
        lam = part if lam is None else tuple(
            x + y_ for x, y_ in zip(lam, part)
        )
    t0 = time.perf_counter()
    h_path = lspaths.count_h_y(fin, lam=lam, y=y, a=a, cap=cap)
    t1 = time.perf_counter()
    h_closed = h_mu_sum(datum, mu_parts, len(y) * a)
    t2 = time.perf_counter()
    return CoherenceReport(
        datum=datum.name,
        mu=mu_parts,
        y=tuple(sorted(y)),
        a=a,
        h_path=h_path,
        h_closed=h_closed,
        equal=h_path == h_closed,
        seconds_path=t1 - t0,
        seconds_closed=t2 - t1,
    )

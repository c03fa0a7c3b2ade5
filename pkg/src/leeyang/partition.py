"""Partition functions and their derivative observables.

Two independent engines compute every quantity: brute-force enumeration
(Gray-code order over spin configurations, or recursive edge branching for
matchings) and an exact frontier dynamic programme. Enumeration is capped;
the DP handles the large augmented graphs the recovery pipelines need.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ._frontier import MomentAlgebra, PolyAlgebra, matching_sum, two_state_sum
from .errors import CapExceededError, PreconditionError, ZeroPartitionError
from .graphs import MultiGraph
from .polynomial import UniPoly

ENUMERATION_CAP = 22
"""Largest vertex count for which 2**n spin configurations are enumerated."""

MATCHING_ENUMERATION_CAP = 40
"""Largest edge count for brute-force matching enumeration."""


def _check_beta(beta) -> Fraction:
    beta = Fraction(beta)
    if not 0 < beta < 1:
        raise PreconditionError("beta must lie strictly between 0 and 1")
    return beta


# enumeration oracles


def ising_count_table(g: MultiGraph, cap: int = ENUMERATION_CAP) -> dict[tuple[int, int], int]:
    """Map (plus count, disagreeing edge count) to the number of configurations.

    Walks all 2**n configurations in reflected Gray-code order so each step
    flips one spin and updates the disagreement count locally. Parallel edges
    count with multiplicity; loops never disagree.
    """
    n = g.n
    if n > cap:
        raise CapExceededError(f"enumeration of 2**{n} configurations exceeds cap 2**{cap}")
    inc = [[x for x, _ in g.incidence[v] if x != v] for v in range(n)]
    spins = [0] * n
    p = d = 0
    table: dict[tuple[int, int], int] = {(0, 0): 1}
    for i in range(1, 1 << n):
        v = (i & -i).bit_length() - 1
        s = spins[v] ^ 1
        for x in inc[v]:
            d += 1 if spins[x] != s else -1
        spins[v] = s
        p += 1 if s else -1
        table[(p, d)] = table.get((p, d), 0) + 1
    return table


def ising_coefficients_enum(g: MultiGraph, beta, cap: int = ENUMERATION_CAP) -> list[Fraction]:
    table = ising_count_table(g, cap)
    alpha = [Fraction(0)] * (g.n + 1)
    for (p, d), c in table.items():
        alpha[p] += c * Fraction(beta) ** d
    return alpha


def matching_poly_enum(g: MultiGraph, cap: int = MATCHING_ENUMERATION_CAP) -> UniPoly:
    """Brute force over edge subsets by branching on each edge."""
    edges = [(u, v, w) for u, v, w in g.edges if u != v]
    if len(edges) > cap:
        raise CapExceededError("too many edges for matching enumeration")
    counts: dict[int, Fraction] = {}

    def rec(i, used, size, weight):
        if i == len(edges):
            counts[size] = counts.get(size, Fraction(0)) + weight
            return
        rec(i + 1, used, size, weight)
        u, v, w = edges[i]
        if not (used >> u & 1 or used >> v & 1):
            rec(i + 1, used | 1 << u | 1 << v, size + 1, weight * w)

    rec(0, 0, 0, Fraction(1))
    coeffs = [Fraction(0)] * (g.n + 1)
    for k, c in counts.items():
        coeffs[g.n - 2 * k] += c
    return UniPoly(coeffs)


# public partition functions


def ising_poly(g: MultiGraph, beta, method: str = "auto", cap: int = ENUMERATION_CAP) -> UniPoly:
    """Z_I(G; beta, lambda) as a polynomial in lambda with exact coefficients."""
    beta = _check_beta(beta)
    if method == "auto":
        method = "enumerate" if g.n <= 12 else "dp"
    if method == "enumerate":
        return UniPoly(ising_coefficients_enum(g, beta, cap))
    if method == "dp":
        return two_state_poly(g, 1, beta, 1)
    raise PreconditionError(f"unknown method {method!r}")


def two_state_poly(g: MultiGraph, pp, pm, mm) -> UniPoly:
    """sum over S of lambda^|S| prod(edge factor); edge factors pp, pm, mm."""
    val, scale = two_state_sum(g, pp, pm, mm, 1, 1, PolyAlgebra)
    return UniPoly(Fraction(c, scale) for c in val)


def twospin_poly(g: MultiGraph, alpha1, alpha2) -> UniPoly:
    """Z_S(G; alpha1, alpha2, lambda): ++ edges weigh alpha1, -- edges alpha2."""
    return two_state_poly(g, Fraction(alpha1), 1, Fraction(alpha2))


def matching_poly(g: MultiGraph, allow_signed: bool = False, method: str = "dp", cap: int = MATCHING_ENUMERATION_CAP) -> UniPoly:
    """Z_M(G; lambda) = sum over matchings M of prod w(e) * lambda^(n - 2|M|)."""
    if not allow_signed and any(w <= 0 for u, v, w in g.edges if u != v):
        raise PreconditionError("matching weights must be positive (pass allow_signed=True)")
    if method == "enumerate":
        return matching_poly_enum(g, cap)
    if method != "dp":
        raise PreconditionError(f"unknown method {method!r}")
    val, scale = matching_sum(g, 1, PolyAlgebra)
    return UniPoly(Fraction(c, scale) for c in val)


def _ratio(num, den) -> Fraction:
    if den == 0:
        raise ZeroPartitionError("partition function vanished")
    return Fraction(num, den) if isinstance(num, int) and isinstance(den, int) else Fraction(num) / Fraction(den)


# observables


@dataclass(frozen=True)
class Moments:
    """Z and its low moments at a fixed activity, scaled by a common factor."""

    z: int
    first: int
    second: int
    ticks: int
    scale: int = 1

    def partition_function(self) -> Fraction:
        return Fraction(self.z, self.scale)

    def mean(self) -> Fraction:
        return _ratio(self.first, self.z)

    def variance(self) -> Fraction:
        m = self.mean()
        return _ratio(self.second, self.z) - m * m

    def mean_ticks(self) -> Fraction:
        return _ratio(self.ticks, self.z)


def ising_moments(g: MultiGraph, beta, lam) -> Moments:
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    val, scale = two_state_sum(g, 1, Fraction(beta), 1, lam, 1, MomentAlgebra)
    return Moments(*val, scale)


def twospin_moments(g: MultiGraph, alpha1, alpha2, lam) -> Moments:
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    val, scale = two_state_sum(g, Fraction(alpha1), 1, Fraction(alpha2), lam, 1, MomentAlgebra)
    return Moments(*val, scale)


def matching_moments(g: MultiGraph, lam, allow_signed: bool = False) -> Moments:
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    if not allow_signed and any(w <= 0 for u, v, w in g.edges if u != v):
        raise PreconditionError("matching weights must be positive")
    val, scale = matching_sum(g, lam, MomentAlgebra)
    return Moments(*val, scale)


def magnetization(g: MultiGraph, beta, lam) -> Fraction:
    """Mean number of + spins, DZ/Z."""
    return ising_moments(g, _check_beta(beta), lam).mean()


def susceptibility(g: MultiGraph, beta, lam) -> Fraction:
    """D^2 Z / Z - (DZ / Z)^2, the variance of the + count."""
    return ising_moments(g, _check_beta(beta), lam).variance()


def mean_energy(g: MultiGraph, beta, lam) -> Fraction:
    """beta dZ/dbeta / Z, the mean number of disagreeing edges."""
    return ising_moments(g, _check_beta(beta), lam).mean_ticks()


def twospin_magnetization(g: MultiGraph, alpha1, alpha2, lam) -> Fraction:
    return twospin_moments(g, alpha1, alpha2, lam).mean()


def monomer_count(g: MultiGraph, lam, allow_signed: bool = False) -> Fraction:
    """Mean number of unmatched vertices, D Z_M / Z_M."""
    return matching_moments(g, lam, allow_signed).mean()


def dimer_count(g: MultiGraph, lam, allow_signed: bool = False) -> Fraction:
    return (g.n - monomer_count(g, lam, allow_signed)) / 2


def observables(g: MultiGraph, model: str = "ising", beta=None, lam=1, alpha1=None, alpha2=None) -> dict[str, Fraction]:
    """Every observable of the model at one parameter point, keyed by kind."""
    if model == "ising":
        mo = ising_moments(g, _check_beta(beta), lam)
        return {
            "partition_function": mo.partition_function(),
            "magnetization": mo.mean(),
            "susceptibility": mo.variance(),
            "mean_energy": mo.mean_ticks(),
        }
    if model == "matching":
        mo = matching_moments(g, lam)
        u = mo.mean()
        return {
            "partition_function": mo.partition_function(),
            "monomer_count": u,
            "dimer_count": (g.n - u) / 2,
        }
    if model == "twospin":
        mo = twospin_moments(g, alpha1, alpha2, lam)
        return {
            "partition_function": mo.partition_function(),
            "magnetization": mo.mean(),
            "susceptibility": mo.variance(),
        }
    raise PreconditionError(f"unknown model {model!r}")


# weighted (multivariate) evaluation


@dataclass(frozen=True)
class ActivityAssignment:
    """Per-vertex complex activities and nonnegative integer weights."""

    z: tuple
    w: tuple[int, ...]

    def __post_init__(self):
        if len(self.z) != len(self.w):
            raise PreconditionError("activities and weights differ in length")
        if any(int(x) != x or x < 0 for x in self.w):
            raise PreconditionError("weights must be nonnegative integers")


def legal_weights(g: MultiGraph, w) -> bool:
    """Positive integers with w(v) >= deg(v)."""
    return len(w) == g.n and all(int(w[v]) == w[v] and w[v] >= max(g.degree(v), 1) for v in range(g.n))


def _weighted_terms(g, beta, z, w, fixed=None):
    """Yield (mask, weight) for every configuration, plus-set given as bitmask.

    ``fixed`` maps vertices to forced spins (1 plus, 0 minus); forced-plus
    vertices still pay their beta factors but not their activity factors.
    """
    n = g.n
    if n > ENUMERATION_CAP:
        raise CapExceededError("weighted evaluation enumerates 2**n terms")
    fixed = fixed or {}
    free = [v for v in range(n) if v not in fixed]
    base_mask = sum(1 << v for v, s in fixed.items() if s)
    zw = [z[v] ** int(w[v]) for v in range(n)]
    edges = [(u, v) for u, v, _ in g.edges if u != v]
    for sub in range(1 << len(free)):
        mask = base_mask
        act = 1
        for i, v in enumerate(free):
            if sub >> i & 1:
                mask |= 1 << v
                act = act * zw[v]
        d = sum(1 for u, v in edges if (mask >> u & 1) != (mask >> v & 1))
        yield mask, act * beta**d


def weighted_sums(g: MultiGraph, beta, z, w, fixed=None):
    """Return (Z_w, D_G Z_w, sum of |terms|) in one pass.

    Works for Fractions (exact) and mpmath numbers. D_G Z_w counts, for every
    term, the total weight of its free plus vertices.
    """
    n = g.n
    free_w = [0 if fixed and v in fixed else int(w[v]) for v in range(n)]
    zsum = dz = scale = 0
    for mask, term in _weighted_terms(g, beta, z, w, fixed):
        k = sum(free_w[v] for v in range(n) if mask >> v & 1)
        zsum = zsum + term
        dz = dz + k * term
        scale = scale + abs(term)
    return zsum, dz, scale


def weighted_ising_eval(g: MultiGraph, beta, z, w, prec: int | None = None):
    if prec:
        with mpmath.workprec(prec):
            return weighted_sums(g, mpmath.mpf(Fraction(beta).numerator) / Fraction(beta).denominator, [mpmath.mpmathify(x) for x in z], w)[0]
    return weighted_sums(g, beta, z, w)[0]


def weighted_ising_D_eval(g: MultiGraph, beta, z, w, prec: int | None = None):
    if prec:
        with mpmath.workprec(prec):
            return weighted_sums(g, mpmath.mpf(Fraction(beta).numerator) / Fraction(beta).denominator, [mpmath.mpmathify(x) for x in z], w)[1]
    return weighted_sums(g, beta, z, w)[1]


def conditioned_weighted(g: MultiGraph, beta, z, w, plus_set) -> tuple:
    """Z_w^+(S) and D_G Z_w^+(S): spins in S forced plus, their activities dropped."""
    return weighted_sums(g, beta, z, w, fixed={v: 1 for v in plus_set})[:2]

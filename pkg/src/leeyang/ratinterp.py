"""Exact rational-function interpolation from sample values.

Given values R_i = p(x_i)/q(x_i) of a reduced rational function with
deg p, deg q <= n, the coefficient vector of (p, q) spans the null space of the
homogeneous system p(x_i) - R_i q(x_i) = 0, cleared to integer rows. The null
space is computed by FLINT, with a pure-Python fraction-free Bareiss
elimination kept as a reference solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import InconsistentSamplesError, NormalizationError, PreconditionError, RankDeficientError
from .polynomial import UniPoly, gcd


@dataclass(frozen=True)
class SampleSet:
    points: tuple[tuple[Fraction, Fraction], ...]
    degree: int

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(r)) for x, r in self.points)
        object.__setattr__(self, "points", pts)
        xs = [x for x, _ in pts]
        if len(set(xs)) != len(xs):
            raise PreconditionError("sample abscissae must be distinct")
        if len(pts) < 2 * self.degree + 2:
            raise PreconditionError(f"need at least {2 * self.degree + 2} samples for degree {self.degree}")


@dataclass(frozen=True)
class RationalFunctionRep:
    """p/q with integer, jointly primitive coefficients; first nonzero entry of (p, q) positive."""

    numerator: UniPoly
    denominator: UniPoly
    normalization: str = "primitive"
    nullity: int = 1

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)

    def normalize(self, index: int, value=1, which: str = "denominator") -> RationalFunctionRep:
        """Rescale so the given coefficient of numerator or denominator equals value."""
        poly = self.denominator if which == "denominator" else self.numerator
        c = poly.coeff(index)
        if c == 0:
            raise NormalizationError(f"coefficient {index} of the {which} is zero")
        f = Fraction(value) / c
        return RationalFunctionRep(self.numerator.scale(f), self.denominator.scale(f), f"{which}[{index}]={value}", self.nullity)


def bareiss_nullspace(rows: list[list[int]], ncols: int) -> tuple[int, list[list[Fraction]]]:
    """Rank and a null-space basis of an integer matrix.

    Fraction-free elimination keeps every intermediate entry an integer minor.
    Each free column yields one basis vector with that column set to 1.
    """
    a = [list(r) for r in rows]
    m = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prc = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (prc * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = prc
        pivots.append(c)
        r += 1
    rank = len(pivots)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k in range(rank - 1, -1, -1):
            c = pivots[k]
            s = sum(a[k][j] * x[j] for j in range(c + 1, ncols))
            x[c] = Fraction(-s) / a[k][c]
        basis.append(x)
    return rank, basis


def _primitive_vector(v: list[Fraction]) -> list[int]:
    den = reduce(math.lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(math.gcd, ints, 0)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    return [-x for x in ints] if first < 0 else ints


def _solve(points, n, solver=bareiss_nullspace):
    ncols = 2 * n + 2
    rows = []
    for x, r in points:
        powers = [x**k for k in range(n + 1)]
        row = powers + [-r * pk for pk in powers]
        den = reduce(math.lcm, (e.denominator for e in row), 1)
        rows.append([int(e * den) for e in row])
    rank, basis = solver(rows, ncols)
    return ncols - rank, basis


def flint_nullspace(rows: list[list[int]], ncols: int) -> tuple[int, list[list[Fraction]]]:
    """Same contract as :func:`bareiss_nullspace`, computed by FLINT."""
    import flint

    basis, nullity = flint.fmpz_mat(rows).nullspace()
    vecs = [[Fraction(int(basis[i, j])) for i in range(ncols)] for j in range(nullity)]
    return ncols - nullity, vecs


def interpolate(samples: SampleSet | list, degree: int | None = None, minimal: bool = False, method: str = "flint") -> RationalFunctionRep:
    """Recover p/q of degree at most n from at least 2n + 2 exact samples.

    Raises RankDeficientError when the null space is not one-dimensional, which
    happens when p and q share a factor or the true degree is lower than n.
    With ``minimal=True`` a null space of dimension d instead signals reduced
    degree n - d + 1, and the reduced representation at that degree is returned.
    ``method`` selects the null-space solver: "flint" or the pure-Python "bareiss".
    """
    if method not in _SOLVERS:
        raise PreconditionError(f"unknown method {method!r}")
    if not isinstance(samples, SampleSet):
        samples = SampleSet(tuple(samples), degree)
    n = samples.degree
    solver = _SOLVERS[method]
    nullity, basis = _solve(samples.points, n, solver)
    if nullity != 1 and minimal and nullity > 1:
        n = n - nullity + 1
        nullity, basis = _solve(samples.points, n, solver)
    if nullity != 1:
        raise RankDeficientError(f"null space has dimension {nullity}, expected 1")
    v = _primitive_vector(basis[0])
    p, q = UniPoly(v[: n + 1]), UniPoly(v[n + 1 :])
    for x, _ in samples.points:
        if q(x) == 0:
            raise InconsistentSamplesError(f"denominator vanishes at sample {x}")
    if gcd(p, q).degree > 0:
        raise RankDeficientError("recovered numerator and denominator share a factor")
    return RationalFunctionRep(p, q, nullity=nullity)


_SOLVERS = {"flint": flint_nullspace, "bareiss": bareiss_nullspace}

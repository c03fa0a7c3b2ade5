"""Root isolation and zero-location certificates.

Exact tests (Schur-Cohn, Sturm, gcd) decide properties whenever they can. A
high-precision Aberth-Ehrlich solver with rigorous-in-exact-arithmetic error
discs supplies the numeric side and the witnesses.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from shapely.geometry import MultiPoint, Point

from .errors import PreconditionError, RootFindingError, ZeroPartitionError
from .graphs import MultiGraph
from .partition import legal_weights, weighted_sums
from .polynomial import UniPoly, count_real_roots, gcd, squarefree_part

DEFAULT_PREC = 256


@dataclass
class RootSet:
    """Approximate roots with inclusion radii.

    Every connected union of k discs contains exactly k roots (counted with
    multiplicity), so an isolated disc pins a simple root.
    """

    roots: list
    radii: list
    precision: int
    iterations: int = 0
    method: str = "aberth-ehrlich"

    def __len__(self):
        return len(self.roots)

    def moduli(self) -> list:
        return [abs(z) for z in self.roots]


@dataclass
class Certificate:
    property: str
    verdict: bool
    exact: bool = True
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_json(self, graph_id=None) -> dict:
        out = {"graph_id": graph_id, "property": self.property, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, mpmath.mpc):
        return [mpmath.nstr(x.real, 30), mpmath.nstr(x.imag, 30)]
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 30)
    if isinstance(x, UniPoly):
        return x.to_json()
    return x


# numeric root finding


def _mp_coeffs(p: UniPoly):
    return [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]


def _horner2(coeffs, z):
    """Value and derivative of the polynomial at z."""
    val = mpmath.mpc(0)
    der = mpmath.mpc(0)
    for c in reversed(coeffs):
        der = der * z + val
        val = val * z + c
    return val, der


def find_roots(p: UniPoly, precision: int = DEFAULT_PREC, max_iter: int = 1000) -> RootSet:
    """All complex roots by simultaneous Aberth-Ehrlich iteration.

    Zero roots are split off exactly. Iteration stops once every residual sits
    at the rounding level of the evaluation (backward stability) or every
    correction is below the working precision; both tests tolerate multiple
    roots, whose iterates converge only to about half precision.
    """
    if p.degree < 1:
        raise PreconditionError("need a polynomial of degree at least 1")
    zeros = p.zero_multiplicity()
    q = p.divide_by_x_power(zeros)
    with mpmath.workprec(precision + 32):
        eps = mpmath.mpf(2) ** (-precision)
        roots: list = [mpmath.mpc(0)] * zeros
        radii: list = [mpmath.mpf(0)] * zeros
        n = q.degree
        if n == 0:
            return RootSet(roots, radii, precision)
        a = _mp_coeffs(q)
        absa = [abs(c) for c in a]
        bound = 2 * max((absa[n - k] / absa[n]) ** (mpmath.mpf(1) / k) for k in range(1, n + 1))
        z = [bound * mpmath.expj(2 * mpmath.pi * j / n + mpmath.mpf("0.4")) for j in range(n)]
        it = 0
        done = False
        while it < max_iter and not done:
            it += 1
            small_step = True
            resid_ok = True
            for i in range(n):
                zi = z[i]
                val, der = _horner2(a, zi)
                mag = sum(c * abs(zi) ** k for k, c in enumerate(absa))
                if abs(val) <= 4 * n * eps * mag:
                    continue
                resid_ok = False
                s = mpmath.fsum(1 / (zi - z[j]) for j in range(n) if j != i)
                if der == 0:
                    w = val / (-(val * s)) if s != 0 else mpmath.mpc(eps)
                else:
                    ratio = val / der
                    w = ratio / (1 - ratio * s)
                z[i] = zi - w
                if abs(w) > eps * 16 * max(1, abs(z[i])):
                    small_step = False
            done = resid_ok or small_step
        if not done:
            raise RootFindingError(f"no convergence after {max_iter} iterations", best=list(z))
        lead = a[n]
        for i in range(n):
            val, _ = _horner2(a, z[i])
            prod = mpmath.mpc(1)
            for j in range(n):
                if j != i:
                    prod *= z[i] - z[j]
            r = mpmath.inf if prod == 0 else n * abs(val) / abs(lead * prod)
            roots.append(+z[i])
            radii.append(r)
    return RootSet(roots, radii, precision, it)


def isolate_components(rs: RootSet) -> list[list[int]]:
    """Connected components of the inclusion discs, as index lists."""
    n = len(rs.roots)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if abs(rs.roots[i] - rs.roots[j]) <= rs.radii[i] + rs.radii[j]:
                parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return list(comps.values())


# exact certificates


def schur_cohn_inside(p: UniPoly) -> tuple[bool, int]:
    """True iff every root of p lies strictly inside the unit disc.

    Repeatedly replaces p by (a_n p - a_0 p*)/z where p* is the reversal; the
    reduced polynomial keeps the root count inside the disc whenever
    |a_0| < |a_n| and has degree one less. Returns the verdict and the step at
    which it was decided.
    """
    if p.is_zero():
        raise PreconditionError("zero polynomial")
    c = p.primitive_int()
    step = 0
    while len(c) > 1:
        a0, an = c[0], c[-1]
        if abs(a0) >= abs(an):
            return False, step
        rev = c[::-1]
        nxt = [an * x - a0 * y for x, y in zip(c, rev)]
        nxt = nxt[1:]
        while nxt and nxt[-1] == 0:
            nxt.pop()
        g = math.gcd(*nxt) if len(nxt) > 1 else abs(nxt[0])
        c = [x // g for x in nxt]
        step += 1
    return True, step


def certify_strictly_inside_unit_disk(p: UniPoly) -> Certificate:
    ok, step = schur_cohn_inside(p)
    return Certificate("strictly_inside_unit_disk", ok, exact=True, details={"decided_at_step": step})


def is_self_inversive(p: UniPoly) -> bool:
    """Exact necessary condition for real polynomials with all roots on |z| = 1."""
    c = p.coeffs
    rev = c[::-1]
    return c == rev or c == tuple(-x for x in rev)


def certify_unit_circle(p: UniPoly, tol: float = 1e-25, precision: int = DEFAULT_PREC) -> Certificate:
    """Numeric check that every root has modulus within tol of 1.

    The exact self-inversive condition (coefficients palindromic up to sign) is
    checked first; violating it refutes the property outright.
    """
    if p.degree < 1:
        raise PreconditionError("need degree at least 1")
    if not is_self_inversive(p):
        return Certificate("roots_on_unit_circle", False, exact=True, details={"reason": "not self-inversive"})
    rs = find_roots(p, precision)
    with mpmath.workprec(precision):
        devs = [abs(abs(z) - 1) for z in rs.roots]
        worst = max(range(len(devs)), key=lambda i: devs[i])
        ok = devs[worst] <= tol
    return Certificate(
        "roots_on_unit_circle",
        bool(ok),
        exact=False,
        witness=None if ok else rs.roots[worst],
        details={"max_deviation": devs[worst], "precision": precision},
    )


def imaginary_axis_polynomial(zm: UniPoly) -> UniPoly:
    """q(y) with q(y) = Z_M(iy) / i**n, real coefficients in y.

    The coefficient c_j of lambda^(n-2j) contributes (-1)^j c_j y^(n-2j).
    """
    n = zm.degree
    out = [Fraction(0)] * (n + 1)
    for k, c in enumerate(zm.coeffs):
        if c == 0:
            continue
        if (n - k) % 2:
            raise PreconditionError("polynomial lacks the required parity")
        j = (n - k) // 2
        out[k] = c * (-1) ** j
    return UniPoly(out)


def certify_imaginary_axis_and_simple(zm: UniPoly) -> tuple[Certificate, Certificate]:
    """Roots on the imaginary axis (Sturm), and squarefreeness (gcd with Z')."""
    q = imaginary_axis_polynomial(zm)
    sf = squarefree_part(q)
    real = count_real_roots(sf)
    axis = Certificate(
        "roots_on_imaginary_axis",
        real == sf.degree,
        exact=True,
        details={"distinct_real_roots": real, "distinct_roots": sf.degree},
    )
    g = gcd(zm, zm.derivative())
    simple = Certificate("simple_roots", g.degree == 0, exact=True, witness=None if g.degree == 0 else g)
    return axis, simple


def certify_squarefree(p: UniPoly) -> Certificate:
    g = gcd(p, p.derivative())
    return Certificate("squarefree", g.degree == 0, exact=True, witness=None if g.degree == 0 else g)


def certify_coprime(a: UniPoly, b: UniPoly, name: str = "coprime") -> Certificate:
    g = gcd(a, b)
    return Certificate(name, g.degree == 0, exact=True, witness=None if g.degree == 0 else g)


def gauss_lucas_check(p: UniPoly, q: UniPoly, precision: int = 128) -> Certificate:
    """Every root of q lies in the convex hull of the roots of p.

    Distances are measured in double precision by shapely after the roots are
    found at the requested precision; a root counts as inside when its distance
    to the hull is at most 1e-9 times the hull's scale.
    """
    pr = find_roots(p, precision).roots
    qr = find_roots(q, precision).roots if q.degree >= 1 else []
    pts = [(float(z.real), float(z.imag)) for z in pr]
    hull = MultiPoint(pts).convex_hull
    scale = max(1.0, max(math.hypot(*xy) for xy in pts))
    worst, witness = 0.0, None
    for z in qr:
        d = hull.distance(Point(float(z.real), float(z.imag)))
        if d > worst:
            worst, witness = d, z
    ok = worst <= 1e-9 * scale
    return Certificate("gauss_lucas", ok, exact=False, witness=None if ok else witness, details={"max_distance": worst})


# weighted Lee-Yang probes


def newman_check(g: MultiGraph, beta, z, w, slack=None) -> bool:
    """Re(D_G Z_w / Z_w) >= n/2 at one activity vector.

    Uses exact arithmetic for rational real activities and mpmath otherwise.
    The bound is attained when every |z_v| = 1, so floating inputs are allowed
    ``slack`` below it (default n * 2^(-prec/2) at the working precision).
    """
    if not legal_weights(g, w):
        raise PreconditionError("weights must satisfy w(v) >= max(deg(v), 1)")
    zsum, dz, _ = weighted_sums(g, beta, z, w)
    if zsum == 0:
        raise ZeroPartitionError("weighted partition function vanished")
    ratio = dz / zsum
    re = ratio.real if hasattr(ratio, "real") else ratio
    if isinstance(re, Fraction):
        return re >= Fraction(g.n, 2) - (slack or 0)
    if slack is None:
        slack = g.n * mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))
    return re >= mpmath.mpf(g.n) / 2 - slack


@dataclass
class ProbeReport:
    samples: int
    min_modulus: object
    min_newman_slack: object
    violations: int
    counterexample: object = None

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _sample_activities(rng: random.Random, n: int, radius: float):
    """Log-uniform moduli in [1, radius], uniform angles, boundary cases forced.

    With probability 1/4 every modulus is exactly 1; otherwise each vertex is
    put on the unit circle with probability 1/4.
    """
    all_boundary = rng.random() < 0.25
    out = []
    for _ in range(n):
        r = 1.0 if all_boundary or rng.random() < 0.25 else math.exp(rng.uniform(0, math.log(radius)))
        theta = rng.uniform(0, 2 * math.pi)
        out.append((r, theta))
    return out


def wsglp_probe(
    g: MultiGraph,
    beta,
    w,
    n_samples: int = 1000,
    seed: int = 0,
    radius: float = 4.0,
    precision: int = DEFAULT_PREC,
    slack: float = 1e-30,
    plus_set=(),
) -> ProbeReport:
    """Sample activities with |z_v| >= 1 and test Z_w != 0 and the Newman bound.

    With a nonempty ``plus_set`` the conditioned polynomial is probed instead.
    Z_w counts as nonzero when its modulus exceeds 2**(-precision/2) times the
    sum of the moduli of its terms.
    """
    if not legal_weights(g, w):
        raise PreconditionError("weights must satisfy w(v) >= max(deg(v), 1)")
    rng = random.Random(seed)
    fixed = {v: 1 for v in plus_set} or None
    n_free = g.n - len(plus_set)
    with mpmath.workprec(precision):
        b = mpmath.mpf(Fraction(beta).numerator) / Fraction(beta).denominator
        floor_factor = mpmath.mpf(2) ** (-precision // 2)
        half_n = mpmath.mpf(n_free) / 2
        min_mod = mpmath.inf
        min_slack = mpmath.inf
        violations = 0
        witness = None
        for _ in range(n_samples):
            z = [r * mpmath.expj(t) for r, t in _sample_activities(rng, g.n, radius)]
            zsum, dz, scale = weighted_sums(g, b, z, w, fixed)
            mod = abs(zsum)
            rel = mod / scale
            min_mod = min(min_mod, rel)
            bad = mod <= floor_factor * scale
            if not bad:
                slack_here = (dz / zsum).real - half_n
                min_slack = min(min_slack, slack_here)
                bad = slack_here < -slack
            if bad:
                violations += 1
                if witness is None:
                    witness = {"z": z, "w": list(w), "Z": zsum}
    return ProbeReport(n_samples, min_mod, min_slack, violations, witness)

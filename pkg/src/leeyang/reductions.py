"""Recover partition functions from average-value oracles.

Each pipeline queries an oracle on augmented graphs G(k), converts every
answer into an average of the original graph at a shifted activity lambda_k,
and interpolates the rational function DZ/Z (or the susceptibility) from
those exact samples. The default oracles come from :mod:`partition`, which
turns every pipeline into a checkable round trip.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath

from . import partition
from .errors import InconsistentSamplesError, PreconditionError
from .graphs import MultiGraph, connected, path_augment, star_augment
from .polynomial import UniPoly, fraction_sqrt
from .ratinterp import RationalFunctionRep, interpolate

log = logging.getLogger(__name__)


@dataclass
class AverageOracle:
    """Exact average of a model on a graph at activity lambda.

    ``fn(graph, lam)`` must be deterministic and return a Fraction for
    rational input. Every call is appended to ``calls``.
    """

    kind: str
    fn: Callable[[MultiGraph, Fraction], Fraction]
    calls: list = field(default_factory=list)

    def __call__(self, graph: MultiGraph, lam) -> Fraction:
        value = Fraction(self.fn(graph, Fraction(lam)))
        self.calls.append((graph.n, graph.m, Fraction(lam), value))
        return value


def magnetization_oracle(beta) -> AverageOracle:
    beta = Fraction(beta)
    return AverageOracle("magnetization", lambda h, lam: partition.magnetization(h, beta, lam))


def susceptibility_oracle(beta) -> AverageOracle:
    beta = Fraction(beta)
    return AverageOracle("susceptibility", lambda h, lam: partition.susceptibility(h, beta, lam))


def monomer_oracle() -> AverageOracle:
    return AverageOracle("monomer_count", lambda h, lam: partition.monomer_count(h, lam))


def twospin_oracle(alpha1, alpha2) -> AverageOracle:
    a1, a2 = Fraction(alpha1), Fraction(alpha2)
    return AverageOracle("magnetization", lambda h, lam: partition.twospin_magnetization(h, a1, a2, lam))


@dataclass
class TranscriptEntry:
    k: int
    graph_size: int
    oracle_value: Fraction
    lambda_k: Fraction
    derived_average: Fraction


@dataclass
class RecoveryReport:
    model: str
    polynomial: UniPoly
    value_at_one: Fraction
    lambdas: list[Fraction]
    transcript: list[TranscriptEntry]
    rational_function: RationalFunctionRep
    consistent: bool
    verified: bool | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "polynomial": self.polynomial.to_json(),
            "value_at_one": str(self.value_at_one),
            "lambdas": [str(x) for x in self.lambdas],
            "transcript": [
                {
                    "k": t.k,
                    "graph_size": t.graph_size,
                    "oracle_value": str(t.oracle_value),
                    "lambda_k": str(t.lambda_k),
                    "derived_average": str(t.derived_average),
                }
                for t in self.transcript
            ],
            "numerator": self.rational_function.numerator.to_json(),
            "denominator": self.rational_function.denominator.to_json(),
            "consistent": self.consistent,
            "verified": self.verified,
            **{k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()},
        }


def _assert_distinct(lams):
    if len(set(lams)) != len(lams):
        raise InconsistentSamplesError("shifted activities collide")


def _assert_monotone(lams):
    inc = all(a < b for a, b in zip(lams, lams[1:]))
    dec = all(a > b for a, b in zip(lams, lams[1:]))
    if not (inc or dec):
        raise InconsistentSamplesError("shifted activities are not strictly monotone")


def _check_graph(g: MultiGraph):
    if not connected(g):
        raise PreconditionError("graph must be connected")


# path states


@dataclass(frozen=True)
class PathState:
    """Recurrence state for a pendant path; unused fields stay None."""

    k: int
    p_plus: Fraction | None = None
    p_minus: Fraction | None = None
    r: Fraction | None = None
    p_plus_dot: Fraction | None = None
    p_minus_dot: Fraction | None = None
    r_dot: Fraction | None = None
    y: Fraction | None = None
    y_dot: Fraction | None = None
    t: Fraction | None = None
    m_plus: Fraction | None = None
    m_minus: Fraction | None = None


def ising_path_states(beta, lam, k: int) -> list[PathState]:
    """States 1..k of the Ising pendant-path recurrences.

    p_k^+ and p_k^- are partition functions of a k-vertex path with the end
    vertex forced plus (activity included) or minus; dots are lambda-derivatives.
    """
    beta, lam = Fraction(beta), Fraction(lam)
    if not 0 < beta < 1 or lam <= 0 or k < 1:
        raise PreconditionError("need 0 < beta < 1, lambda > 0 and k >= 1")
    pp, pm, dpp, dpm = lam, Fraction(1), Fraction(1), Fraction(0)
    out = []
    for j in range(1, k + 1):
        if j > 1:
            pp, pm, dpp, dpm = (
                lam * (beta * pm + pp),
                beta * pp + pm,
                (beta * pm + pp) + lam * (beta * dpm + dpp),
                beta * dpp + dpm,
            )
        r = pp / pm
        rd = (dpp * pm - pp * dpm) / (pm * pm)
        if rd <= 0:
            raise InconsistentSamplesError("r_dot must be positive")
        out.append(PathState(j, p_plus=pp, p_minus=pm, r=r, p_plus_dot=dpp, p_minus_dot=dpm, r_dot=rd))
    return out


def ising_path_state(beta, lam, k: int) -> PathState:
    return ising_path_states(beta, lam, k)[-1]


def matching_path_states(lam, k: int) -> list[PathState]:
    """States 0..k of y_k = lam*y_{k-1} + y_{k-2}, the matching polynomial of P_k."""
    lam = Fraction(lam)
    if lam <= 0 or k < 0:
        raise PreconditionError("need lambda > 0 and k >= 0")
    ys = [Fraction(1), lam]
    yd = [Fraction(0), Fraction(1)]
    for j in range(2, k + 1):
        ys.append(lam * ys[j - 1] + ys[j - 2])
        yd.append(ys[j - 1] + lam * yd[j - 1] + yd[j - 2])
    return [PathState(j, y=ys[j], y_dot=yd[j], t=yd[j] / ys[j]) for j in range(k + 1)]


def matching_path_state(lam, k: int) -> PathState:
    return matching_path_states(lam, k)[k]


def matching_path_closed_form(lam, k: int, precision: int = 128):
    """y_k = (xi^(k+1) - eta^(k+1)) / (xi - eta) with xi, eta roots of x^2 = lam x + 1."""
    with mpmath.workprec(precision):
        lam = mpmath.mpf(Fraction(lam).numerator) / Fraction(lam).denominator
        s = mpmath.sqrt(lam * lam + 4)
        xi, eta = (lam + s) / 2, (lam - s) / 2
        return (xi ** (k + 1) - eta ** (k + 1)) / (xi - eta), xi, eta


def _twospin_step(state, a1, a2, lam, j):
    pp, pm, mp, mm = state
    zp = a1 * pp + pm
    zm = a2 * pm + pp
    return (lam * zp, zm, 1 + (a1 * mp * pp + mm * pm) / zp, (a2 * mm * pm + mp * pp) / zm)


def twospin_path_states(alpha1, alpha2, lam, k: int, doubled: bool = False) -> list[PathState]:
    """States 1..k for a two-spin pendant path.

    m^+ and m^- are the mean plus counts on the path given its end vertex is
    plus or minus. In doubled mode every path edge is a parallel pair, so the
    potentials are squared from the second vertex on.
    """
    a1, a2, lam = Fraction(alpha1), Fraction(alpha2), Fraction(lam)
    if min(a1, a2, lam) <= 0 or a1 * a2 <= 1 or k < 1:
        raise PreconditionError("need positive parameters, alpha1*alpha2 > 1 and k >= 1")
    e1, e2 = (a1 * a1, a2 * a2) if doubled else (a1, a2)
    state = (lam, Fraction(1), Fraction(1), Fraction(0))
    out = [PathState(1, p_plus=lam, p_minus=Fraction(1), r=lam, m_plus=Fraction(1), m_minus=Fraction(0))]
    for j in range(2, k + 1):
        state = _twospin_step(state, e1, e2, lam, j)
        pp, pm, mp, mm = state
        if mp - mm <= 0:
            raise InconsistentSamplesError("m_plus - m_minus must be positive")
        out.append(PathState(j, p_plus=pp, p_minus=pm, r=pp / pm, m_plus=mp, m_minus=mm))
    return out


def twospin_path_state(alpha1, alpha2, lam, k: int, doubled: bool = False) -> PathState:
    return twospin_path_states(alpha1, alpha2, lam, k, doubled)[-1]


def twospin_host_state(alpha1, alpha2, lam, path: PathState) -> PathState:
    """State one step beyond ``path`` through a single host edge."""
    a1, a2, lam = Fraction(alpha1), Fraction(alpha2), Fraction(lam)
    pp, pm, mp, mm = _twospin_step((path.p_plus, path.p_minus, path.m_plus, path.m_minus), a1, a2, lam, path.k + 1)
    return PathState(path.k + 1, p_plus=pp, p_minus=pm, r=pp / pm, m_plus=mp, m_minus=mm)


# pipelines


def _ising_flip(g, beta, lam, oracle):
    """For lambda < 1 query at 1/lambda through the spin-flip symmetry M(H, 1/l) = |V(H)| - M(H, l)."""
    lam = Fraction(lam)
    if lam == 1:
        raise PreconditionError("lambda = 1 is excluded")
    if lam > 1:
        return lam, oracle, False
    inner = oracle

    def flipped(h, x):
        return h.n - inner(h, 1 / Fraction(x))

    return 1 / lam, flipped, True


def recover_ising_star(g: MultiGraph, beta, lam, oracle=None, verify: bool = True) -> RecoveryReport:
    """Recover Z_I(G; beta, .) from magnetization queries on star augmentations."""
    _check_graph(g)
    beta = partition._check_beta(beta)
    oracle = oracle or magnetization_oracle(beta)
    lam, query, flipped = _ising_flip(g, beta, lam, oracle)
    n = g.n
    a = 1 + beta * lam
    samples, transcript = [], []
    for k in range(2 * n + 2):
        h = star_augment(g, k)
        m = query(h, lam)
        lk = lam * ((beta + lam) / a) ** k
        shift = k * n * beta * lam / a
        factor = 1 + k * lam * (1 - beta * beta) / (a * (beta + lam))
        mk = (m - shift) / factor
        samples.append((lk, mk))
        transcript.append(TranscriptEntry(k, h.n, m, lk, mk))
    return _ising_report("ising-star", g, beta, samples, transcript, verify, {"flipped": flipped})


def _ising_report(model, g, beta, samples, transcript, verify, extra):
    lams = [x for x, _ in samples]
    _assert_distinct(lams)
    _assert_monotone(lams)
    rep = interpolate(samples, g.n).normalize(0, 1)
    z = rep.denominator
    consistent = rep.numerator == z.lambda_derivative()
    verified = z == partition.ising_poly(g, beta) if verify else None
    return RecoveryReport(model, z, z(Fraction(1)), lams, transcript, rep, consistent, verified, extra)


def recover_ising_path(g: MultiGraph, beta, lam, oracle=None, verify: bool = True) -> RecoveryReport:
    """Bounded-degree variant: pendant paths instead of stars."""
    _check_graph(g)
    beta = partition._check_beta(beta)
    oracle = oracle or magnetization_oracle(beta)
    lam, query, flipped = _ising_flip(g, beta, lam, oracle)
    n = g.n
    states = ising_path_states(beta, lam, 2 * n + 3)
    samples, transcript = [], []
    maxdeg = 0
    for k in range(1, 2 * n + 3):
        h = path_augment(g, k)
        maxdeg = max(maxdeg, h.max_degree())
        m = query(h, lam)
        st = states[k]  # index k holds the state of P_(k+1)
        lk = st.r
        shift = n * lam * st.p_minus_dot / st.p_minus
        factor = lam * st.r_dot / st.r
        mk = (m - shift) / factor
        samples.append((lk, mk))
        transcript.append(TranscriptEntry(k, h.n, m, lk, mk))
    if maxdeg > max(g.max_degree() + 1, 2):
        raise InconsistentSamplesError("augmented graph exceeds the degree bound")
    return _ising_report("ising-path", g, beta, samples, transcript, verify, {"flipped": flipped, "max_degree_queried": maxdeg})


def recover_via_susceptibility(g: MultiGraph, beta, oracle=None, verify: bool = True) -> RecoveryReport:
    """Interpolate the susceptibility in lambda, recover Z^2 and take the square root at 1."""
    _check_graph(g)
    beta = partition._check_beta(beta)
    oracle = oracle or susceptibility_oracle(beta)
    n = g.n
    npts = 4 * n + 2
    samples, transcript = [], []
    for j in range(1, npts + 1):
        lj = Fraction(j, npts)
        chi = oracle(g, lj)
        samples.append((lj, chi))
        transcript.append(TranscriptEntry(j, g.n, chi, lj, chi))
    lams = [x for x, _ in samples]
    _assert_distinct(lams)
    rep = interpolate(samples, 2 * n).normalize(0, 1)
    z2 = rep.denominator
    try:
        value = fraction_sqrt(z2(Fraction(1)))
    except ValueError:
        raise InconsistentSamplesError("Z^2(1) is not a rational square") from None
    try:
        z = z2.sqrt()
    except ValueError:
        raise InconsistentSamplesError("recovered Z^2 is not a perfect square") from None
    consistent = z(Fraction(1)) == value and rep.numerator == z * z.lambda_derivative().lambda_derivative() - z.lambda_derivative() ** 2
    verified = z == partition.ising_poly(g, beta) if verify else None
    return RecoveryReport("susceptibility", z, value, lams, transcript, rep, consistent, verified, {"z_squared": z2.to_json()})


def recover_matching_star(g: MultiGraph, lam, oracle=None, verify: bool = True) -> RecoveryReport:
    """Recover Z_M from monomer-count queries on star augmentations; W is the constant term."""
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    oracle = oracle or monomer_oracle()
    n = g.n
    l2 = lam * lam
    samples, transcript = [], []
    k = 0
    while len(samples) < 2 * n + 2:
        if k == l2:
            k += 1
            continue
        h = star_augment(g, k)
        u = oracle(h, lam)
        lk = lam + k / lam
        uk = (u - n * k) * (l2 + k) / (l2 - k)
        samples.append((lk, uk))
        transcript.append(TranscriptEntry(k, h.n, u, lk, uk))
        k += 1
    return _matching_report("matching-star", g, samples, transcript, verify)


def _matching_report(model, g, samples, transcript, verify):
    """Interpolate U = DZ_M/Z_M and rebuild Z_M.

    When Z_M has a root of multiplicity m at 0 (no perfect matching), Z_M and
    DZ_M share the factor lambda^m and the reduced fraction has lower degree.
    All nonzero roots are simple, so Z_M = lambda^(n - deg q) * q for the
    monic reduced denominator q.
    """
    lams = [x for x, _ in samples]
    _assert_distinct(lams)
    rep = interpolate(samples, g.n, minimal=True)
    rep = rep.normalize(rep.denominator.degree, 1)
    m = g.n - rep.denominator.degree
    z = rep.denominator * UniPoly([0] * m + [1])
    consistent = rep.numerator * UniPoly([0] * m + [1]) == z.lambda_derivative()
    verified = z == partition.matching_poly(g, allow_signed=True) if verify else None
    w = z.coeff(0)
    return RecoveryReport(model, z, z(Fraction(1)), lams, transcript, rep, consistent, verified, {"perfect_matching_weight": w, "zero_root_multiplicity": m})


def recover_matching_path(g: MultiGraph, lam, oracle=None, verify: bool = True) -> RecoveryReport:
    """Bounded-degree variant with pendant paths of even length 0, 2, ..., 4n+4."""
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    oracle = oracle or monomer_oracle()
    n = g.n
    kmax = 4 * n + 4
    states = matching_path_states(lam, kmax + 1)
    samples, transcript = [], []
    for k in range(0, kmax + 1, 2):
        s0, s1 = states[k], states[k + 1]
        gap = s1.t - s0.t
        if gap <= 0:
            raise InconsistentSamplesError("t_(k+1) - t_k must be positive for even k")
        h = g if k == 0 else path_augment(g, k)
        u = oracle(h, lam)
        lk = s1.y / s0.y
        uk = (u - n * lam * s0.t) / (lam * gap)
        samples.append((lk, uk))
        transcript.append(TranscriptEntry(k, h.n, u, lk, uk))
    _assert_monotone([x for x, _ in samples])
    return _matching_report("matching-path", g, samples, transcript, verify)


def twospin_case_doubled(alpha1, alpha2, lam) -> bool:
    """True when single paths give constant lambda_k and doubled paths are needed."""
    return (Fraction(alpha1) - 1) * Fraction(lam) - (Fraction(alpha2) - 1) == 0


def recover_twospin(g: MultiGraph, alpha1, alpha2, lam, oracle=None, verify: bool = True, double_connector: bool = False) -> RecoveryReport:
    """Recover Z_S(G; alpha1, alpha2, .) from magnetization queries on path augmentations."""
    _check_graph(g)
    a1, a2, lam = Fraction(alpha1), Fraction(alpha2), Fraction(lam)
    if min(a1, a2, lam) <= 0 or a1 * a2 <= 1:
        raise PreconditionError("need positive parameters with alpha1*alpha2 > 1")
    if a1 == a2 and lam == 1:
        raise PreconditionError("alpha1 = alpha2 with lambda = 1 is excluded")
    oracle = oracle or twospin_oracle(a1, a2)
    doubled = twospin_case_doubled(a1, a2, lam)
    n = g.n
    # connector potentials: squared only if the host edge is doubled as well
    c1, c2 = (a1 * a1, a2 * a2) if doubled and double_connector else (a1, a2)
    paths = twospin_path_states(a1, a2, lam, 2 * n + 2, doubled)
    samples, transcript = [], []
    for k in range(1, 2 * n + 3):
        h = path_augment(g, k, doubled=doubled, double_connector=double_connector)
        m = oracle(h, lam)
        host = twospin_host_state(c1, c2, lam, paths[k - 1])
        lk = host.r
        mk = (m - n * host.m_minus) / (host.m_plus - host.m_minus)
        samples.append((lk, mk))
        transcript.append(TranscriptEntry(k, h.n, m, lk, mk))
    lams = [x for x, _ in samples]
    _assert_distinct(lams)
    _assert_monotone(lams)
    rep = interpolate(samples, n).normalize(0, a2**g.m)
    z = rep.denominator
    consistent = rep.numerator == z.lambda_derivative()
    verified = z == partition.twospin_poly(g, a1, a2) if verify else None
    return RecoveryReport("twospin", z, z(Fraction(1)), lams, transcript, rep, consistent, verified, {"doubled_paths": doubled})


# translations


def _sqrt_exact_or_mp(x: Fraction, precision: int = 256):
    try:
        return fraction_sqrt(x)
    except ValueError:
        with mpmath.workprec(precision):
            return mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)


def twospin_translate(alpha1, alpha2, lam, delta: int):
    """(beta, lambda') with Z_S = alpha2^|E| * Z_I(beta, lambda') on delta-regular graphs.

    Exact Fractions are returned whenever the square roots are rational,
    otherwise mpmath numbers.
    """
    a1, a2, lam = Fraction(alpha1), Fraction(alpha2), Fraction(lam)
    if a1 * a2 <= 1:
        raise PreconditionError("need alpha1*alpha2 > 1")
    prod = _sqrt_exact_or_mp(a1 * a2)
    beta = 1 / prod if isinstance(prod, Fraction) else 1 / prod
    ratio = a1 / a2
    if delta % 2 == 0:
        lam_prime = lam * ratio ** (delta // 2)
    else:
        root = _sqrt_exact_or_mp(ratio)
        lam_prime = lam * ratio ** (delta // 2) * root
    return beta, lam_prime


def unit_field_identity(g: MultiGraph, alpha) -> tuple[Fraction, Fraction]:
    """Both sides of Z_S(G; a, a, 2^d) = 2^|E| Z_S(G; 2a, a/2, 1) for d-regular G."""
    if not g.is_regular():
        raise PreconditionError("graph must be regular")
    d = g.degrees[0]
    a = Fraction(alpha)
    lhs = partition.twospin_poly(g, a, a)(Fraction(2) ** d)
    rhs = 2**g.m * partition.twospin_poly(g, 2 * a, a / 2)(Fraction(1))
    return lhs, rhs

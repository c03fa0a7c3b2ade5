"""Compile monotone 2-CNF formulas into weighted directed graphs.

The total cycle-cover weight (permanent) of the compiled graph determines
the number of satisfying assignments. Every formula is first viewed as the
3-CNF obtained by adding a fresh variable tau to each clause, which counts
s' = 2^nu + s assignments. Gadgets:

* variable gadget: a directed cycle u_0 -> ... -> u_m -> u_0 with a loop on
  every vertex; the m "dotted" arcs u_(i-1) -> u_i are either all used or
  none is used;
* clause gadget on {0, a, b, c}: dotted arcs b->c (the tau slot), c->a and
  a->b; every proper subset of dotted arcs extends to exactly one cover of
  weight 1 and the full set to none;
* XOR gadget on {a, b, c, d}: ties a dotted arc of a clause to a dotted arc
  of a variable so that exactly one of them is simulated, with factor 2.

Gadget weights are produced by :func:`derive_gadget_weights`, an exhaustive
search against these properties; the frozen templates below are its output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._frontier import permanent_sum
from .errors import CapExceededError, CertificateFailure, CompilerBugError, PreconditionError, TemplateFalsifiedError
from .graphs import DirectedWeightedGraph, MultiGraph, bipartite_double

RYSER_CAP = 28
"""Largest matrix handled by Ryser's formula."""


# formulas


@dataclass(frozen=True)
class MonotoneTwoCnf:
    nu: int
    clauses: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple((int(a), int(b)) for a, b in self.clauses))
        if self.nu < 0:
            raise PreconditionError("variable count must be nonnegative")
        for a, b in self.clauses:
            if not (1 <= a <= self.nu and 1 <= b <= self.nu):
                raise PreconditionError(f"literal out of range in clause ({a}, {b})")

    @property
    def mu(self) -> int:
        return len(self.clauses)

    @classmethod
    def parse(cls, text: str, nu: int | None = None) -> MonotoneTwoCnf:
        """One clause per line as two positive integers; blank lines and '#' comments ignored."""
        clauses = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() and int(p) > 0 for p in parts):
                raise PreconditionError(f"line {lineno}: expected two positive integers")
            clauses.append((int(parts[0]), int(parts[1])))
        top = max((max(c) for c in clauses), default=0)
        return cls(max(top, nu or 0), tuple(clauses))

    def count_satisfying(self) -> int:
        total = 0
        for bits in range(1 << self.nu):
            if all(bits >> (a - 1) & 1 or bits >> (b - 1) & 1 for a, b in self.clauses):
                total += 1
        return total


@dataclass(frozen=True)
class TauAugmented:
    """The 3-CNF with clauses (tau or a or b) and its count relation s' = 2^nu + s."""

    phi: MonotoneTwoCnf
    clauses: tuple[tuple[int, int, int], ...]

    def count_satisfying(self) -> int:
        return 2**self.phi.nu + self.phi.count_satisfying()

    def count_by_enumeration(self) -> int:
        nu = self.phi.nu
        total = 0
        for bits in range(1 << (nu + 1)):
            if all(any(bits >> x & 1 for x in cl) for cl in self.clauses):
                total += 1
        return total


def augment_with_tau(phi: MonotoneTwoCnf) -> TauAugmented:
    """Variable 0 plays tau."""
    return TauAugmented(phi, tuple((0, a, b) for a, b in phi.clauses))


def all_monotone_formulas(max_nu: int, max_mu: int):
    """Every monotone 2-CNF with nu <= max_nu and mu <= max_mu (clauses as multisets in order)."""
    for nu in range(0, max_nu + 1):
        lits = [(a, b) for a in range(1, nu + 1) for b in range(a, nu + 1)]
        for mu in range(0, max_mu + 1):
            for combo in itertools.combinations_with_replacement(lits, mu):
                yield MonotoneTwoCnf(nu, combo)


# templates


@dataclass(frozen=True)
class GadgetTemplate:
    name: str
    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, int], ...]
    dotted: tuple[tuple[str, str], ...] = ()
    ports: tuple[str, ...] = ()

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def matrix(self) -> list[list[int]]:
        idx = self.index()
        a = [[0] * len(self.vertices) for _ in self.vertices]
        for s, t, w in self.arcs:
            a[idx[s]][idx[t]] = w
        return a

    def weight(self, s: str, t: str) -> int:
        for x, y, w in self.arcs:
            if (x, y) == (s, t):
                return w
        raise KeyError((s, t))


def variable_template(m: int, weights=None) -> GadgetTemplate:
    """Cycle u_0 -> ... -> u_m -> u_0 with loops; arcs u_(i-1) -> u_i are dotted."""
    vs = tuple(f"u{i}" for i in range(m + 1))
    weights = weights or {}
    arcs = [(v, v, weights.get("loop", 1)) for v in vs]
    dotted = tuple((vs[i - 1], vs[i]) for i in range(1, m + 1))
    arcs += [(s, t, weights.get("dotted", 1)) for s, t in dotted]
    if m >= 1:
        arcs.append((vs[m], vs[0], weights.get("back", 1)))
    return GadgetTemplate(f"variable[{m}]", vs, tuple(arcs), dotted)


XOR_BASE_ARCS = (("a", "b"), ("b", "a"), ("b", "b"), ("a", "d"), ("d", "c"), ("c", "d"), ("c", "c"), ("c", "b"))
XOR_WIDENED_ARCS = XOR_BASE_ARCS + (("a", "c"), ("b", "c"), ("b", "d"), ("d", "b"))
XOR_NEGATIVE = (("b", "a"), ("c", "c"))

CLAUSE_VERTICES = ("0", "a", "b", "c")
CLAUSE_DOTTED = (("b", "c"), ("c", "a"), ("a", "b"))
CLAUSE_BASE_ARCS = (("0", "c"), ("0", "a"), ("c", "b"), ("a", "0"), ("b", "0"))

XOR_TEMPLATE = GadgetTemplate(
    "xor",
    ("a", "b", "c", "d"),
    (
        ("a", "b", 1),
        ("b", "a", -1),
        ("b", "b", 1),
        ("a", "d", 2),
        ("d", "c", 1),
        ("c", "d", 1),
        ("c", "c", -1),
        ("c", "b", 1),
        ("a", "c", 1),
        ("b", "c", 1),
        ("b", "d", 2),
        ("d", "b", 3),
    ),
    ports=("a", "d"),
)

CLAUSE_TEMPLATE = GadgetTemplate(
    "clause",
    CLAUSE_VERTICES,
    (
        ("0", "c", 1),
        ("0", "a", 1),
        ("c", "b", 1),
        ("a", "0", 1),
        ("b", "0", 1),
        ("0", "b", 1),
        ("a", "c", 1),
        ("c", "0", 1),
        ("c", "c", 1),
        ("b", "c", 1),
        ("c", "a", 1),
        ("a", "b", 1),
    ),
    dotted=CLAUSE_DOTTED,
)


# local cycle-cover analysis


def _covers(n: int, matrix, rows=None, cols=None):
    """Yield (weight, arcs) for every cycle cover of the rows/cols-restricted matrix.

    ``rows`` are vertices that still need an outgoing arc, ``cols`` those that
    still need an incoming arc; a cover is a bijection rows -> cols.
    """
    rows = list(range(n)) if rows is None else list(rows)
    cols = list(range(n)) if cols is None else list(cols)
    if len(rows) != len(cols):
        return
    for perm in itertools.permutations(cols):
        w = 1
        for i, j in zip(rows, perm):
            w *= matrix[i][j]
            if w == 0:
                break
        if w:
            yield w, tuple(zip(rows, perm))


def _closure_weight(matrix, ext_in, ext_out) -> int:
    n = len(matrix)
    rows = [i for i in range(n) if i not in ext_out]
    cols = [j for j in range(n) if j not in ext_in]
    return sum(w for w, _ in _covers(n, matrix, rows, cols))


def xor_closures(t: GadgetTemplate) -> dict[str, int]:
    """Cover weight of the gadget for every balanced external closure of its ports.

    A closure names the ports whose incoming arc (in) or outgoing arc (out) is
    supplied from outside the gadget.
    """
    idx = t.index()
    a, d = idx["a"], idx["d"]
    m = t.matrix()
    out = {}
    for ins in ((), (a,), (d,), (a, d)):
        for outs in ((), (a,), (d,), (a, d)):
            if len(ins) != len(outs):
                continue
            name = "in[" + ",".join(t.vertices[i] for i in ins) + "] out[" + ",".join(t.vertices[i] for i in outs) + "]"
            out[name] = _closure_weight(m, set(ins), set(outs))
    return out


XOR_EXPECTED = {
    "in[] out[]": 0,
    "in[a] out[a]": 0,
    "in[a] out[d]": 2,
    "in[d] out[a]": 2,
    "in[d] out[d]": 0,
    "in[a,d] out[a,d]": 0,
}


def _dotted_profile(t: GadgetTemplate) -> dict[frozenset, list[int]]:
    """Cover weights grouped by the set of dotted arcs each cover uses."""
    idx = t.index()
    m = t.matrix()
    dotted = {(idx[s], idx[u]) for s, u in t.dotted}
    prof: dict[frozenset, list[int]] = {}
    for w, arcs in _covers(len(m), m):
        used = frozenset(a for a in arcs if a in dotted)
        prof.setdefault(used, []).append(w)
    return prof


def check_variable(t: GadgetTemplate) -> list[str]:
    prof = _dotted_profile(t)
    idx = t.index()
    full = frozenset((idx[s], idx[u]) for s, u in t.dotted)
    problems = []
    for used, ws in prof.items():
        if used not in (frozenset(), full):
            problems.append(f"partial dotted usage {sorted(used)}")
    if prof.get(frozenset()) != [1] or prof.get(full) != [1]:
        problems.append(f"expected one weight-1 cover for none and all, got {prof.get(frozenset())} and {prof.get(full)}")
    return problems


def check_clause(t: GadgetTemplate) -> list[str]:
    prof = _dotted_profile(t)
    idx = t.index()
    dotted = [(idx[s], idx[u]) for s, u in t.dotted]
    problems = []
    for r in range(len(dotted) + 1):
        for sub in itertools.combinations(dotted, r):
            ws = prof.get(frozenset(sub), [])
            if r == len(dotted):
                if ws:
                    problems.append("covers use every dotted arc")
            elif ws != [1]:
                problems.append(f"dotted subset {sub}: covers {ws}")
    return problems


def check_xor(t: GadgetTemplate) -> list[str]:
    got = xor_closures(t)
    return [f"closure {k}: weight {got[k]}, expected {v}" for k, v in XOR_EXPECTED.items() if got[k] != v]


@dataclass
class GadgetReport:
    xor_closures: dict
    clause_profile: dict
    variable_cover_counts: dict
    passed: bool = True


def verify_gadget_properties(xor: GadgetTemplate = XOR_TEMPLATE, clause: GadgetTemplate = CLAUSE_TEMPLATE, max_occurrences: int = 4) -> GadgetReport:
    """Brute-force every local property; raises TemplateFalsifiedError on the first violation."""
    for problems, what in ((check_xor(xor), "xor"), (check_clause(clause), "clause")):
        if problems:
            raise TemplateFalsifiedError(f"{what} template: {problems[0]}", closure=problems[0])
    counts = {}
    for m in range(1, max_occurrences + 1):
        t = variable_template(m)
        problems = check_variable(t)
        if problems:
            raise TemplateFalsifiedError(f"variable template m={m}: {problems[0]}", closure=problems[0])
        counts[m] = sum(len(ws) for ws in _dotted_profile(t).values())
    prof = {tuple(sorted(k)): v for k, v in _dotted_profile(clause).items()}
    return GadgetReport(xor_closures(xor), prof, counts)


@dataclass
class DerivationResult:
    xor: GadgetTemplate
    clause: GadgetTemplate
    variable_weights: dict
    log: list[str] = field(default_factory=list)


def _search_xor(arc_list, log):
    free = [a for a in arc_list if a not in XOR_NEGATIVE]
    log.append(f"xor: searching {3 ** len(free)} weightings of {len(arc_list)} arcs")
    for ws in itertools.product((1, 2, 3), repeat=len(free)):
        arcs = [(s, t, -1) for s, t in XOR_NEGATIVE] + [(s, t, w) for (s, t), w in zip(free, ws)]
        t = GadgetTemplate("xor", ("a", "b", "c", "d"), tuple(sorted(arcs, key=lambda a: arc_list.index(a[:2]))), ports=("a", "d"))
        if not check_xor(t):
            return t
    return None


def _search_clause(log):
    pool = [(s, t) for s in CLAUSE_VERTICES for t in CLAUSE_VERTICES if (s, t) not in CLAUSE_BASE_ARCS and (s, t) not in CLAUSE_DOTTED]
    for size in range(0, len(pool) + 1):
        for extra in itertools.combinations(pool, size):
            for ws in itertools.product((1, 2, 3), repeat=len(CLAUSE_BASE_ARCS)):
                arcs = [(s, t, w) for (s, t), w in zip(CLAUSE_BASE_ARCS, ws)]
                arcs += [(s, t, 1) for s, t in extra]
                arcs += [(s, t, 1) for s, t in CLAUSE_DOTTED]
                t = GadgetTemplate("clause", CLAUSE_VERTICES, tuple(arcs), dotted=CLAUSE_DOTTED)
                if not check_clause(t):
                    log.append(f"clause: found with {size} extra arcs {list(extra)}")
                    return t
        log.append(f"clause: no template with {size} extra arcs")
    return None


def derive_gadget_weights() -> DerivationResult:
    """Exhaustive search for gadget weights satisfying the gadget properties.

    The XOR search first tries the eight-arc edge set; if it has no solution
    the set is widened by the four further arcs a->c, b->c, b->d, d->b. The
    clause search tries the five plain path arcs with weights in {1,2,3},
    then adds extra weight-1 arcs in increasing number.
    """
    log: list[str] = []
    xor = _search_xor(list(XOR_BASE_ARCS), log)
    if xor is None:
        log.append("xor: eight-arc edge set has no solution; widening")
        xor = _search_xor(list(XOR_WIDENED_ARCS), log)
    if xor is None:
        raise TemplateFalsifiedError("no XOR template in the widened edge set")
    clause = _search_clause(log)
    if clause is None:
        raise TemplateFalsifiedError("no clause template")
    var_weights = None
    for lw, dw, bw in itertools.product((1, 2, 3), repeat=3):
        w = {"loop": lw, "dotted": dw, "back": bw}
        if all(not check_variable(variable_template(m, w)) for m in range(1, 4)):
            var_weights = w
            break
    if var_weights is None:
        raise TemplateFalsifiedError("no variable template")
    return DerivationResult(xor, clause, var_weights, log)


# compilation


@dataclass(frozen=True)
class Pairing:
    """One XOR gadget tying a clause slot to a variable-gadget dotted arc."""

    xor: int
    clause: int
    slot: str  # "tau", "first" or "second"
    variable: int  # 0 is tau
    occurrence: int  # dotted arc u_(occurrence-1) -> u_occurrence


@dataclass
class ReductionOutput:
    graph: DirectedWeightedGraph
    mode: str
    kappa: int | None
    formula: MonotoneTwoCnf
    nu_used: int
    stripped: int
    pairings: list[Pairing]
    variables: dict[int, list[int]]
    clauses: list[dict[str, int]]
    xors: list[dict[str, int]]
    chains: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def mu(self) -> int:
        return self.formula.mu

    def weights(self) -> set[int]:
        return {w for _, _, w in self.graph.arcs}

    def registry_json(self) -> dict:
        return {
            "mode": self.mode,
            "kappa": self.kappa,
            "nu": self.formula.nu,
            "nu_used": self.nu_used,
            "mu": self.mu,
            "stripped": self.stripped,
            "variables": {str(k): v for k, v in self.variables.items()},
            "clauses": self.clauses,
            "xors": self.xors,
            "pairings": [p.__dict__ for p in self.pairings],
            "chains": [{"arc": list(k), "vertices": v} for k, v in self.chains.items()],
        }


def compile_formula(phi: MonotoneTwoCnf, mode: str = "keep", kappa: int | None = None) -> ReductionOutput:
    """Build the gadget graph; ``mode`` is "keep" (weights -1..3) or "chain" (weights 1..3)."""
    if mode not in ("keep", "chain"):
        raise PreconditionError("mode must be 'keep' or 'chain'")
    used = sorted({x for cl in phi.clauses for x in cl})
    rename = {x: i + 1 for i, x in enumerate(used)}
    clauses = [(rename[a], rename[b]) for a, b in phi.clauses]
    nu_used = len(used)
    mu = len(clauses)
    arcs: dict[tuple[int, int], int] = {}
    counter = itertools.count()

    def new_vertex():
        return next(counter)

    # occurrence lists: tau gets one per clause; literals in clause order
    occ: dict[int, list[tuple[int, str]]] = {0: [(i, "tau") for i in range(mu)]}
    for i, (a, b) in enumerate(clauses):
        occ.setdefault(a, []).append((i, "first"))
        occ.setdefault(b, []).append((i, "second"))
    variables: dict[int, list[int]] = {}
    for x in range(nu_used + 1):
        m = len(occ.get(x, []))
        size = max(m, 1) + 1
        variables[x] = [new_vertex() for _ in range(size)]
        us = variables[x]
        for u in us:
            arcs[(u, u)] = 1
        if m == 0:
            # tau with no clauses: a bare two-cycle
            arcs[(us[0], us[1])] = 1
            arcs[(us[1], us[0])] = 1
        else:
            arcs[(us[-1], us[0])] = 1
    clause_ids = []
    for _ in range(mu):
        ids = {name: new_vertex() for name in CLAUSE_VERTICES}
        clause_ids.append(ids)
        for s, t, w in CLAUSE_TEMPLATE.arcs:
            if (s, t) not in CLAUSE_DOTTED:
                arcs[(ids[s], ids[t])] = w
    slot_arc = {"tau": ("b", "c"), "first": ("c", "a"), "second": ("a", "b")}
    pairings = []
    xors = []
    for x in range(nu_used + 1):
        for j, (ci, slot) in enumerate(occ.get(x, []), start=1):
            pairings.append(Pairing(len(pairings), ci, slot, x, j))
    pairings.sort(key=lambda p: (p.clause, ("tau", "first", "second").index(p.slot)))
    pairings = [Pairing(i, p.clause, p.slot, p.variable, p.occurrence) for i, p in enumerate(pairings)]
    for p in pairings:
        ids = {name: new_vertex() for name in ("a", "b", "c", "d")}
        xors.append(ids)
        for s, t, w in XOR_TEMPLATE.arcs:
            arcs[(ids[s], ids[t])] = w
        us = variables[p.variable]
        vsrc, vdst = us[p.occurrence - 1], us[p.occurrence]
        cs, ct = slot_arc[p.slot]
        csrc, cdst = clause_ids[p.clause][cs], clause_ids[p.clause][ct]
        if p.slot == "tau":
            # variable arc enters at a and leaves at d; clause arc enters at d and leaves at a
            arcs[(vsrc, ids["a"])] = 1
            arcs[(ids["d"], vdst)] = 1
            arcs[(csrc, ids["d"])] = 1
            arcs[(ids["a"], cdst)] = 1
        else:
            arcs[(csrc, ids["a"])] = 1
            arcs[(ids["d"], cdst)] = 1
            arcs[(vsrc, ids["d"])] = 1
            arcs[(ids["a"], vdst)] = 1
    n = next(counter)
    chains: dict[tuple[int, int], list[int]] = {}
    if mode == "chain":
        kappa = max(6 * mu - 1 if kappa is None else kappa, 1)
        n, chains = _chain_arcs(n, arcs, kappa)
    else:
        kappa = None
    graph = DirectedWeightedGraph(n, tuple((s, t, w) for (s, t), w in sorted(arcs.items())))
    formula = MonotoneTwoCnf(phi.nu, phi.clauses)
    return ReductionOutput(graph, mode, kappa, formula, nu_used, phi.nu - nu_used, pairings, variables, clause_ids, xors, chains)


def _chain_arcs(n: int, arcs: dict, kappa: int, targets=None):
    """Replace each -1 arc (or each arc in ``targets``) in place by a weight-2 chain.

    The chain has kappa fresh vertices with weight-1 loops; returns the new
    vertex count and the chain vertex lists keyed by the replaced arc.
    """
    chains = {}
    for arc in sorted(arcs) if targets is None else targets:
        if targets is None and arcs[arc] != -1:
            continue
        chains[arc] = list(range(n, n + kappa))
        n += kappa
    for (s, t), hs in chains.items():
        del arcs[(s, t)]
        seq = [s] + hs + [t]
        for x, y in zip(seq, seq[1:]):
            arcs[(x, y)] = 2
        for h in hs:
            arcs[(h, h)] = 1
    return n, chains


def chain_replace(d: DirectedWeightedGraph, kappa: int, targets=None) -> DirectedWeightedGraph:
    """Graph with the -1 arcs (or the given arcs) replaced by kappa-chains.

    A cover through the chain picks up 2^(kappa+1), which is -1 modulo
    2^(kappa+1) + 1; covers avoiding it take every chain loop, weight 1.
    """
    arcs = dict(d.arc_map)
    n, _ = _chain_arcs(d.n, arcs, kappa, targets)
    return DirectedWeightedGraph(n, tuple((s, t, w) for (s, t), w in sorted(arcs.items())))


def degree_audit(out: ReductionOutput) -> dict[str, int]:
    mi, mo = out.graph.max_in_out_degree()
    bip = bipartite_double(out.graph)
    return {"max_in_degree": mi, "max_out_degree": mo, "bipartite_max_degree": bip.max_degree()}


# permanents


def ryser_permanent(matrix, cap: int = RYSER_CAP) -> int:
    """Ryser's inclusion-exclusion formula, walking column subsets in Gray-code order."""
    n = len(matrix)
    if n > cap:
        raise CapExceededError(f"matrix of size {n} exceeds the Ryser cap {cap}")
    if n == 0:
        return 1
    sums = [0] * n
    total = 0
    in_set = [False] * n
    size = 0
    for i in range(1, 1 << n):
        j = (i & -i).bit_length() - 1
        sign = -1 if in_set[j] else 1
        in_set[j] = not in_set[j]
        size += sign
        for r in range(n):
            sums[r] += sign * matrix[r][j]
        prod = 1
        for s in sums:
            prod *= s
            if prod == 0:
                break
        total += -prod if size % 2 else prod
    return total if n % 2 == 0 else -total


def cycle_cover_weight(d: DirectedWeightedGraph, method: str = "auto", cap: int = RYSER_CAP) -> int:
    """Total weight of all cycle covers, i.e. the permanent of the adjacency matrix."""
    m = d.matrix()
    if method == "auto":
        method = "ryser" if d.n <= 12 else "sparse"
    if method == "ryser":
        return ryser_permanent(m, cap)
    if method == "sparse":
        return permanent_sum(m)
    raise PreconditionError(f"unknown method {method!r}")


def extract_sat_count(w: int, mu: int, nu: int, kappa: int | None = None, stripped: int = 0) -> int:
    """Satisfying-assignment count from the cycle-cover weight.

    ``nu`` is the number of variables that occur in the compiled formula; the
    ``stripped`` unused ones contribute a factor 2 each. In chain mode W is
    reduced modulo 2^(kappa+1) + 1 first.
    """
    if kappa is not None:
        w %= 2 ** (kappa + 1) + 1
    scale = 2 ** (3 * mu)
    if w % scale:
        raise CompilerBugError(f"weight {w} is not divisible by 2^(3*{mu})")
    s = w // scale - 2**nu
    if s < 0:
        raise CompilerBugError(f"weight {w} implies a negative count")
    return s * 2**stripped


def count_via_compile(phi: MonotoneTwoCnf, mode: str = "keep", kappa: int | None = None) -> int:
    out = compile_formula(phi, mode, kappa)
    w = cycle_cover_weight(out.graph)
    return extract_sat_count(w, out.mu, out.nu_used, out.kappa, out.stripped)


# Hamiltonian certificates


@dataclass(frozen=True)
class AlternatingPath:
    """A path in the bipartite double, as (vertex, side) nodes.

    Side 0 is the out-copy and side 1 the in-copy; consecutive nodes (x, 0),
    (y, 1) use arc x -> y forward, and (x, 1), (y, 0) use arc y -> x backward.
    """

    nodes: tuple[tuple[int, int], ...]

    def steps(self) -> list[tuple[tuple[int, int], str]]:
        out = []
        for (x, s), (y, _) in zip(self.nodes, self.nodes[1:]):
            out.append(((x, y), "forward") if s == 0 else ((y, x), "backward"))
        return out

    def to_json(self) -> dict:
        return {"nodes": [list(n) for n in self.nodes], "steps": [{"arc": list(a), "direction": d} for a, d in self.steps()]}


def validate_certificate(out_or_graph, path: AlternatingPath) -> bool:
    """True iff the nodes form a Hamiltonian path of the bipartite double."""
    d = out_or_graph.graph if isinstance(out_or_graph, ReductionOutput) else out_or_graph
    nodes = path.nodes
    if len(nodes) != 2 * d.n or len(set(nodes)) != len(nodes):
        return False
    if any(not (0 <= v < d.n and s in (0, 1)) for v, s in nodes):
        return False
    arcs = d.arc_map
    for (x, s), (y, t) in zip(nodes, nodes[1:]):
        if s == t:
            return False
        arc = (x, y) if s == 0 else (y, x)
        if arc not in arcs:
            return False
    return True


def build_hamiltonian_certificate(out: ReductionOutput) -> AlternatingPath:
    """Thread one alternating Hamiltonian path through all gadgets.

    The path starts at the first vertex of tau's gadget and walks it; each
    dotted tau arc detours through its XOR gadget into a clause gadget. Inside
    a clause, the backward steps over the two literal arcs are replaced by the
    XOR path of that literal; the first time a variable is met, the XOR path
    itself detours around the whole variable gadget (passing each of its other
    XOR gadgets by the d -> a shortcut), later visits use the partial path.
    """
    var_pairs: dict[int, dict[int, Pairing]] = {}
    by_slot: dict[tuple[int, str], Pairing] = {}
    for p in out.pairings:
        var_pairs.setdefault(p.variable, {})[p.occurrence] = p
        by_slot[(p.clause, p.slot)] = p
    covered: set[int] = set()
    path: list[tuple[int, int]] = []

    def xor_ids(p):
        return out.xors[p.xor]

    def var_walk(x: int, entry: int) -> list:
        us = out.variables[x]
        m = len(us) - 1
        seq = [(us[entry], 1), (us[entry], 0)]
        order = list(range(entry + 1, m + 1)) + ["back"] + list(range(1, entry))
        for j in order:
            if j == "back":
                seq += [(us[0], 1), (us[0], 0)]
                continue
            z = xor_ids(var_pairs[x][j])
            seq += [(z["d"], 1), (z["a"], 0), (us[j], 1), (us[j], 0)]
        return seq

    def literal_xor_path(p: Pairing) -> list:
        """Path from (a, in) to (d, out) of the literal's XOR gadget."""
        y = xor_ids(p)
        if p.variable not in covered:
            covered.add(p.variable)
            return [(y["a"], 1), (y["b"], 0), (y["b"], 1), (y["a"], 0)] + var_walk(p.variable, p.occurrence) + [
                (y["d"], 1),
                (y["c"], 0),
                (y["c"], 1),
                (y["d"], 0),
            ]
        return [(y["a"], 1), (y["b"], 0), (y["b"], 1), (y["c"], 0), (y["c"], 1), (y["d"], 0)]

    def clause_walk(ci: int) -> list:
        c = out.clauses[ci]
        first = list(reversed(literal_xor_path(by_slot[(ci, "first")])))
        second = list(reversed(literal_xor_path(by_slot[(ci, "second")])))
        return [(c["c"], 1), (c["0"], 0), (c["a"], 1)] + first + [(c["c"], 0), (c["b"], 1)] + second + [
            (c["a"], 0),
            (c["0"], 1),
            (c["b"], 0),
        ]

    tau = out.variables[0]
    if out.mu == 0:
        path = [(tau[0], 1), (tau[0], 0), (tau[1], 1), (tau[1], 0)]
    else:
        covered.add(0)
        path = [(tau[0], 1), (tau[0], 0)]
        for j in range(1, len(tau)):
            p = var_pairs[0][j]
            x = xor_ids(p)
            path += [(x["a"], 1), (x["b"], 0), (x["b"], 1), (x["a"], 0)]
            path += clause_walk(p.clause)
            path += [(x["d"], 1), (x["c"], 0), (x["c"], 1), (x["d"], 0)]
            path += [(tau[j], 1), (tau[j], 0)]
    if out.chains:
        path = _expand_chains(path, out.chains)
    result = AlternatingPath(tuple(path))
    if not validate_certificate(out, result):
        raise CertificateFailure("constructed path is not Hamiltonian in the bipartite double")
    return result


def _expand_chains(path, chains):
    out = [path[0]]
    for (x, s), (y, t) in zip(path, path[1:]):
        arc = (x, y) if s == 0 else (y, x)
        if arc in chains:
            inner = []
            for h in chains[arc]:
                inner += [(h, 1), (h, 0)]
            out += inner if s == 0 else inner[::-1]
        out.append((y, t))
    return out


def bipartite_hamiltonian_path_exists(d: DirectedWeightedGraph) -> bool:
    """Exhaustive check on the bipartite double (small graphs only)."""
    from .graphs import has_hamiltonian_path

    if 2 * d.n > 24:
        raise CapExceededError("exhaustive Hamiltonian path search is capped at 24 vertices")
    return has_hamiltonian_path(bipartite_double(d))


def bip_matching_graph(out: ReductionOutput) -> MultiGraph:
    return bipartite_double(out.graph)


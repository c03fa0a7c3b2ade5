"""Undirected multigraphs, directed weighted graphs, surgeries and corpora."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Iterator

import networkx as nx

from .errors import PreconditionError
from .polynomial import format_rational, parse_rational

Edge = tuple[int, int, Fraction]


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph on vertices ``0..n-1``.

    Parallel edges and self-loops are allowed. A self-loop adds 2 to the degree.
    Edge weights are nonzero rationals; the matching polynomial additionally
    requires them to be positive unless told otherwise.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("a graph needs at least one vertex")
        norm = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            w = Fraction(e[2]) if len(e) > 2 else Fraction(1)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={self.n}")
            if w == 0:
                raise PreconditionError("edge weights must be nonzero")
            norm.append((min(u, v), max(u, v), w))
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n: int, pairs) -> MultiGraph:
        return cls(n, tuple((e[0], e[1], e[2] if len(e) > 2 else 1) for e in pairs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> list[list[tuple[int, Fraction]]]:
        """Per-vertex list of (other endpoint, weight); loops appear once."""
        inc = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            inc[u].append((v, w))
            if u != v:
                inc[v].append((u, w))
        return inc

    @cached_property
    def neighbours(self) -> list[frozenset[int]]:
        return [frozenset(x for x, _ in self.incidence[v] if x != v) for v in range(self.n)]

    def degree(self, v: int) -> int:
        return sum(2 if x == v else 1 for x, _ in self.incidence[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(v) for v in range(self.n))

    def max_degree(self, simple: bool = False) -> int:
        """Maximum degree; ``simple=True`` counts distinct neighbours instead."""
        if simple:
            return max(len(nb) for nb in self.neighbours)
        return max(self.degrees)

    @cached_property
    def loops(self) -> tuple[int, ...]:
        out = [0] * self.n
        for u, v, _ in self.edges:
            if u == v:
                out[u] += 1
        return tuple(out)

    def is_simple(self) -> bool:
        pairs = [(u, v) for u, v, _ in self.edges]
        return all(u != v for u, v in pairs) and len(set(pairs)) == len(pairs)

    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1

    def unit_weights(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def to_json(self) -> dict:
        edges = []
        for u, v, w in self.edges:
            edges.append([u, v] if w == 1 else [u, v, format_rational(w)])
        return {"n": self.n, "edges": edges}

    @classmethod
    def from_json(cls, obj) -> MultiGraph:
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("directed"):
            raise PreconditionError("expected an undirected graph")
        try:
            n = int(obj["n"])
            edges = [(int(e[0]), int(e[1]), parse_rational(e[2]) if len(e) > 2 else Fraction(1)) for e in obj["edges"]]
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise PreconditionError(f"malformed graph JSON: {exc}") from exc
        return cls(n, tuple(edges))

    def to_networkx(self) -> nx.MultiGraph:
        h = nx.MultiGraph()
        h.add_nodes_from(range(self.n))
        for u, v, w in self.edges:
            h.add_edge(u, v, weight=w)
        return h

    @classmethod
    def from_networkx(cls, h) -> MultiGraph:
        index = {x: i for i, x in enumerate(sorted(h.nodes()))}
        edges = [(index[u], index[v], Fraction(d.get("weight", 1))) for u, v, d in h.edges(data=True)]
        return cls(len(index), tuple(edges))


@dataclass(frozen=True)
class DirectedWeightedGraph:
    """Directed graph with integer arc weights; loops allowed, no parallel arcs."""

    n: int
    arcs: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for s, t, w in self.arcs:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise PreconditionError(f"arc ({s}, {t}) out of range")
            if (s, t) in seen:
                raise PreconditionError(f"parallel arc ({s}, {t})")
            if w == 0:
                raise PreconditionError("arc weights must be nonzero")
            seen.add((s, t))
        object.__setattr__(self, "arcs", tuple((int(s), int(t), int(w)) for s, t, w in self.arcs))

    @cached_property
    def arc_map(self) -> dict[tuple[int, int], int]:
        return {(s, t): w for s, t, w in self.arcs}

    def out_degree(self, v: int) -> int:
        return sum(1 for s, _, _ in self.arcs if s == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, t, _ in self.arcs if t == v)

    @cached_property
    def out_arcs(self) -> list[list[tuple[int, int]]]:
        out = [[] for _ in range(self.n)]
        for s, t, w in self.arcs:
            out[s].append((t, w))
        return out

    def max_in_out_degree(self) -> tuple[int, int]:
        ins = [0] * self.n
        outs = [0] * self.n
        for s, t, _ in self.arcs:
            outs[s] += 1
            ins[t] += 1
        return max(ins), max(outs)

    def matrix(self) -> list[list[int]]:
        a = [[0] * self.n for _ in range(self.n)]
        for s, t, w in self.arcs:
            a[s][t] = w
        return a

    def to_json(self) -> dict:
        return {"n": self.n, "directed": True, "edges": [[s, t, str(w)] for s, t, w in self.arcs]}

    @classmethod
    def from_json(cls, obj) -> DirectedWeightedGraph:
        if isinstance(obj, str):
            obj = json.loads(obj)
        arcs = []
        for e in obj["edges"]:
            w = parse_rational(e[2]) if len(e) > 2 else Fraction(1)
            if w.denominator != 1:
                raise PreconditionError("arc weights must be integers")
            arcs.append((int(e[0]), int(e[1]), int(w)))
        return cls(int(obj["n"]), tuple(arcs))


def connected(g: MultiGraph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for x in g.neighbours[v]:
            if x not in seen:
                seen.add(x)
                queue.append(x)
    return len(seen) == g.n


def has_hamiltonian_path(g: MultiGraph) -> bool:
    """Bitmask dynamic programme over (visited set, endpoint)."""
    n = g.n
    if n == 1:
        return True
    if not connected(g):
        return False
    nbr = [sum(1 << x for x in g.neighbours[v]) for v in range(n)]
    full = (1 << n) - 1
    # reach[mask] = bitmask of endpoints of paths covering exactly mask
    reach = [0] * (1 << n)
    for v in range(n):
        reach[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = reach[mask]
        if not ends:
            continue
        e = ends
        while e:
            low = e & -e
            v = low.bit_length() - 1
            e ^= low
            nxt = nbr[v] & ~mask
            while nxt:
                lw = nxt & -nxt
                nxt ^= lw
                reach[mask | lw] |= lw
    return reach[full] != 0


# surgeries


def star_augment(g: MultiGraph, k: int) -> MultiGraph:
    """Attach k fresh pendant vertices to every vertex.

    Pendants of vertex v get ids ``n + v*k .. n + v*k + k - 1``.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    n = g.n
    extra = [(v, n + v * k + i, Fraction(1)) for v in range(n) for i in range(k)]
    return MultiGraph(n + n * k, g.edges + tuple(extra))


def path_augment(g: MultiGraph, k: int, doubled: bool = False, double_connector: bool = True) -> MultiGraph:
    """Attach a fresh k-vertex path to every vertex through one of its ends.

    Path vertices of host v get ids ``n + v*k + i`` with i = 0 the end joined
    to v. With ``doubled`` every path edge becomes a parallel pair; the edge
    joining the path to its host is doubled only if ``double_connector``.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if k == 0:
        return g
    n = g.n
    extra = []
    for v in range(n):
        base = n + v * k
        reps = 2 if doubled and double_connector else 1
        extra.extend([(v, base, Fraction(1))] * reps)
        for i in range(k - 1):
            extra.extend([(base + i, base + i + 1, Fraction(1))] * (2 if doubled else 1))
    return MultiGraph(n + n * k, g.edges + tuple(extra))


def add_pendant_vertex(g: MultiGraph, v: int, weight=1) -> MultiGraph:
    if not 0 <= v < g.n:
        raise PreconditionError("vertex out of range")
    return MultiGraph(g.n + 1, g.edges + ((v, g.n, Fraction(weight)),))


def merge_vertices(g: MultiGraph, u: int, v: int) -> MultiGraph:
    """Identify two non-adjacent vertices; the merged vertex keeps id min(u, v)."""
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise PreconditionError("need two distinct vertices")
    if v in g.neighbours[u]:
        raise PreconditionError("merged vertices must be non-adjacent")
    keep, drop = min(u, v), max(u, v)

    def relabel(x):
        if x == drop:
            return keep
        return x - 1 if x > drop else x

    return MultiGraph(g.n - 1, tuple((relabel(a), relabel(b), w) for a, b, w in g.edges))


def bipartite_double(d: DirectedWeightedGraph) -> MultiGraph:
    """Out-copy x is vertex x, in-copy y is vertex n + y; arc x->y gives edge {x, n+y}."""
    return MultiGraph(2 * d.n, tuple((s, d.n + t, Fraction(w)) for s, t, w in d.arcs))


def disjoint_union(g: MultiGraph, h: MultiGraph) -> MultiGraph:
    return MultiGraph(g.n + h.n, g.edges + tuple((u + g.n, v + g.n, w) for u, v, w in h.edges))


def path_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> MultiGraph:
    return MultiGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# corpora


@dataclass
class GraphCorpus:
    """Connected simple graphs on n vertices, up to isomorphism."""

    n: int
    graphs: list[MultiGraph] = field(default_factory=list)
    exhaustive: bool = True

    def __iter__(self) -> Iterator[MultiGraph]:
        return iter(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)


def _from_nx_simple(h) -> MultiGraph:
    index = {x: i for i, x in enumerate(sorted(h.nodes()))}
    return MultiGraph.from_edges(len(index), [(index[u], index[v]) for u, v in h.edges()])


def connected_graphs(n: int) -> GraphCorpus:
    """Every connected simple graph on n <= 8 vertices up to isomorphism.

    n <= 7 comes from the networkx graph atlas; n = 8 from a packaged graph6
    file produced by :func:`generate_connected_graphs`.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if n <= 7:
        from networkx.generators.atlas import graph_atlas_g

        gs = [_from_nx_simple(h) for h in graph_atlas_g() if h.number_of_nodes() == n and (n == 1 or nx.is_connected(h))]
        return GraphCorpus(n, gs)
    if n == 8:
        data = resources.files("leeyang").joinpath("data/connected8.g6").read_bytes()
        gs = [_from_nx_simple(nx.from_graph6_bytes(line)) for line in data.split() if line]
        return GraphCorpus(n, gs)
    raise PreconditionError("exhaustive corpus is available only for n <= 8")


def generate_connected_graphs(n: int, smaller: GraphCorpus | None = None) -> list[nx.Graph]:
    """Extend connected (n-1)-vertex graphs by one vertex and remove isomorphs.

    Every connected graph has a vertex whose removal keeps it connected, so
    this reaches all isomorphism classes.
    """
    smaller = smaller or connected_graphs(n - 1)
    buckets: dict[str, list[nx.Graph]] = {}
    out = []
    for g in smaller:
        base = nx.Graph()
        base.add_nodes_from(range(n))
        base.add_edges_from((u, v) for u, v, _ in g.edges)
        for mask in range(1, 1 << (n - 1)):
            h = base.copy()
            h.add_edges_from((n - 1, x) for x in range(n - 1) if mask >> x & 1)
            key = nx.weisfeiler_lehman_graph_hash(h, iterations=3) + f"|{h.number_of_edges()}"
            bucket = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(h, other) for other in bucket):
                continue
            bucket.append(h)
            out.append(h)
    return out


def random_connected_graph(n: int, rng: random.Random, p: float | None = None) -> MultiGraph:
    """Uniform spanning-tree skeleton plus independent extra edges."""
    p = 0.4 if p is None else p
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < p:
                edges.add((u, v))
    return MultiGraph.from_edges(n, sorted(edges))


def random_multigraph(n: int, rng: random.Random, m: int, loops: bool = True) -> MultiGraph:
    """Connected multigraph with a spanning tree plus m random extra edges."""
    base = random_connected_graph(n, rng, p=0.0)
    extra = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n) if loops else rng.choice([x for x in range(n) if x != u] or [u])
        extra.append((u, v, Fraction(1)))
    return MultiGraph(n, base.edges + tuple(extra))

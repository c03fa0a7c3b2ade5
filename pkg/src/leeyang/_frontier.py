"""Exact frontier dynamic programmes over a vertex elimination order.

States are keyed by Python int bitmasks over global vertex ids, so nothing has
to be relabelled when vertices enter or leave the frontier. All weights are
kept integral by homogenizing rational parameters; callers divide out the
common factor at the end.
"""

from __future__ import annotations

import math
from fractions import Fraction


def elimination_order(n: int, neighbours) -> list[int]:
    """Greedy order keeping the set of open vertices small.

    A vertex is open once processed while it still has unprocessed neighbours.
    Each step picks the candidate minimizing the resulting open-set size.
    """
    nbrs = [set(neighbours[v]) - {v} for v in range(n)]
    rem = [len(nb) for nb in nbrs]
    processed = [False] * n
    frontier: set[int] = set()
    order = []
    for _ in range(n):
        cands = {u for f in frontier for u in nbrs[f] if not processed[u]}
        if not cands:
            v = min((u for u in range(n) if not processed[u]), key=lambda u: (len(nbrs[u]), u))
        else:

            def cost(u):
                closing = sum(1 for f in nbrs[u] if f in frontier and rem[f] == 1)
                stays = 1 if rem[u] > 0 else 0
                return (stays - closing, rem[u], u)

            v = min(cands, key=cost)
        processed[v] = True
        order.append(v)
        for u in nbrs[v]:
            rem[u] -= 1
        frontier.add(v)
        frontier = {f for f in frontier if rem[f] > 0}
    return order


def _homogenize(values) -> tuple[list[int], int]:
    fr = [Fraction(v) for v in values]
    den = 1
    for f in fr:
        den = math.lcm(den, f.denominator)
    return [int(f * den) for f in fr], den


class PolyAlgebra:
    """Integer coefficient lists indexed by the number of marked items."""

    @staticmethod
    def one():
        return [1]

    @staticmethod
    def add(a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return out

    @staticmethod
    def step(val, factor, marked, ticks=0):
        out = [c * factor for c in val]
        return [0] + out if marked else out


class MomentAlgebra:
    """Tuples (S0, S1, S2, T) of sums of w, p*w, p*p*w and d*w.

    p counts marked items (plus spins or monomers), d counts ticked items
    (disagreeing edges).
    """

    @staticmethod
    def one():
        return (1, 0, 0, 0)

    @staticmethod
    def add(a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])

    @staticmethod
    def step(val, factor, marked, ticks=0):
        s0, s1, s2, t = val
        if marked:
            s2 = s2 + 2 * s1 + s0
            s1 = s1 + s0
        if ticks:
            t = t + ticks * s0
        return (s0 * factor, s1 * factor, s2 * factor, t * factor)


def two_state_sum(g, pp, pm, mm, plus, minus, algebra, order=None):
    """Sum over +/- assignments of prod(vertex factor) * prod(edge factor).

    Edge factors are pp, pm, mm for ++, +-, -- endpoints; a loop at v counts as
    ++ or -- according to v. Returns ``(value, scale)`` where ``value`` is the
    algebra element of the integer-homogenized sum and the true sum equals
    ``value / scale``.
    """
    (ipp, ipm, imm), eden = _homogenize([pp, pm, mm])
    (iplus, iminus), vden = _homogenize([plus, minus])
    n = g.n
    order = order if order is not None else elimination_order(n, g.neighbours)
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[] for _ in range(n)]
    for u, v, _ in g.edges:
        if u != v:
            a, b = (u, v) if pos[u] < pos[v] else (v, u)
            earlier[b].append(a)
    rem = [len(g.neighbours[v]) for v in range(n)]
    loops = g.loops
    states = {0: algebra.one()}
    open_set: set[int] = set()
    step, add = algebra.step, algebra.add
    for v in order:
        prev = earlier[v]
        new: dict[int, object] = {}
        bit = 1 << v
        for key, val in states.items():
            for s in (1, 0):
                f = (ipp if s else imm) ** loops[v]
                dis = 0
                for u in prev:
                    su = key >> u & 1
                    if su != s:
                        f *= ipm
                        dis += 1
                    else:
                        f *= ipp if s else imm
                nv = step(val, f * (iplus if s else iminus), s == 1, dis)
                nk = key | bit if s else key
                old = new.get(nk)
                new[nk] = nv if old is None else add(old, nv)
        states = new
        for u in g.neighbours[v]:
            rem[u] -= 1
        open_set.add(v)
        closing = [u for u in open_set if rem[u] == 0]
        if closing:
            mask = 0
            for u in closing:
                open_set.discard(u)
                mask |= 1 << u
            merged: dict[int, object] = {}
            for key, val in states.items():
                nk = key & ~mask
                old = merged.get(nk)
                merged[nk] = val if old is None else add(old, val)
            states = merged
    (value,) = states.values()
    return value, eden ** g.m * vden ** n


def matching_sum(g, monomer, algebra, order=None):
    """Sum over matchings of monomer**(unmatched) * prod(edge weights).

    Parallel edges are distinct matching edges; loops are ignored. Returns
    ``(value, scale)`` with the true sum equal to ``value / scale``.
    """
    (ia, ib), _ = _homogenize([monomer, 1])
    wints, wden = _homogenize([w for _, _, w in g.edges] or [1])
    n = g.n
    order = order if order is not None else _leaves_before_centres(n, g.neighbours)
    pos = {v: i for i, v in enumerate(order)}
    later = [[] for _ in range(n)]
    for idx, (u, v, _) in enumerate(g.edges):
        if u == v:
            continue
        a, b = (u, v) if pos[u] < pos[v] else (v, u)
        later[a].append((b, wints[idx] * ib * ib * wden))
    # a monomer contributes ia*wden, a dimer w*ib*ib*wden, so every matching
    # carries the common factor (ib*wden)**n
    mono = ia * wden
    states = {0: algebra.one()}
    step, add = algebra.step, algebra.add
    for v in order:
        bit = 1 << v
        new: dict[int, object] = {}
        for key, val in states.items():
            if key & bit:
                nk = key ^ bit
                old = new.get(nk)
                new[nk] = val if old is None else add(old, val)
                continue
            nv = step(val, mono, True)
            old = new.get(key)
            new[key] = nv if old is None else add(old, nv)
            for u, f in later[v]:
                ub = 1 << u
                if key & ub:
                    continue
                nk = key | ub
                nv = step(val, f, False)
                old = new.get(nk)
                new[nk] = nv if old is None else add(old, nv)
        states = new
    return states[0], (ib * wden) ** n


def _leaves_before_centres(n: int, neighbours) -> list[int]:
    """Elimination order with each pendant vertex moved just before its neighbour.

    In the matching programme a leaf processed first can only mark its centre,
    so any number of leaves collapses onto one state bit.
    """
    nbrs = [set(neighbours[v]) - {v} for v in range(n)]
    leaf_of = {}
    for v in range(n):
        if len(nbrs[v]) == 1:
            (c,) = nbrs[v]
            if len(nbrs[c]) > 1:
                leaf_of.setdefault(c, []).append(v)
    leaves = {v for vs in leaf_of.values() for v in vs}
    core = [v for v in range(n) if v not in leaves]
    idx = {v: i for i, v in enumerate(core)}
    sub = [[idx[u] for u in nbrs[v] if u in idx] for v in core]
    order = []
    for i in elimination_order(len(core), sub):
        v = core[i]
        order.extend(leaf_of.get(v, ()))
        order.append(v)
    return order


def permanent_sum(matrix, order=None) -> int:
    """Permanent of a sparse integer matrix by a row DP over used columns.

    A column is retired after the last row that can use it; states in which a
    retired column is still unused are dropped.
    """
    n = len(matrix)
    if n == 0:
        return 1
    rows = [[(j, a) for j, a in enumerate(r) if a] for r in matrix]
    if order is None:
        nb = [set() for _ in range(n)]
        for i, r in enumerate(rows):
            for j, _ in r:
                if i != j:
                    nb[i].add(j)
                    nb[j].add(i)
        order = elimination_order(n, nb)
    last = [-1] * n
    for t, i in enumerate(order):
        for j, _ in rows[i]:
            last[j] = t
    if min(last) < 0:
        return 0
    retire = [0] * n
    for j, t in enumerate(last):
        retire[t] |= 1 << j
    states = {0: 1}
    for t, i in enumerate(order):
        new: dict[int, int] = {}
        for key, val in states.items():
            for j, a in rows[i]:
                b = 1 << j
                if key & b:
                    continue
                nk = key | b
                new[nk] = new.get(nk, 0) + val * a
        r = retire[t]
        if r:
            states = {}
            for key, val in new.items():
                if key & r == r and val:
                    nk = key ^ r
                    states[nk] = states.get(nk, 0) + val
        else:
            states = {k: v for k, v in new.items() if v}
        if not states:
            return 0
    return states.get(0, 0)

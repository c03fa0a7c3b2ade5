"""Both sides of the augmentation identities, each side computed by brute force."""

from __future__ import annotations

from fractions import Fraction

from leeyang import partition, reductions
from leeyang.graphs import MultiGraph, path_augment, star_augment


def twospin_brute(g: MultiGraph, a1, a2, lam) -> Fraction:
    total = Fraction(0)
    for mask in range(1 << g.n):
        w = Fraction(lam) ** bin(mask).count("1")
        for u, v, _ in g.edges:
            su, sv = mask >> u & 1, mask >> v & 1
            if su and sv:
                w *= a1
            elif not su and not sv:
                w *= a2
        total += w
    return total


def ising_star(g, beta, lam, k):
    beta, lam = Fraction(beta), Fraction(lam)
    lhs = partition.ising_poly(star_augment(g, k), beta, method="enumerate")(lam)
    lam_k = lam * ((beta + lam) / (1 + beta * lam)) ** k
    rhs = (1 + beta * lam) ** (g.n * k) * partition.ising_poly(g, beta, method="enumerate")(lam_k)
    return lhs, rhs


def ising_path(g, beta, lam, k):
    lhs = partition.ising_poly(path_augment(g, k), beta, method="enumerate")(Fraction(lam))
    s = reductions.ising_path_state(beta, lam, k + 1)
    rhs = s.p_minus**g.n * partition.ising_poly(g, beta, method="enumerate")(s.r)
    return lhs, rhs


def matching_star(g, lam, k):
    lam = Fraction(lam)
    lhs = partition.matching_poly(star_augment(g, k), method="enumerate")(lam)
    rhs = lam ** (g.n * k) * partition.matching_poly(g, method="enumerate")(lam + k / lam)
    return lhs, rhs


def matching_path(g, lam, k):
    lhs = partition.matching_poly(path_augment(g, k), method="enumerate")(Fraction(lam))
    states = reductions.matching_path_states(lam, k + 1)
    y, y1 = states[k].y, states[k + 1].y
    rhs = y**g.n * partition.matching_poly(g, method="enumerate")(y1 / y)
    return lhs, rhs


def twospin_path(g, a1, a2, lam, k, doubled=False):
    h = path_augment(g, k, doubled=doubled, double_connector=False)
    lhs = twospin_brute(h, a1, a2, lam)
    host = reductions.twospin_host_state(a1, a2, lam, reductions.twospin_path_state(a1, a2, lam, k, doubled))
    rhs = host.p_minus**g.n * twospin_brute(g, a1, a2, host.r)
    return lhs, rhs

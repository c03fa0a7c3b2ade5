from __future__ import annotations

from fractions import Fraction as F

import mpmath
import pytest

import identities
from leeyang import partition, reductions
from leeyang.errors import PreconditionError
from leeyang.graphs import MultiGraph, complete_graph, connected_graphs, cycle_graph, path_augment, path_graph
from leeyang.polynomial import UniPoly, gcd


def test_ising_path_state_examples():
    s1 = reductions.ising_path_state(F(1, 3), F(5, 2), 1)
    assert (s1.p_minus, s1.p_plus, s1.r) == (1, F(5, 2), F(5, 2))
    beta, lam = F(1, 3), F(5, 2)
    assert reductions.ising_path_state(beta, lam, 2).r == lam * (beta + lam) / (1 + beta * lam)
    assert reductions.ising_path_state(F(1, 2), 2, 2).r == F(5, 2)


def test_matching_path_state_examples():
    ys = [s.y for s in reductions.matching_path_states(1, 5)]
    assert ys == [1, 1, 2, 3, 5, 8]
    y5, xi, eta = reductions.matching_path_closed_form(F(3, 2), 5)
    assert abs(xi * eta + 1) < mpmath.mpf(10) ** -30
    assert abs(xi + eta - mpmath.mpf(3) / 2) < mpmath.mpf(10) ** -30
    assert abs(y5 - reductions.matching_path_state(F(3, 2), 5).y) < mpmath.mpf(10) ** -30
    states = reductions.matching_path_states(1, 5)
    lams = [states[k + 1].y / states[k].y for k in (0, 2, 4)]
    assert lams == [1, F(3, 2), F(8, 5)]


def test_twospin_path_state_examples():
    s1 = reductions.twospin_path_state(2, 1, F(3, 2), 1)
    assert (s1.m_plus, s1.m_minus, s1.r) == (1, 0, F(3, 2))
    assert reductions.twospin_path_state(2, 1, 1, 2).r == F(3, 2)
    beta, lam = F(1, 3), F(2)
    for k in range(1, 5):
        assert reductions.twospin_path_state(1 / beta, 1 / beta, lam, k).r == reductions.ising_path_state(beta, lam, k).r


def test_recover_ising_star_examples(edge):
    rep = reductions.recover_ising_star(edge, F(1, 2), 2)
    assert rep.polynomial == UniPoly([1, 1, 1]) and rep.value_at_one == 3
    assert rep.verified and rep.consistent
    rep = reductions.recover_ising_star(complete_graph(3), F(1, 4), 3)
    assert rep.polynomial == partition.ising_poly(complete_graph(3), F(1, 4))
    with pytest.raises(PreconditionError):
        reductions.recover_ising_star(edge, F(1, 2), 1)


def test_spin_flip_below_one():
    g = path_graph(3)
    rep = reductions.recover_ising_star(g, F(1, 3), F(1, 2))
    assert rep.verified
    rep = reductions.recover_ising_path(g, F(1, 3), F(2, 3))
    assert rep.verified


def test_recover_ising_path_examples(edge):
    rep = reductions.recover_ising_path(edge, F(1, 2), 2)
    assert rep.polynomial == UniPoly([1, 1, 1])
    assert all(b > a for a, b in zip(rep.lambdas, rep.lambdas[1:]))


def test_path_pipeline_degree_discipline():
    g = cycle_graph(4)
    rep = reductions.recover_ising_path(g, F(1, 2), 3)
    for entry in rep.transcript:
        assert path_augment(g, entry.k).max_degree(simple=True) <= g.max_degree(simple=True) + 1


def test_recover_susceptibility_example(edge):
    rep = reductions.recover_via_susceptibility(edge, F(1, 2))
    assert rep.polynomial == UniPoly([1, 1, 1])
    assert rep.value_at_one == 3
    assert UniPoly.from_json(rep.extra["z_squared"]) == UniPoly([1, 1, 1]) ** 2


def test_susceptibility_coprimality_precondition():
    for n in range(1, 6):
        for g in connected_graphs(n).graphs:
            z = partition.ising_poly(g, F(1, 2))
            num = z * z.lambda_derivative().lambda_derivative() - z.lambda_derivative() ** 2
            assert gcd(num, z * z).degree == 0


def test_recover_matching_examples():
    rep = reductions.recover_matching_star(path_graph(3), 1)
    assert rep.polynomial == UniPoly([0, 2, 0, 1])
    assert rep.extra["perfect_matching_weight"] == 0
    heavy = MultiGraph(2, ((0, 1, 3),))
    for fn in (reductions.recover_matching_star, reductions.recover_matching_path):
        rep = fn(heavy, 2)
        assert rep.extra["perfect_matching_weight"] == 3 and rep.verified


def test_matching_star_skips_lambda_squared():
    rep = reductions.recover_matching_star(path_graph(2), 2)
    assert 4 not in [t.k for t in rep.transcript]
    assert rep.verified


def test_twospin_case_split():
    assert not reductions.twospin_case_doubled(2, 1, 1)
    assert reductions.twospin_case_doubled(2, 3, 2)


def test_recover_twospin_examples():
    rep = reductions.recover_twospin(complete_graph(4), 3, F(1, 2), 1)
    assert rep.verified and rep.polynomial == partition.twospin_poly(complete_graph(4), 3, F(1, 2))
    rep = reductions.recover_twospin(cycle_graph(3), 2, 3, 2)
    assert rep.extra["doubled_paths"] and rep.verified


def test_twospin_translate_examples():
    assert reductions.twospin_translate(2, 8, 1, 3) == (F(1, 4), F(1, 8))
    for g, (a1, a2, lam) in ((complete_graph(4), (2, 8, 1)), (cycle_graph(5), (3, 2, F(1, 2)))):
        delta = g.degrees[0]
        beta, lam_p = reductions.twospin_translate(a1, a2, lam, delta)
        if isinstance(beta, F) and isinstance(lam_p, F):
            assert partition.twospin_poly(g, a1, a2)(lam) == F(a2) ** g.m * partition.ising_poly(g, beta)(lam_p)
    with pytest.raises(PreconditionError):
        reductions.twospin_translate(1, 1, 1, 2)


def test_unit_field_identity():
    for g in (complete_graph(4), cycle_graph(5), complete_graph(3)):
        for alpha in (F(3, 2), F(5)):
            lhs, rhs = reductions.unit_field_identity(g, alpha)
            assert lhs == rhs


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_augmentation_identities_spot(k, edge):
    assert len({*identities.ising_star(edge, F(1, 2), F(3), k)}) == 1
    assert len({*identities.matching_star(edge, F(2), k)}) == 1
    if k >= 1:
        assert len({*identities.ising_path(edge, F(1, 2), F(3), k)}) == 1
        assert len({*identities.twospin_path(edge, 2, 3, F(1, 2), k)}) == 1
    assert len({*identities.matching_path(edge, F(2), k)}) == 1


def test_affine_inversions_match_direct_averages():
    g = complete_graph(3)
    beta = F(1, 3)
    for rep in (reductions.recover_ising_star(g, beta, 2), reductions.recover_ising_path(g, beta, 2)):
        for t in rep.transcript:
            assert t.derived_average == partition.magnetization(g, beta, t.lambda_k)
    for rep in (reductions.recover_matching_star(g, 2), reductions.recover_matching_path(g, 2)):
        for t in rep.transcript:
            assert t.derived_average == partition.monomer_count(g, t.lambda_k)
    rep = reductions.recover_twospin(g, 3, F(1, 2), 2)
    for t in rep.transcript:
        assert t.derived_average == partition.twospin_magnetization(g, 3, F(1, 2), t.lambda_k)


def test_report_json(edge):
    out = reductions.recover_ising_star(edge, F(1, 2), 2).to_json()
    assert out["polynomial"] == ["1", "1", "1"] and out["verified"] is True

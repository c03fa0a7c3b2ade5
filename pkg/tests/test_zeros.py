from __future__ import annotations

import random
from fractions import Fraction as F

import mpmath
import pytest

from leeyang import partition, zeros
from leeyang.errors import PreconditionError
from leeyang.graphs import MultiGraph, complete_graph, disjoint_union, path_graph
from leeyang.polynomial import UniPoly


def test_find_roots_examples():
    rs = zeros.find_roots(UniPoly([1, 1, 1]), 256)
    with mpmath.workprec(256):
        target = {mpmath.expj(2 * mpmath.pi / 3), mpmath.expj(-2 * mpmath.pi / 3)}
        for z in rs.roots:
            assert abs(abs(z) - 1) < mpmath.mpf(10) ** -30
            assert min(abs(z - t) for t in target) < mpmath.mpf(10) ** -30
    rs = zeros.find_roots(UniPoly([0, 2, 0, 1]))
    got = sorted((complex(z) for z in rs.roots), key=lambda c: c.imag)
    assert got == pytest.approx([-(2**0.5) * 1j, 0, 2**0.5 * 1j], abs=1e-15)
    assert complex(zeros.find_roots(UniPoly([-1, 1])).roots[0]) == pytest.approx(1)


def test_inclusion_radii_isolate_simple_roots():
    rs = zeros.find_roots(UniPoly.from_roots([1, 2, 3, 4]))
    assert len(zeros.isolate_components(rs)) == 4
    rs = zeros.find_roots(UniPoly.from_roots([1, 1, 3]))
    comps = sorted(len(c) for c in zeros.isolate_components(rs))
    assert comps == [1, 2]


def test_strict_interior_examples():
    assert zeros.certify_strictly_inside_unit_disk(UniPoly([0, 1, 2])).verdict
    assert not zeros.certify_strictly_inside_unit_disk(UniPoly([-1, 1])).verdict
    assert zeros.certify_strictly_inside_unit_disk(UniPoly([F(1, 2), 1])).verdict


def test_unit_circle_examples():
    assert zeros.certify_unit_circle(UniPoly([1, 1, 1])).verdict
    assert zeros.certify_unit_circle(UniPoly([1, 2, 1])).verdict
    assert not zeros.certify_unit_circle(UniPoly([0, 1, 2])).verdict


def test_imaginary_axis_examples():
    p3 = UniPoly([0, 2, 0, 1])
    assert zeros.imaginary_axis_polynomial(p3) == UniPoly([0, -2, 0, 1])
    axis, simple = zeros.certify_imaginary_axis_and_simple(p3)
    assert axis.verdict and simple.verdict
    axis, simple = zeros.certify_imaginary_axis_and_simple(UniPoly([3, 0, 1]))
    assert axis.verdict and simple.verdict
    two_edges = partition.matching_poly(disjoint_union(path_graph(2), path_graph(2)))
    assert two_edges == UniPoly([1, 0, 2, 0, 1])
    axis, simple = zeros.certify_imaginary_axis_and_simple(two_edges)
    assert axis.verdict and not simple.verdict
    with pytest.raises(PreconditionError):
        zeros.imaginary_axis_polynomial(UniPoly([1, 1]))


def test_gauss_lucas_literal_hull():
    z = UniPoly([1, 1, 1])
    # the plain derivative has its root -1/2 on the hull chord
    assert zeros.gauss_lucas_check(z, z.derivative()).verdict
    # the lambda-derivative adds the root 0, which is off the chord
    assert not zeros.gauss_lucas_check(z, z.lambda_derivative()).verdict
    sq = UniPoly([1, 2, 1])
    assert not zeros.gauss_lucas_check(sq, sq.lambda_derivative()).verdict


def test_newman_examples(edge):
    assert zeros.newman_check(edge, F(1, 2), [F(2), F(2)], [1, 1])
    zs, dz, _ = partition.weighted_sums(edge, F(1, 2), [F(2), F(2)], [1, 1])
    assert (zs, dz) == (7, 10)
    k4 = complete_graph(4)
    assert zeros.newman_check(k4, F(1, 3), [1] * 4, [3] * 4)
    with mpmath.workprec(256):
        for j in range(24):
            z = mpmath.expj(2 * mpmath.pi * j / 24 + mpmath.mpf(1) / 7)
            assert zeros.newman_check(edge, F(1, 2), [z, z], [1, 1])


def test_newman_rejects_illegal_weights(edge):
    with pytest.raises(PreconditionError):
        zeros.newman_check(edge, F(1, 2), [2, 2], [0, 1])


def test_wsglp_d_eval_examples(edge):
    assert partition.weighted_ising_D_eval(edge, F(1, 2), [1, 1], [1, 1]) == 3
    g = complete_graph(4)
    delta = 3
    d_eval = partition.weighted_ising_D_eval(g, F(1, 2), [1] * 4, [delta] * 4)
    z1 = partition.ising_poly(g, F(1, 2))(1)
    assert d_eval == delta * F(g.n, 2) * z1


def test_wsglp_probe_k4():
    rep = zeros.wsglp_probe(complete_graph(4), F(1, 2), [3] * 4, n_samples=1000, seed=3)
    assert rep.passed and rep.min_modulus > 0


def test_conditioned_probe():
    g = complete_graph(3)
    rep = zeros.wsglp_probe(g, F(1, 3), [2, 2, 2], n_samples=200, seed=1, plus_set={0})
    assert rep.passed


def test_schur_cohn_agrees_with_numeric_roots():
    rng = random.Random(2024)
    checked = 0
    while checked < 1000:
        deg = rng.randint(1, 12)
        coeffs = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(deg + 1)]
        if coeffs[-1] == 0:
            continue
        p = UniPoly(coeffs)
        rs = zeros.find_roots(p, 96)
        moduli = [abs(z) for z in rs.roots]
        if min(abs(m - 1) for m in moduli) < 1e-6:
            continue
        expected = max(moduli) < 1
        assert zeros.schur_cohn_inside(p)[0] == expected, p
        checked += 1


def test_disconnected_counterexample_detected():
    k3 = complete_graph(3)
    g = disjoint_union(k3, k3)
    z = partition.ising_poly(g, F(1, 2))
    dz = z.lambda_derivative()
    assert not zeros.certify_coprime(z, dz).verdict
    assert not zeros.certify_strictly_inside_unit_disk(dz.divide_by_x_power(1)).verdict


def test_certificate_json():
    cert = zeros.certify_squarefree(UniPoly.from_roots([1, 1]))
    out = cert.to_json("g")
    assert out["verdict"] is False and out["graph_id"] == "g"

import numpy as np
import pytest

from aip import circle
from aip.colligation import build_coefficient_matrix, eval_S
from aip.errors import DegenerateInput, PreconditionError
from aip.parametrization import verify_solution
from aip.problems import (NpData, SarasonData, blaschke, build_sarason, kernel_values,
                          sarason_from_np)
from aip.sarason import (check_criterion_66, check_outer, criterion_66_infimum,
                         denseness_projection_residual, eval_FS, factor_s2_through_theta,
                         hs_gram, normalize_sarason, star_outer_gap)
from aip.suites import random_constant_parameter, random_sarason

QUAD = 4096


def _sarason(zeros, values):
    p = build_sarason(sarason_from_np(NpData(zeros, values)))
    return p, build_coefficient_matrix(p)


@pytest.fixture(scope="module")
def three_node():
    return _sarason([0, 0.5, -0.4j], [-0.048j, 0.2265 - 0.1867j, -0.1908 - 0.1153j])


def test_FS_of_zero_vanishes(sarason_pair):
    p, cm = sarason_pair
    smp = eval_FS(cm, p, np.zeros(p.dimX), circle.circle_grid(256))
    assert np.all(smp.FS_values == 0)


def test_FS_independent_oracle(sarason_pair):
    # F^S x = [[1, S], [S^H, 1]] [x; 0; -P_+(conj(s0) x); 0] built from S alone
    p, cm = sarason_pair
    t = circle.circle_grid(QUAD)
    S = eval_S(cm, t)
    W = circle.weight_blocks(S)
    K = kernel_values(p.data.zeros, t)
    for j in range(p.dimX):
        x = K[:, j]
        s0 = S[:, 0, 0]
        u = np.zeros((t.size, 4), dtype=complex)
        u[:, 0] = x
        u[:, 2] = -circle.project_plus(np.conj(s0) * x)
        oracle = np.einsum("mij,mj->mi", W, u)
        smp = eval_FS(cm, p, np.eye(p.dimX)[j], t)
        assert np.max(np.abs(smp.FS_values - oracle)) <= 1e-8
        assert smp.cross_check <= 1e-8


def test_split_dimensions(sarason_pair):
    p, cm = sarason_pair
    smp = eval_FS(cm, p, np.ones(p.dimX), circle.circle_grid(64))
    parts = smp.split((cm.dimE2, cm.dimN1, cm.dimE1, cm.dimN2))
    assert [a.shape[1] for a in parts] == [1, 1, 1, 1]


def test_norm_inequality_and_equality(sarason_pair, rng):
    p, cm = sarason_pair
    t = circle.circle_grid(QUAD)
    smp = [eval_FS(cm, p, e, t) for e in np.eye(p.dimX)]
    G = hs_gram(cm, smp)
    # the Gram matrix of F^S on the basis reproduces D
    assert np.max(np.abs(G - p.D)) <= 5e-3 * np.max(np.abs(p.D))
    for _ in range(5):
        x = rng.standard_normal(p.dimX) + 1j * rng.standard_normal(p.dimX)
        Dxx = (x.conj() @ p.D @ x).real
        Fx = (x.conj() @ G @ x).real
        assert Fx <= Dxx * (1 + 5e-3)
        assert abs(Fx - Dxx) <= 5e-3 * Dxx


def test_s2_conj_x_in_H2_minus(three_node):
    p, cm = three_node
    t = circle.circle_grid(QUAD)
    for e in np.eye(p.dimX):
        bottom = eval_FS(cm, p, e, t).split((1, 1, 1, 1))[3][:, 0]
        assert circle.wrong_sign_mass(bottom, "minus") <= 1e-6


def test_theta_divides_s2(three_node):
    p, cm = three_node
    _, res = factor_s2_through_theta(cm, p.data.zeros, circle.circle_grid(QUAD))
    assert res <= 1e-6


def test_wrong_divisor_is_detected(three_node):
    p, cm = three_node
    _, res = factor_s2_through_theta(cm, [0.3 + 0.3j, 0.5, -0.4j], circle.circle_grid(QUAD))
    assert res > 1e-2


def test_check_outer_examples():
    t = circle.circle_grid(QUAD)
    assert check_outer(np.full(t.size, 2.0), 2.0) == pytest.approx(0, abs=1e-14)
    assert check_outer(1 - 0.5 * t, 1.0) == pytest.approx(0, abs=1e-12)
    b = blaschke([0.5], t)
    assert check_outer(b, blaschke([0.5], np.array([0.0]))[0]) == pytest.approx(np.log(2), abs=1e-12)
    with pytest.raises(DegenerateInput):
        check_outer(np.zeros(t.size), 1.0)


def test_s1_outer_and_s2_star_outer(three_node):
    p, cm = three_node
    t = circle.circle_grid(QUAD)
    s1 = cm.blocks(eval_S(cm, t))[1][:, 0, 0]
    s1_0 = cm.blocks(eval_S(cm, 0.0))[1][0, 0]
    assert check_outer(s1, s1_0) <= 1e-3
    st, _ = factor_s2_through_theta(cm, p.data.zeros, t)
    assert star_outer_gap(st) <= 1e-3


def test_normalization_makes_s1_equal_s2tilde(three_node):
    p, cm = three_node
    cn, info = normalize_sarason(cm, p.data.zeros, QUAD)
    assert abs(abs(info["alpha"]) - 1) < 1e-12 and abs(abs(info["beta"]) - 1) < 1e-12
    assert info["s1_stilde2_mismatch"] <= 1e-6
    assert cn.blocks(eval_S(cn, 0.0))[1][0, 0].real > 0
    # rescaling the free coordinates leaves the solution set unchanged
    om = random_constant_parameter(np.random.default_rng(3), 1, 1, 0.8)
    rep = verify_solution(p, cn, om, quad_n=1024)
    assert rep.identity_residual <= 1e-8 and rep.relative_norm_gap <= 5e-3


@pytest.mark.parametrize("zeros, values", [([0.5], None), ([0, 0.5], [0.2, 0.5]),
                                           ([0, 0.5, -0.4j], [-0.048j, 0.2265 - 0.1867j, -0.1908 - 0.1153j])])
def test_criterion_on_genuine_S(zeros, values):
    if values is None:
        p = build_sarason(SarasonData(zeros, [[0.3]]))
    else:
        p = build_sarason(sarason_from_np(NpData(zeros, values)))
    cm = build_coefficient_matrix(p)
    assert check_criterion_66(cm, p, QUAD) <= 1e-3


def _corrupt(cm, t):
    S = eval_S(cm, t).copy()
    S[:, 0, 0] *= t
    return S


def test_criterion_negative_control(three_node):
    p, cm = three_node
    cn, _ = normalize_sarason(cm, p.data.zeros, QUAD)
    t = circle.circle_grid(QUAD)
    assert criterion_66_infimum(_corrupt(cn, t), t, p.data.zeros) > 0.01
    # fewer nodes leave less room to see the corruption, but it is still visible
    p2, cm2 = _sarason([0, 0.5], [0.2, 0.5])
    cn2, _ = normalize_sarason(cm2, p2.data.zeros, QUAD)
    assert criterion_66_infimum(_corrupt(cn2, t), t, p2.data.zeros) > 0.01


def test_criterion_requires_sarason(np_pair):
    p, cm = np_pair
    with pytest.raises(PreconditionError):
        check_criterion_66(cm, p)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_denseness(n, rng):
    p = build_sarason(random_sarason(rng, n))
    cm = build_coefficient_matrix(p)
    assert denseness_projection_residual(cm, p, degree=3, quad_n=QUAD) <= 2e-3

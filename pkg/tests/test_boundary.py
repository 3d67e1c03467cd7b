import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aip.boundary import (angular_derivative, boundary_residual_detect, caratheodory_integral,
                          caratheodory_quotient)
from aip.colligation import build_coefficient_matrix, eval_S
from aip.errors import PreconditionError
from aip.parametrization import SchurParameter, solution_fn, verify_solution
from aip.problems import BoundaryData, NpData, build_boundary, build_np
from aip.suites import mobius_parameter, random_boundary, random_constant_parameter


def identity(z):
    return np.asarray(z, dtype=complex)


def test_quotient_identity():
    D, conv = caratheodory_quotient(identity, 1.0)
    assert D == pytest.approx(1, abs=1e-6) and conv


def test_quotient_constant_unimodular():
    for c in (1j, np.exp(0.7j), np.exp(-2.1j)):
        D, conv = caratheodory_quotient(lambda z: np.full(np.shape(z), c), 1.0)
        assert D == 0 and conv


def test_quotient_square():
    D, _ = caratheodory_quotient(lambda z: np.asarray(z) ** 2, 1.0)
    assert D == pytest.approx(2, abs=1e-5)


def test_quotient_divergence_flagged():
    # w(z) = (1 + z)/2 at t0 = -1: quotient grows like 1/(1 - r)
    _, conv = caratheodory_quotient(lambda z: (1 + np.asarray(z)) / 2, -1.0)
    assert not conv


def test_integral_identity_and_constant():
    assert caratheodory_integral(identity, 1.0, 1.0) == pytest.approx(1, abs=1e-9)
    assert caratheodory_integral(lambda z: np.ones(np.shape(z)), 1.0, 1.0) == 0


def test_integral_blows_up():
    # w = (1 + z)/2 touches the circle at 1 but |w(-1)| = 0, so at t0 = 1 it is fine;
    # at t0 = -1 with w0 = -1 the integrand is not integrable
    assert caratheodory_integral(lambda z: (1 + np.asarray(z)) / 2, -1.0, -1.0) == np.inf


def test_integral_blaschke_square():
    # D = 2 for z^2 at 1; the integrand is |1 + t|^2
    assert caratheodory_integral(lambda z: np.asarray(z) ** 2, 1.0, 1.0) == pytest.approx(2, abs=1e-6)


def test_detect_examples(boundary_unit):
    _, cb = boundary_unit
    conj_s = np.conj(cb.blocks(eval_S(cb, 1.0))[3][0, 0])
    assert not boundary_residual_detect(cb, SchurParameter.constant(0.5), 1.0)
    assert boundary_residual_detect(cb, SchurParameter.constant(conj_s), 1.0)
    # omega(z) = z conj(s(1)), realized by a unitary colligation
    from aip.colligation import UnitaryColligation
    z_om = SchurParameter(realization=UnitaryColligation([[0]], [[1]], [[conj_s]], [[0]]))
    assert boundary_residual_detect(cb, z_om, 1.0)


def test_detect_precondition():
    cm = build_coefficient_matrix(build_np(NpData([0], [0.2])))
    with pytest.raises(PreconditionError):
        boundary_residual_detect(cm, SchurParameter.zero(1, 1), 0.3)  # |s(0.3)| < 1
    c0 = build_coefficient_matrix(build_boundary(BoundaryData(1, 1, 0)))
    with pytest.raises(PreconditionError):
        boundary_residual_detect(c0, SchurParameter.zero(0, 0), 1.0)


def _parameters(cb, t0, rng):
    conj_s = np.conj(cb.blocks(eval_S(cb, t0))[3][0, 0])
    conj_s = conj_s / abs(conj_s)
    a = 0.4 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    # Mobius phase chosen so that omega(t0) = conj(s(t0))
    b = (t0 - a) / (1 - np.conj(a) * t0)
    return [
        (random_constant_parameter(rng, 1, 1, 0.9), False),
        (SchurParameter.constant(conj_s), True),
        (SchurParameter.constant(-conj_s), False),
        (mobius_parameter(a, conj_s / b), True),
        (mobius_parameter(a, -conj_s / b), False),
    ]


@given(st.integers(0, 10_000))
def test_detect_iff_norm_gap(seed):
    rng = np.random.default_rng(seed)
    d = random_boundary(rng)
    p = build_boundary(d)
    cb = build_coefficient_matrix(p)
    for om, expected in _parameters(cb, d.t0, rng):
        flag = boundary_residual_detect(cb, om, d.t0)
        gap = verify_solution(p, cb, om, quad_n=2048).relative_norm_gap
        assert flag == expected
        assert flag == (gap > 0.05)


@given(st.integers(0, 10_000))
def test_generated_solutions_respect_bound(seed):
    rng = np.random.default_rng(seed)
    d = random_boundary(rng)
    cb = build_coefficient_matrix(build_boundary(d))
    om = random_constant_parameter(rng, 1, 1, 0.95)
    fn = solution_fn(cb, om)
    est = angular_derivative(lambda z: fn(z)[:, 0, 0], d.t0, d.w0)
    assert est.D_liminf <= d.Dbound + 1e-3
    assert abs(est.D_liminf - est.D_integral) <= 1e-2
    assert abs(est.w0_limit - d.w0) <= 1e-7

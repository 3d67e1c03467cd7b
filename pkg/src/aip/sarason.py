"""Dense set ``F^S x`` in ``H^S`` and the structure of Sarason coefficient matrices.

For the scalar Sarason problem on ``K_theta`` the Fourier representation
of the universal colligation maps ``x`` to

    F^S x = [[1, S], [S^H, 1]] [x; 0; -P_+ s0^H x; 0],

whose bottom entry ``s2^H x`` lies in H^2_-.  This forces ``s2 = theta s2~``.
Also ``s1`` is outer and ``s2~`` is *-outer, and after a unimodular
normalization ``s1 = s2~ = a`` the matrix satisfies the quadratic-form
criterion computed by :func:`check_criterion_66`.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import circle
from .colligation import eval_S, eval_fourier_G0
from .errors import DegenerateInput, PreconditionError
from .parametrization import PINV_TOL, eval_F_special
from .problems import blaschke, kernel_values

CROSS_CHECK_TOL = 1e-8
OUTER_FLOOR = 1e-12


@dataclass
class DenseSetSample:
    x: np.ndarray
    t: np.ndarray
    FS_values: np.ndarray   # (m, E2 + N1 + E1 + N2)
    cross_check: float

    def split(self, dims):
        """``(E2, N1, E1, N2)`` components given ``dims = (e2, n1, e1, n2)``."""
        edges = np.cumsum((0,) + tuple(dims))
        return tuple(self.FS_values[:, a:b] for a, b in zip(edges[:-1], edges[1:]))


def _require_sarason(p):
    if p.kind != "sarason" or p.data is None:
        raise PreconditionError("a Sarason-built problem is required")


def _scalar_indeterminate(cm):
    if (cm.dimE1, cm.dimE2, cm.dimN1, cm.dimN2) != (1, 1, 1, 1):
        raise PreconditionError("a scalar indeterminate instance (E1=E2=N1=N2=C) is required")


def eval_FS(cm, p, x, t_grid):
    """Sample ``F^S x`` on ``t_grid``.

    Values come from the special-case resolvent formulas with ``S`` in
    place of ``w`` and the padded maps ``[M1; 0]``, ``[M2; 0]``.  The
    maximum deviation from the Fourier representation of ``A0`` is stored
    in ``cross_check`` and must not exceed 1e-8.
    """
    _require_sarason(p)
    t = np.asarray(t_grid, dtype=complex).reshape(-1)
    x = np.asarray(x, dtype=complex).reshape(p.dimX)
    padded = replace(p, M1=np.vstack([p.M1, np.zeros((cm.dimN2, p.dimX))]),
                     M2=np.vstack([p.M2, np.zeros((cm.dimN1, p.dimX))]))
    Fp, Fm = eval_F_special(padded, eval_S(cm, t), x, t)
    plus, minus = eval_fourier_G0(cm, cm.embed(x), t)
    dev = max(np.max(np.abs(Fp - plus), initial=0.0), np.max(np.abs(Fm - minus), initial=0.0))
    scale = max(1.0, np.max(np.abs(plus), initial=0.0), np.max(np.abs(minus), initial=0.0))
    if dev > CROSS_CHECK_TOL * scale:
        raise ArithmeticError(f"F^S special-case formula disagrees with A0 by {dev:.3g}")
    return DenseSetSample(x, t, np.concatenate([Fp, Fm], axis=1), float(dev))


def hs_gram(cm, samples):
    """Gram matrix ``[<F_b, F_a>]`` of sampled ``H^S`` vectors (each (m, d))."""
    t = samples[0].t
    W = circle.weight_blocks(eval_S(cm, t))
    F = np.stack([s.FS_values for s in samples], axis=2)
    return circle.range_inner(W, F, F, PINV_TOL)


def factor_s2_through_theta(cm, theta_zeros, t_grid):
    """``s2~ = conj(theta) s2`` on ``t_grid`` and its analyticity/contractivity residual.

    The residual is the relative H^2_- mass of ``s2~`` plus
    ``max(|s2~| - 1, 0)``; it vanishes iff ``theta`` divides ``s2``.
    """
    _scalar_indeterminate(cm)
    t = np.asarray(t_grid, dtype=complex).reshape(-1)
    s2 = cm.blocks(eval_S(cm, t))[2][:, 0, 0]
    st = np.conj(blaschke(theta_zeros, t)) * s2
    res = circle.wrong_sign_mass(st, "plus") + max(float(np.max(np.abs(st))) - 1.0, 0.0)
    return st, float(res)


def check_outer(f, f_at_0):
    """``|log|f(0)| - mean log|f(t_j)||`` for samples of ``f`` on :func:`circle_grid`.

    Zero for outer functions; ``-log|b(0)|`` for an extra inner factor ``b``.

    Raises
    ------
    DegenerateInput
        If ``f`` (nearly) vanishes at a grid point or at 0.
    """
    f = np.asarray(f, dtype=complex).reshape(-1)
    low = float(np.min(np.abs(f)))
    if low < OUTER_FLOOR or abs(f_at_0) < OUTER_FLOOR:
        raise DegenerateInput(f"function nearly vanishes (min |f| = {low:.3g})")
    return float(abs(np.log(abs(f_at_0)) - np.mean(np.log(np.abs(f)))))


def star_outer_gap(stilde_samples):
    """:func:`check_outer` applied to the reflection ``t -> conj(s2~(conj t))``.

    The value at 0 of the analytic function is its zeroth Fourier coefficient.
    """
    st = np.asarray(stilde_samples, dtype=complex)
    refl = np.conj(st[::-1])
    k, c = circle.fourier_coefficients(refl)
    return check_outer(refl, c[k == 0][0])


def normalize_sarason(cm, theta_zeros, quad_n=4096):
    """Rescale ``N1``/``N2`` by unimodular constants so ``s1(0) > 0`` and ``s2~(0) > 0``.

    Returns ``(cm_normalized, info)`` where ``info`` records the phases
    and the sampled mismatch ``max |s1 - s2~|`` (checked, not forced).
    """
    _scalar_indeterminate(cm)
    t = circle.circle_grid(quad_n)
    s1_0 = complex(cm.blocks(eval_S(cm, 0.0))[1][0, 0])
    st, _ = factor_s2_through_theta(cm, theta_zeros, t)
    k, c = circle.fourier_coefficients(st)
    st_0 = complex(c[k == 0][0])
    if abs(s1_0) < OUTER_FLOOR or abs(st_0) < OUTER_FLOOR:
        raise DegenerateInput(f"|s1(0)| = {abs(s1_0):.3g}, |s2~(0)| = {abs(st_0):.3g}; cannot normalize")
    alpha = np.conj(s1_0) / abs(s1_0)
    beta = np.conj(st_0) / abs(st_0)
    out = cm.rescaled(alpha, beta)
    s1 = out.blocks(eval_S(out, t))[1][:, 0, 0]
    st2, _ = factor_s2_through_theta(out, theta_zeros, t)
    info = {"alpha": complex(alpha), "beta": complex(beta),
            "s1_0": abs(s1_0), "stilde2_0": abs(st_0),
            "s1_stilde2_mismatch": float(np.max(np.abs(s1 - st2)))}
    return out, info


def criterion_66_infimum(S_t, t, zeros, basis_size=None):
    """``min_x ||P_- S^H ([0; 1] - [x; 0])||^2`` over the span of kernel functions.

    ``S_t`` holds 2x2 samples of ``S`` on :func:`circle_grid` points ``t``;
    ``x`` ranges over the first ``basis_size`` kernels ``k_j`` of ``zeros``.
    Solved by normal equations with a pseudo-inverse.
    """
    zeros = np.asarray(zeros, dtype=complex)[:basis_size]
    Sh = np.conj(np.swapaxes(S_t, 1, 2))
    b = circle.project_minus(Sh[:, :, 1])
    K = kernel_values(zeros, t)
    A = circle.project_minus(Sh[:, :, :1] * K[:, None, :])
    G = np.einsum("mia,mib->ab", A.conj(), A) / t.size
    r = np.einsum("mia,mi->a", A.conj(), b) / t.size
    x = np.linalg.pinv(G, rcond=PINV_TOL, hermitian=True) @ r
    resid = b - A @ x
    return float(np.real(np.mean(np.sum(np.abs(resid) ** 2, axis=1))))


def check_criterion_66(cm, p, quad_n=4096, basis_size=None, normalize=True):
    """Infimum estimate of the quadratic form criterion for ``S`` of a Sarason problem.

    ``S`` is first normalized by :func:`normalize_sarason`.  Genuine
    coefficient matrices give values near 0.
    """
    _require_sarason(p)
    _scalar_indeterminate(cm)
    zeros = p.data.zeros
    if normalize:
        cm, _ = normalize_sarason(cm, zeros, quad_n)
    t = circle.circle_grid(quad_n)
    return criterion_66_infimum(eval_S(cm, t), t, zeros, basis_size)


def dense_test_vector(cm, h_plus, t):
    """Samples of ``[[1, S], [S^H, 1]] [u; -P_+ S^H u]`` with ``u = [0; h_+]``."""
    S = eval_S(cm, t)
    m = t.size
    u = np.zeros((m, cm.dimE2 + cm.dimN1), dtype=complex)
    u[:, cm.dimE2:] = np.asarray(h_plus, dtype=complex).reshape(m, cm.dimN1)
    y = -circle.project_plus(np.einsum("mji,mj->mi", S.conj(), u))
    W = circle.weight_blocks(S)
    return np.einsum("mij,mj->mi", W, np.concatenate([u, y], axis=1))


def denseness_projection_residual(cm, p, degree=3, quad_n=4096):
    """Worst relative ``H^S`` residual of the vectors built from ``h_+ = t^j`` (``j <= degree``)
    after least-squares projection onto ``span{F^S x}`` over the kernel basis.
    """
    _require_sarason(p)
    t = circle.circle_grid(quad_n)
    basis = [eval_FS(cm, p, e, t) for e in np.eye(p.dimX)]
    F = np.stack([b.FS_values for b in basis], axis=2)
    W = circle.weight_blocks(eval_S(cm, t))
    G = circle.range_inner(W, F, F, PINV_TOL)
    Gp = np.linalg.pinv(G, rcond=PINV_TOL, hermitian=True)
    worst = 0.0
    for n1 in range(cm.dimN1):
        for j in range(degree + 1):
            h = np.zeros((t.size, cm.dimN1), dtype=complex)
            h[:, n1] = t ** j
            v = dense_test_vector(cm, h, t)
            vv = circle.range_inner(W, v, v, PINV_TOL).real
            b = circle.range_inner(W, v[:, :, None], F, PINV_TOL)[:, 0]
            proj = (b.conj() @ Gp @ b).real
            if vv > 0:
                worst = max(worst, np.sqrt(max(vv - proj, 0.0) / vv))
    return float(worst)

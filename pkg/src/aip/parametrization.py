"""Solutions of the interpolation problem from Schur parameters.

Every solution is ``w = s0 + s2 omega (I - s omega)^{-1} s1`` for a Schur
class ``omega: N1 -> N2``; the associated map ``F`` is read off from the
Fourier representation of ``A0``.  :func:`verify_solution` checks a
generated solution against the original data.
"""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import circle
from .colligation import UnitaryColligation, eval_fourier_G0, eval_S
from .errors import DimensionMismatch, SingularResolvent
from .linalg_core import as_cmatrix

PINV_TOL = 1e-10
RESOLVENT_LIMIT = 1e12
RADIAL_STEP = 1e-4


class SchurParameter:
    """A Schur class function ``omega: N1 -> N2``.

    Either a constant contraction (``kind='constant'``) or the
    characteristic function of a unitary colligation (``kind='realized'``).
    """

    def __init__(self, value=None, realization=None, dims=None):
        if (value is None) == (realization is None):
            raise ValueError("give exactly one of value or realization")
        if value is not None:
            v = np.asarray(value, dtype=complex)
            if dims is not None:
                v = v.reshape(dims)
            v = v.reshape(0, 0) if v.size == 0 and v.ndim < 2 else as_cmatrix(v, name="omega")
            if v.size and np.linalg.norm(v, 2) > 1 + 1e-12:
                raise ValueError("constant parameter must be a contraction")
            self.kind = "constant"
            self.value = v
            self.realization = None
        else:
            if not isinstance(realization, UnitaryColligation):
                raise TypeError("realization must be a UnitaryColligation")
            self.kind = "realized"
            self.value = None
            self.realization = realization

    @classmethod
    def constant(cls, value, dimN1=1, dimN2=1):
        return cls(value=np.asarray(value, dtype=complex).reshape(dimN2, dimN1))

    @classmethod
    def zero(cls, dimN1, dimN2):
        return cls(value=np.zeros((dimN2, dimN1), dtype=complex))

    @property
    def shape(self):
        if self.kind == "constant":
            return self.value.shape
        return (self.realization.dimOut, self.realization.dimIn)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        pts = z.reshape(-1)
        if self.kind == "constant":
            out = np.broadcast_to(self.value, (pts.size,) + self.value.shape).copy()
        else:
            out = self.realization(pts)
        return out[0] if z.ndim == 0 else out

    def at_zero(self):
        return self(0.0)

    def describe(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        r = self.realization
        return {"kind": "realized", "A": r.A, "B": r.B, "C": r.C, "D": r.Dblk}


@dataclass
class LftParts:
    """Pointwise ingredients of the linear-fractional formula (point index first)."""

    z: np.ndarray
    S: np.ndarray
    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s: np.ndarray
    omega: np.ndarray
    phi_circ: np.ndarray   # (I - s omega)^{-1}
    psi_circ: np.ndarray   # (I - omega s)^{-1}
    phi: np.ndarray        # phi_circ s1
    psi: np.ndarray        # s2 psi_circ
    w: np.ndarray


def _guarded_inverse(M):
    n = M.shape[-1]
    if n == 0:
        return np.zeros_like(M)
    inv = np.linalg.inv(M)
    big = np.linalg.norm(inv, 2, axis=(-2, -1)) if inv.ndim == 3 else np.linalg.norm(inv, 2)
    if np.any(~np.isfinite(big)) or np.max(big) > RESOLVENT_LIMIT:
        raise SingularResolvent("I - s omega is numerically singular")
    return inv


def _check_param(cm, om):
    if om.shape != (cm.dimN2, cm.dimN1):
        raise DimensionMismatch(f"parameter must be {cm.dimN2}x{cm.dimN1}, got {om.shape}")


def lft_parts(cm, om, z):
    """Evaluate every piece of the parametrization at the points ``z``."""
    _check_param(cm, om)
    z = np.asarray(z, dtype=complex).reshape(-1)
    S = eval_S(cm, z)
    s0, s1, s2, s = cm.blocks(S)
    o = om(z)
    n1, n2 = cm.dimN1, cm.dimN2
    phi_c = _guarded_inverse(np.eye(n1)[None] - s @ o)
    psi_c = _guarded_inverse(np.eye(n2)[None] - o @ s)
    phi = phi_c @ s1
    psi = s2 @ psi_c
    w = s0 + s2 @ o @ phi
    return LftParts(z, S, s0, s1, s2, s, o, phi_c, psi_c, phi, psi, w)


def lft_solution(cm, om, z):
    """``w(z) = s0 + s2 omega (I - s omega)^{-1} s1`` (scalar or batched ``z``)."""
    w = lft_parts(cm, om, z).w
    return w[0] if np.ndim(z) == 0 else w


def phi_psi(cm, om, z, circ=False):
    """``(phi, psi)`` or, with ``circ=True``, ``((I - s omega)^{-1}, (I - omega s)^{-1})``."""
    parts = lft_parts(cm, om, z)
    out = (parts.phi_circ, parts.psi_circ) if circ else (parts.phi, parts.psi)
    return tuple(a[0] for a in out) if np.ndim(z) == 0 else out


def solution_fn(cm, om):
    """Vectorized callable ``z -> w(z)`` for scalar-output use (e.g. boundary estimates)."""
    def w(z):
        return lft_solution(cm, om, z)
    return w


def eval_F(cm, om, x, t):
    """``F x`` at ``t`` from the Fourier representation of ``A0``.

    ``F_+ = p_E2 + psi omega p_N1`` and ``F_- = m_E1 + phi^H omega^H m_N2``
    where ``(p, m)`` is ``G0[x]``.  Returns ``(Fplus, Fminus)``; batched
    ``t`` puts the point index first.
    """
    t_arr = np.asarray(t, dtype=complex).reshape(-1)
    parts = lft_parts(cm, om, t_arr)
    plus, minus = eval_fourier_G0(cm, cm.embed(x), t_arr)
    e1, e2 = cm.dimE1, cm.dimE2
    pE2, pN1 = plus[:, :e2], plus[:, e2:]
    mE1, mN2 = minus[:, :e1], minus[:, e1:]
    Fp = pE2 + np.einsum("mij,mj->mi", parts.psi @ parts.omega, pN1)
    adj = np.conj(np.swapaxes(parts.omega @ parts.phi, 1, 2))
    Fm = mE1 + np.einsum("mij,mj->mi", adj, mN2)
    if np.ndim(t) == 0:
        return Fp[0], Fm[0]
    return Fp, Fm


def eval_F_special(p, w, x, z):
    """``F x`` from the explicit special-case formulas, given values ``w`` at ``z``.

    ``F_+(z) = (w M1 - M2)(z T2 - T1)^{-1} x`` and
    ``F_-(z) = conj(z) (M1 - w^H M2)(T2 - conj(z) T1)^{-1} x``.
    """
    z = np.asarray(z, dtype=complex).reshape(-1)
    w = np.asarray(w, dtype=complex).reshape(z.size, p.dimE2, p.dimE1)
    x = np.asarray(x, dtype=complex)
    rhs = np.broadcast_to(x[:, None], (z.size, x.size, 1))
    a = np.linalg.solve(z[:, None, None] * p.T2[None] - p.T1[None], rhs)[..., 0]
    b = np.linalg.solve(p.T2[None] - np.conj(z)[:, None, None] * p.T1[None], rhs)[..., 0]
    Fp = np.einsum("mij,mj->mi", w @ p.M1[None] - p.M2[None], a)
    wh = np.conj(np.swapaxes(w, 1, 2))
    Fm = np.conj(z)[:, None] * np.einsum("mij,mj->mi", p.M1[None] - wh @ p.M2[None], b)
    return Fp, Fm


@dataclass
class SolutionReport:
    interp_residual: float
    contractivity_margin: float
    norm_equality_gap: float
    hardy_membership_residual: float
    max_singular_value: float = 0.0
    identity_residual: float = 0.0
    norm_squares: list = field(default_factory=list)
    form_values: list = field(default_factory=list)
    relative_norm_gap: float = 0.0
    extras: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def radial_limit(w, t0, step=RADIAL_STEP):
    """Radial limit of ``w`` at ``t0`` by cubic-order Richardson extrapolation."""
    f = np.asarray(w(np.array([1 - step, 1 - 2 * step, 1 - 4 * step]) * t0))
    return (8 * f[0] - 6 * f[1] + f[2]) / 3


def _interp_residual(p, cm, om, quad_n):
    kind = p.kind
    if kind == "np":
        d = p.data
        w = lft_solution(cm, om, np.asarray(d.nodes))[:, 0, 0]
        return float(np.max(np.abs(w - np.asarray(d.values)))), {}
    if kind == "sarason":
        from .problems import kernel_values
        d = p.data
        t = circle.circle_grid(quad_n)
        w = lft_solution(cm, om, t)[:, 0, 0]
        K = kernel_values(d.zeros, t)
        lhs = circle.project_plus(np.conj(w)[:, None] * K)
        rhs = K @ d.Wstar
        err = np.sqrt(np.mean(np.abs(lhs - rhs) ** 2, axis=0))
        return float(np.max(err)), {}
    if kind == "boundary":
        from .boundary import angular_derivative
        d = p.data
        fn = solution_fn(cm, om)
        lim = radial_limit(lambda z: fn(z)[:, 0, 0], d.t0)
        est = angular_derivative(lambda z: fn(z)[:, 0, 0], d.t0, d.w0, quad_n=max(quad_n, 2048))
        extras = {"w0_limit": complex(lim), "D_liminf": est.D_liminf, "D_integral": est.D_integral,
                  "converged": est.converged,
                  "angular_derivative_excess": max(0.0, est.D_liminf - d.Dbound)}
        return float(abs(lim - d.w0)), extras
    return float("nan"), {}


def identity_residual(p, cm, om, t):
    """Sup-norm residual of ``t F T2 x - F T1 x = [[I, w], [w^H, I]] [-M2 x; M1 x]`` on ``t``."""
    n = p.dimX
    parts = lft_parts(cm, om, t)
    W = circle.weight_blocks(parts.w)
    worst = 0.0
    for j in range(n):
        cols = []
        for T in (p.T2, p.T1):
            Fp, Fm = eval_F(cm, om, T[:, j], t)
            cols.append(np.concatenate([Fp, Fm], axis=1))
        lhs = t[:, None] * cols[0] - cols[1]
        rhs = np.einsum("mij,j->mi", W, np.concatenate([-p.M2[:, j], p.M1[:, j]]))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def norm_gaps(p, cm, om, quad_n, pinv_tol=PINV_TOL):
    """Quadrature ``||F x_j||^2`` in the de Branges-Rovnyak norm and Hardy residuals.

    Returns ``(norms, hardy)`` over the standard basis ``x_j`` of ``X``.
    """
    t = circle.circle_grid(quad_n)
    parts = lft_parts(cm, om, t)
    W = circle.weight_blocks(parts.w)
    norms, hardy = [], []
    for j in range(p.dimX):
        x = np.zeros(p.dimX, complex)
        x[j] = 1.0
        Fp, Fm = eval_F(cm, om, x, t)
        f = np.concatenate([Fp, Fm], axis=1)
        norms.append(circle.range_inner(W, f, f, pinv_tol).real)
        scale = np.sqrt(max(p.D[j, j].real, 1.0))
        hardy.append(circle.wrong_sign_mass(Fp, "plus", scale)
                     + circle.wrong_sign_mass(Fm, "minus", scale))
    return np.array(norms), np.array(hardy)


def verify_solution(p, cm, om, quad_n=4096, disk_points=200, pinv_tol=PINV_TOL):
    """Check the solution generated by ``om`` against the problem data."""
    if quad_n < 256:
        raise ValueError("quad_n must be at least 256")
    interp, extras = _interp_residual(p, cm, om, quad_n)
    zd = circle.disk_grid(disk_points, 0.99)
    w = lft_solution(cm, om, zd)
    smax = float(np.max(np.linalg.svd(w, compute_uv=False))) if w.size else 0.0
    norms, hardy = norm_gaps(p, cm, om, quad_n, pinv_tol)
    forms = np.real(np.diag(p.D))
    gaps = np.abs(norms - forms)
    rel = gaps / np.maximum(forms, 1e-300)
    t_id = circle.circle_grid(64)
    return SolutionReport(
        interp_residual=interp,
        contractivity_margin=max(0.0, smax - 1.0),
        norm_equality_gap=float(np.max(gaps)) if gaps.size else 0.0,
        hardy_membership_residual=float(np.max(hardy)) if hardy.size else 0.0,
        max_singular_value=smax,
        identity_residual=identity_residual(p, cm, om, t_id),
        norm_squares=[float(v) for v in norms],
        form_values=[float(v) for v in forms],
        relative_norm_gap=float(np.max(np.where(forms > 0, rel, 0.0))) if rel.size else 0.0,
        extras=extras,
        metadata={
            "normalization": dict(cm.normalization),
            "pinv_tol": pinv_tol,
            "weight_inverse": "Moore-Penrose pseudo-inverse",
            "quad_n": quad_n,
            "quadrature": "trapezoid on half-step shifted circle grid",
        },
    )

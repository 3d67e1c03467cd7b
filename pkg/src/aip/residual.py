"""Spectral function of the residual part of a coupling and boundary properties of ``S``.

For a Schur parameter ``omega`` the coupling of ``A0`` with a realization
of ``omega`` may carry a residual unitary part.  Its spectral function is
expressed through ``S`` and ``omega`` alone:

    a(z) = 1/2 [0, -omega(0); omega(0)^H, 0] + a_circ(z)
           - 1/2 mean_t (t + z)/(t - z) L(t) W(t)^+ L(t)^H

with ``a_circ = [psi_c - 1/2, omega phi_c; s psi_c, phi_c - 1/2]`` and
``L = [psi^H, omega phi; omega^H psi^H, phi]``.  The real part ``a + a^H``
vanishes identically iff the residual part is trivial.
"""
from dataclasses import dataclass

import numpy as np

from . import circle
from .colligation import eval_S
from .errors import PreconditionError
from .parametrization import PINV_TOL, lft_parts

AC_GAP_TOL = 5e-3


@dataclass
class SpectralEval:
    z: complex
    a_omega: np.ndarray
    a_circ: np.ndarray
    defect: np.ndarray


def _h(a):
    return np.conj(np.swapaxes(a, -2, -1))


def _a_circ(parts):
    n1, n2 = parts.phi_circ.shape[-1], parts.psi_circ.shape[-1]
    m = parts.z.size
    out = np.zeros((m, n2 + n1, n2 + n1), dtype=complex)
    out[:, :n2, :n2] = parts.psi_circ - 0.5 * np.eye(n2)
    out[:, :n2, n2:] = parts.omega @ parts.phi_circ
    out[:, n2:, :n2] = parts.s @ parts.psi_circ
    out[:, n2:, n2:] = parts.phi_circ - 0.5 * np.eye(n1)
    return out


def eval_a_circ(cm, om, z):
    """``[psi_c - 1/2, omega phi_c; s psi_c, phi_c - 1/2]`` on ``N2 + N1`` at ``z``."""
    zz = np.asarray(z, dtype=complex).reshape(-1)
    if np.any(np.abs(zz) >= 1):
        raise ValueError("z must lie in the open unit disk")
    out = _a_circ(lft_parts(cm, om, zz))
    return out[0] if np.ndim(z) == 0 else out


def _boundary_kernel(cm, om, quad_n, pinv_tol):
    """Grid ``t`` and ``L(t) W(t)^+ L(t)^H`` on it."""
    t = circle.circle_grid(quad_n)
    parts = lft_parts(cm, om, t)
    top = np.concatenate([_h(parts.psi), parts.omega @ parts.phi], axis=2)
    bot = np.concatenate([_h(parts.omega) @ _h(parts.psi), parts.phi], axis=2)
    L = np.concatenate([top, bot], axis=1)
    Wp = np.linalg.pinv(circle.weight_blocks(parts.w), rcond=pinv_tol, hermitian=True)
    return t, L @ Wp @ _h(L)


def spectral_eval(cm, om, z, quad_n=4096, pinv_tol=PINV_TOL):
    """:class:`SpectralEval` at each point of ``z`` (list, or single value for scalar ``z``)."""
    zz = np.asarray(z, dtype=complex).reshape(-1)
    if np.any(np.abs(zz) >= 1):
        raise ValueError("z must lie in the open unit disk")
    ac = _a_circ(lft_parts(cm, om, zz))
    t, K = _boundary_kernel(cm, om, quad_n, pinv_tol)
    o0 = om(0.0)
    n1, n2 = cm.dimN1, cm.dimN2
    skew = np.zeros((n2 + n1, n2 + n1), dtype=complex)
    skew[:n2, n2:] = -o0
    skew[n2:, :n2] = o0.conj().T
    out = []
    for k, zk in enumerate(zz):
        herg = (t + zk) / (t - zk)
        integral = np.mean(herg[:, None, None] * K, axis=0)
        a = 0.5 * skew + ac[k] - 0.5 * integral
        pk = circle.poisson_kernel(zk, t)
        defect = ac[k] + _h(ac[k]) - np.mean(pk[:, None, None] * K, axis=0)
        out.append(SpectralEval(complex(zk), a, ac[k], (defect + _h(defect)) / 2))
    return out[0] if np.ndim(z) == 0 else out


def eval_a_omega(cm, om, z, quad_n=4096):
    ev = spectral_eval(cm, om, z, quad_n)
    return ev.a_omega if np.ndim(z) == 0 else np.array([e.a_omega for e in ev])


def eval_defect(cm, om, z, quad_n=4096, pinv_tol=PINV_TOL):
    """Real part ``a + a^H`` of the residual spectral function at ``z``."""
    ev = spectral_eval(cm, om, z, quad_n, pinv_tol)
    return ev.defect if np.ndim(z) == 0 else np.array([e.defect for e in ev])


def _split(cm, S):
    return cm.blocks(S)


def check_property_2prime(cm, t_samples):
    """Max Frobenius gap of ``[[1, s^H], [s, 1]] = diag(s2^H, s1) W0^+ diag(s2, s1^H)`` on ``t_samples``."""
    t = np.asarray(t_samples, dtype=complex).reshape(-1)
    n1, n2 = cm.dimN1, cm.dimN2
    if n1 + n2 == 0:
        return 0.0
    s0, s1, s2, s = _split(cm, eval_S(cm, t))
    m = t.size
    e1, e2 = cm.dimE1, cm.dimE2
    lhs = np.zeros((m, n2 + n1, n2 + n1), dtype=complex)
    lhs[:, :n2, :n2] = np.eye(n2)
    lhs[:, n2:, n2:] = np.eye(n1)
    lhs[:, :n2, n2:] = _h(s)
    lhs[:, n2:, :n2] = s
    L = np.zeros((m, n2 + n1, e2 + e1), dtype=complex)
    L[:, :n2, :e2] = _h(s2)
    L[:, n2:, e2:] = s1
    W0p = np.linalg.pinv(circle.weight_blocks(s0), rcond=PINV_TOL, hermitian=True)
    rhs = L @ W0p @ _h(L)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=(1, 2))))


def _rank(M, tol):
    if M.size == 0:
        return np.zeros(M.shape[0], dtype=int)
    sv = np.linalg.svd(M, compute_uv=False)
    return np.sum(sv > tol, axis=1)


def property_2doubleprime_ranks(cm, t_samples, tol=1e-6):
    """Per-sample ranks ``(rank(I - S^H S), rank(I - s0^H s0) - dim N1)``."""
    t = np.asarray(t_samples, dtype=complex).reshape(-1)
    S = eval_S(cm, t)
    s0 = _split(cm, S)[0]
    lhs = _rank(np.eye(S.shape[2])[None] - _h(S) @ S, tol)
    rhs = _rank(np.eye(cm.dimE1)[None] - _h(s0) @ s0, tol) - cm.dimN1
    return lhs, rhs


def check_property_2doubleprime(cm, t_samples, tol=1e-6):
    lhs, rhs = property_2doubleprime_ranks(cm, t_samples, tol)
    return bool(np.all(lhs == rhs))


def naak_defect(cm, t_samples):
    """``max_t ||I - S(t)^H S(t)||_2``; zero iff ``S`` is inner on the samples."""
    t = np.asarray(t_samples, dtype=complex).reshape(-1)
    S = eval_S(cm, t)
    if S.shape[2] == 0:
        return 0.0
    gap = np.eye(S.shape[2])[None] - _h(S) @ S
    return float(np.max(np.linalg.norm(gap, 2, axis=(1, 2))))


def check_property_1prime(cm, om, quad_n=4096, test_points=(0.0, 0.3, -0.25 + 0.25j)):
    """Relative singular-mass gaps of the Herglotz functions built from ``omega s`` and ``s omega``.

    For ``f = (1 + u)/(1 - u)`` the Poisson integral of ``Re f`` on the
    circle recovers ``Re f(z)`` exactly when the representing measure is
    absolutely continuous; the missing fraction is the singular mass.
    Returns the worst relative gap over ``test_points`` for
    ``u = omega s`` and for ``u = s omega``.
    """
    if cm.dimN1 != 1 or cm.dimN2 != 1:
        raise PreconditionError("property 1' check needs one-dimensional N1 and N2")
    z = np.asarray(test_points, dtype=complex)
    t = circle.circle_grid(quad_n)

    def herglotz(pts, order):
        pts = np.asarray(pts, dtype=complex)
        s = _split(cm, eval_S(cm, pts))[3][:, 0, 0]
        o = om(pts)[:, 0, 0]
        u = o * s if order == 2 else s * o
        with np.errstate(divide="ignore", invalid="ignore"):
            return (1 + u) / (1 - u)

    gaps = []
    for order in (2, 1):
        inside = herglotz(z, order).real
        bd = herglotz(t, order).real
        bd = np.where(np.isfinite(bd), bd, 0.0)
        poisson = np.array([np.mean(circle.poisson_kernel(zk, t) * bd) for zk in z])
        gaps.append(float(np.max(np.abs(inside - poisson) / np.abs(inside))))
    return tuple(gaps)

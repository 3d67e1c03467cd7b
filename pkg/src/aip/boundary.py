"""Caratheodory-Julia boundary quantities.

Two independent estimators of the angular derivative ``D_{w,t0}`` are
provided: the radial quotient ``(1 - |w(r t0)|^2) / (1 - r^2)`` and the
boundary integral of

    |w(t) - w0|^2 / |t - t0|^2 + (1 - |w(t)|^2) / |t - t0|^2

over the circle.  Solution evaluators are vectorized callables returning
one complex value per input point.
"""
from dataclasses import dataclass

import numpy as np

from .colligation import eval_S
from .errors import PreconditionError

DEFAULT_RADII = tuple(1.0 - 10.0 ** -k for k in range(1, 7))
ARC = 1e-3
LIMIT_TOL = 1e-6
QUOTIENT_BOUND = 1e6
ROUNDING_FLOOR = 8 * np.finfo(float).eps


@dataclass
class AngularDerivativeEstimate:
    D_liminf: float
    D_integral: float
    w0_limit: complex
    converged: bool


def _scalar(w, z):
    return np.asarray(w(np.asarray(z, dtype=complex)), dtype=complex).reshape(-1)


def caratheodory_quotient(w, t0, radii=DEFAULT_RADII):
    """Radial Caratheodory quotients at ``t0``.

    Returns ``(D, converged)``: the quotient at the largest radius and
    whether the last two quotients agree to 1e-3 relative.  Numerators
    ``1 - |w|^2`` within rounding of zero count as zero, so a constant
    unimodular ``w`` gives ``D = 0`` exactly.
    """
    r = np.asarray(radii, dtype=float)
    vals = _scalar(w, r * t0)
    num = 1.0 - np.abs(vals) ** 2
    num[np.abs(num) <= ROUNDING_FLOOR] = 0.0
    q = num / (1.0 - r ** 2)
    last = float(q[-1])
    if r.size < 2:
        return last, False
    conv = abs(q[-1] - q[-2]) <= max(1e-3 * abs(q[-1]), 1e-8)
    return last, bool(conv)


def _arc_integral(f, eps, order):
    """``(1/2pi) * integral of f(theta)`` over ``eps <= |theta| <= pi`` on graded panels."""
    x, wts = np.polynomial.legendre.leggauss(order)
    edges = [eps]
    while edges[-1] * 2 < np.pi:
        edges.append(edges[-1] * 2)
    edges.append(np.pi)
    a = np.array(edges[:-1])
    b = np.array(edges[1:])
    theta = (0.5 * (b - a)[:, None] * x[None, :] + 0.5 * (b + a)[:, None]).ravel()
    weight = (0.5 * (b - a)[:, None] * wts[None, :]).ravel()
    both = np.concatenate([theta, -theta])
    vals = f(both)
    return float(np.sum(np.concatenate([weight, weight]) * vals) / (2 * np.pi))


def caratheodory_integral(w, t0, w0, quad_n=4096, arc=ARC):
    """Boundary-integral estimate of ``D_{w,t0}``.

    The arc ``|arg(t / t0)| < arc`` is excluded and the estimate is
    repeated with the arc halved twice; the tail is extrapolated
    geometrically.  Returns ``inf`` when the increments do not shrink,
    i.e. the integrand is not integrable at ``t0``.
    """
    order = int(np.clip(quad_n // 64, 16, 64))

    def integrand(theta):
        t = t0 * np.exp(1j * theta)
        wt = _scalar(w, t)
        d2 = np.abs(t - t0) ** 2
        return (np.abs(wt - w0) ** 2 + 1.0 - np.abs(wt) ** 2) / d2

    vals = [_arc_integral(integrand, arc / 2 ** k, order) for k in range(3)]
    d1 = vals[1] - vals[0]
    d2 = vals[2] - vals[1]
    if d1 > 1e-9 * (1 + abs(vals[2])) and d2 >= 0.75 * d1:
        return float("inf")
    return vals[2] + d2


def angular_derivative(w, t0, w0, quad_n=4096, radii=DEFAULT_RADII):
    D, conv = caratheodory_quotient(w, t0, radii)
    f = _scalar(w, np.array([1 - 1e-4, 1 - 2e-4, 1 - 4e-4]) * t0)
    return AngularDerivativeEstimate(
        D_liminf=max(D, 0.0),
        D_integral=caratheodory_integral(w, t0, w0, quad_n),
        w0_limit=complex((8 * f[0] - 6 * f[1] + f[2]) / 3),
        converged=conv,
    )


def boundary_residual_details(cm, om, t0):
    """Quantities behind :func:`boundary_residual_detect`."""
    if cm.dimN1 != 1 or cm.dimN2 != 1:
        raise PreconditionError("residual detection needs one-dimensional N1 and N2")
    s_t0 = complex(cm.blocks(eval_S(cm, t0))[3][0, 0])
    if abs(abs(s_t0) - 1.0) > 1e-6:
        raise PreconditionError(f"|s(t0)| = {abs(s_t0):.12g}, expected 1")
    r = np.array([1 - 1e-4, 1 - 2e-4])
    o = om(r * t0)[:, 0, 0]
    limit = 2 * o[0] - o[1]
    quot = (1.0 - np.abs(o) ** 2) / (1.0 - r ** 2)
    return {
        "s_t0": s_t0,
        "omega_limit": complex(limit),
        "limit_gap": float(abs(limit - np.conj(s_t0))),
        "quotients": [float(q) for q in quot],
    }


def boundary_residual_detect(cm, om, t0):
    """True when the coupling with ``om`` has a nontrivial residual part.

    That happens exactly when ``omega`` tends to ``conj(s(t0))`` at ``t0``
    with a bounded Caratheodory quotient.
    """
    d = boundary_residual_details(cm, om, t0)
    return d["limit_gap"] < LIMIT_TOL and max(abs(q) for q in d["quotients"]) < QUOTIENT_BOUND

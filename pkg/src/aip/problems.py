"""Finite-dimensional data of the abstract interpolation problem.

An :class:`AipProblem` holds the Gram matrix ``D`` of the form ``D(x, y) =
y^H D x`` on ``X = C^n``, the operators ``T1``, ``T2`` on ``X`` and the maps
``M1: X -> E1``, ``M2: X -> E2``, tied together by

    T2^H D T2 - T1^H D T1 = M1^H M1 - M2^H M2.

Three concrete problems are provided: Nevanlinna-Pick interpolation,
the scalar Sarason problem for a finite Blaschke product, and the
boundary (Caratheodory-Julia) interpolation problem.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotContractive, NotPsd
from .linalg_core import as_cmatrix, hermitian_psd_decompose

IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class AipProblem:
    D: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    special_case: bool = True
    kind: str = "raw"
    # builder inputs, kept for verification and reporting
    data: object = field(default=None, compare=False)

    def __post_init__(self):
        D = as_cmatrix(self.D, name="D")
        n = D.shape[0]
        object.__setattr__(self, "D", as_cmatrix(D, n, n, "D"))
        object.__setattr__(self, "T1", as_cmatrix(self.T1, n, n, "T1"))
        object.__setattr__(self, "T2", as_cmatrix(self.T2, n, n, "T2"))
        object.__setattr__(self, "M1", as_cmatrix(self.M1, cols=n, name="M1"))
        object.__setattr__(self, "M2", as_cmatrix(self.M2, cols=n, name="M2"))

    @property
    def dimX(self):
        return self.D.shape[0]

    @property
    def dimE1(self):
        return self.M1.shape[0]

    @property
    def dimE2(self):
        return self.M2.shape[0]

    def form(self, x, y=None):
        """``D(x, y) = y^H D x``."""
        x = np.asarray(x, dtype=complex)
        y = x if y is None else np.asarray(y, dtype=complex)
        return complex(y.conj() @ self.D @ x)


def check_fundamental_identity(p):
    """Frobenius norm of ``T2^H D T2 - T1^H D T1 - M1^H M1 + M2^H M2``."""
    n = p.dimX
    for name in ("T1", "T2"):
        if getattr(p, name).shape != (n, n):
            raise DimensionMismatch(f"{name} must be {n}x{n}")
    lhs = p.T2.conj().T @ p.D @ p.T2 - p.T1.conj().T @ p.D @ p.T1
    rhs = p.M1.conj().T @ p.M1 - p.M2.conj().T @ p.M2
    return float(np.linalg.norm(lhs - rhs))


def validate_problem(p, tol=IDENTITY_TOL):
    """Raise unless ``D`` is Hermitian PSD and the fundamental identity holds."""
    hermitian_psd_decompose(p.D, tol)
    res = check_fundamental_identity(p)
    scale = max(1.0, np.linalg.norm(p.D))
    if res > tol * scale:
        raise ValueError(f"fundamental identity violated: residual {res:.3g}")
    return res


# -- Nevanlinna-Pick ---------------------------------------------------------

@dataclass(frozen=True)
class NpData:
    nodes: tuple
    values: tuple

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        values = tuple(complex(w) for w in self.values)
        if len(nodes) != len(values) or not nodes:
            raise ValueError("nodes and values must be non-empty and of equal length")
        if any(abs(z) >= 1 for z in nodes):
            raise ValueError("nodes must lie in the open unit disk")
        if len(set(nodes)) != len(nodes):
            raise ValueError("nodes must be pairwise distinct")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)


def pick_matrix(nodes, values):
    z = np.asarray(nodes, dtype=complex)
    w = np.asarray(values, dtype=complex)
    return (1 - np.conj(w)[:, None] * w[None, :]) / (1 - np.conj(z)[:, None] * z[None, :])


def build_np(d, tol=IDENTITY_TOL):
    """AIP data for the Nevanlinna-Pick problem ``w(z_k) = w_k``.

    Raises
    ------
    NotPsd
        If the Pick matrix is not positive semidefinite (no solution).
    """
    D = pick_matrix(d.nodes, d.values)
    try:
        hermitian_psd_decompose(D, tol)
    except NotPsd as exc:
        raise NotPsd(f"Pick matrix is not PSD (eigenvalue {exc.eigenvalue:.6g}); "
                     "the interpolation problem has no Schur class solution",
                     eigenvalue=exc.eigenvalue) from None
    n = len(d.nodes)
    return AipProblem(
        D=D,
        T1=np.diag(np.asarray(d.nodes, dtype=complex)),
        T2=np.eye(n, dtype=complex),
        M1=np.ones((1, n), dtype=complex),
        M2=np.asarray(d.values, dtype=complex).reshape(1, n),
        special_case=True,
        kind="np",
        data=d,
    )


# -- boundary interpolation --------------------------------------------------

@dataclass(frozen=True)
class BoundaryData:
    t0: complex
    w0: complex
    Dbound: float

    def __post_init__(self):
        object.__setattr__(self, "t0", complex(self.t0))
        object.__setattr__(self, "w0", complex(self.w0))
        object.__setattr__(self, "Dbound", float(self.Dbound))
        if abs(abs(self.t0) - 1) > 1e-12 or abs(abs(self.w0) - 1) > 1e-12:
            raise ValueError("t0 and w0 must be unimodular")
        if self.Dbound < 0:
            raise ValueError("Dbound must be nonnegative")


def build_boundary(d):
    return AipProblem(
        D=[[d.Dbound]],
        T1=[[d.t0]],
        T2=[[1.0]],
        M1=np.ones((1, 1)),
        M2=[[d.w0]],
        special_case=True,
        kind="boundary",
        data=d,
    )


# -- Sarason -----------------------------------------------------------------

@dataclass(frozen=True)
class SarasonData:
    """Scalar Sarason data on ``K_theta`` for a finite Blaschke product.

    ``K_theta`` is coordinatized by the kernel functions
    ``k_j(t) = 1 / (1 - conj(z_j) t)`` at the (distinct) zeros of theta;
    ``Wstar`` is the matrix of ``W*`` in those coordinates.
    """

    blaschke_zeros: tuple
    Wstar: np.ndarray

    def __post_init__(self):
        zeros = tuple(complex(z) for z in self.blaschke_zeros)
        if not zeros or any(abs(z) >= 1 for z in zeros):
            raise ValueError("Blaschke zeros must lie in the open unit disk")
        if len(set(zeros)) != len(zeros):
            raise ValueError("only simple Blaschke zeros are supported")
        object.__setattr__(self, "blaschke_zeros", zeros)
        object.__setattr__(self, "Wstar", as_cmatrix(self.Wstar, len(zeros), len(zeros), "Wstar"))

    @property
    def zeros(self):
        return np.asarray(self.blaschke_zeros, dtype=complex)


def sarason_from_np(d):
    """Sarason data whose solutions are those of the Pick problem ``d``.

    ``W*`` multiplies each kernel ``k_j`` by ``conj(w_j)``.
    """
    return SarasonData(d.nodes, np.diag(np.conj(np.asarray(d.values, dtype=complex))))


def kernel_gram(zeros):
    """``G[a, b] = <k_b, k_a> = 1 / (1 - z_a conj(z_b))`` so that ``<x, y> = y^H G x``."""
    z = np.asarray(zeros, dtype=complex)
    return 1.0 / (1.0 - z[:, None] * np.conj(z)[None, :])


def kernel_values(zeros, t):
    """Kernel functions at points ``t``: array of shape (len(t), n)."""
    z = np.asarray(zeros, dtype=complex)
    t = np.asarray(t, dtype=complex).reshape(-1)
    return 1.0 / (1.0 - t[:, None] * np.conj(z)[None, :])


def blaschke(zeros, t):
    """Finite Blaschke product with the given zeros, normalized by ``theta(0) >= 0`` phases.

    Each factor is ``(z - a) / (1 - conj(a) z)`` times ``-|a|/a`` (1 for ``a = 0``).
    """
    t = np.asarray(t, dtype=complex)
    out = np.ones_like(t)
    for a in np.asarray(zeros, dtype=complex):
        c = 1.0 if a == 0 else -abs(a) / a
        out = out * c * (t - a) / (1 - np.conj(a) * t)
    return out


def build_sarason(d, tol=1e-9):
    """AIP data ``X = K_theta``, ``T1 = I``, ``T2 = T_theta^*`` for the Sarason problem.

    ``T_theta^* k_j = conj(z_j) k_j``, ``M1 x = (W* x)(0)``, ``M2 x = x(0)``
    and ``D = G - W^H G W`` where ``W`` is the coordinate matrix of ``W*``.

    Raises
    ------
    NotContractive
        If ``W*`` is not a contraction in the ``K_theta`` norm, or it does
        not commute with ``T_theta^*``.
    """
    z = d.zeros
    n = z.size
    G = kernel_gram(z)
    Wm = d.Wstar
    T2 = np.diag(np.conj(z))
    if np.max(np.abs(Wm @ T2 - T2 @ Wm)) > tol:
        raise NotContractive("W* does not commute with the backward shift on K_theta")
    D = G - Wm.conj().T @ G @ Wm
    D = (D + D.conj().T) / 2
    try:
        hermitian_psd_decompose(D, tol)
    except NotPsd as exc:
        raise NotContractive(f"W* is not contractive on K_theta (eigenvalue {exc.eigenvalue:.6g})") from None
    ones = np.ones((1, n), dtype=complex)
    return AipProblem(
        D=D,
        T1=np.eye(n, dtype=complex),
        T2=T2,
        M1=ones @ Wm,
        M2=ones,
        special_case=True,
        kind="sarason",
        data=d,
    )

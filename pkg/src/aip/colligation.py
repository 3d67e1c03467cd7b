"""Unitary colligations built from AIP data and their characteristic functions.

The construction follows the data through three stages:

1. the Gram space ``H0`` (``X`` modulo the null vectors of ``D``),
2. the isometry ``V: dV -> DeltaV`` with ``dV`` spanned by ``([T1 x], M1 x)``
   and ``DeltaV`` by ``([T2 x], M2 x)``,
3. the universal colligation ``A0: H0+E1+N2 -> H0+E2+N1`` acting as ``V``
   on ``dV``, as ``u1`` on the complement of ``dV`` and as ``u2^*`` on
   ``N2``.

Its characteristic function is the coefficient matrix
``S = [[s0, s2], [s1, s]]`` from ``E1+N2`` to ``E2+N1``.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import DimensionMismatch, IllDefined, SingularResolvent
from .linalg_core import (
    DEFAULT_TOL,
    Subspace,
    as_cmatrix,
    complete_isometry_to_unitary,
    hermitian_psd_decompose,
    range_subspace,
    unitarity_defect,
)

SINGULAR_TOL = 1e-8


def _points(z):
    z = np.asarray(z, dtype=complex)
    return z.reshape(-1), z.ndim == 0


def _screen(eigs, z):
    """Raise if ``I - z A`` is singular to within ``SINGULAR_TOL`` at some point."""
    if eigs.size == 0:
        return
    gap = np.abs(1.0 - z[:, None] * eigs[None, :])
    i, j = np.unravel_index(np.argmin(gap), gap.shape)
    if gap[i, j] <= SINGULAR_TOL:
        raise SingularResolvent(
            f"I - zA is singular at z={z[i]:.6g} (eigenvalue {eigs[j]:.6g})",
            point=complex(z[i]), eigenvalue=complex(eigs[j]))


@dataclass(frozen=True)
class UnitaryColligation:
    """Block unitary ``[[A, B], [C, Dblk]]`` from ``H+In`` onto ``H+Out``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    Dblk: np.ndarray
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        A = A.reshape(0, 0) if A.size == 0 else as_cmatrix(A, name="A")
        h = A.shape[0]
        Dblk = as_cmatrix(self.Dblk, name="Dblk")
        out, inp = Dblk.shape
        B = np.asarray(self.B, dtype=complex).reshape(h, inp)
        C = np.asarray(self.C, dtype=complex).reshape(out, h)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "Dblk", Dblk)
        object.__setattr__(self, "_eigs", np.linalg.eigvals(A) if h else np.zeros(0, complex))
        if self.check and self.unitarity_defect() > 1e-10:
            raise ValueError(f"colligation is not unitary (defect {self.unitarity_defect():.3g})")

    @property
    def dimH(self):
        return self.A.shape[0]

    @property
    def dimIn(self):
        return self.Dblk.shape[1]

    @property
    def dimOut(self):
        return self.Dblk.shape[0]

    @property
    def eigenvalues(self):
        return self._eigs

    def full(self):
        return np.block([[self.A, self.B], [self.C, self.Dblk]])

    def unitarity_defect(self):
        return unitarity_defect(self.full())

    def __call__(self, z):
        return eval_char_fn(self, z)


def eval_char_fn(col, z):
    """Characteristic function ``Dblk + z C (I - z A)^{-1} B``.

    ``z`` may be a scalar (returns one matrix) or an array of points
    (returns a stack with the point index first).
    """
    pts, scalar = _points(z)
    if col.dimH == 0:
        out = np.broadcast_to(col.Dblk, (pts.size,) + col.Dblk.shape).copy()
    else:
        _screen(col.eigenvalues, pts)
        out = kernels.transfer_eval(col.A, col.B, col.C, col.Dblk, pts)
    return out[0] if scalar else out


@dataclass(frozen=True)
class GramSpace:
    """Coordinates of ``H0``: ``embed`` maps ``x`` to ``[x]`` with ``embed^H embed = D``."""

    embed: np.ndarray

    @property
    def dimH0(self):
        return self.embed.shape[0]


def build_gram_space(p, tol=DEFAULT_TOL):
    r, L = hermitian_psd_decompose(p.D, tol)
    return GramSpace(embed=L.conj().T)


@dataclass(frozen=True)
class Isometry:
    V: np.ndarray          # ambient matrix (H0+E2) x (H0+E1)
    dV: Subspace
    DeltaV: Subspace
    generators_in: np.ndarray   # columns ([T1 x], M1 x) over the basis of X
    generators_out: np.ndarray  # columns ([T2 x], M2 x)


def build_isometry(p, g, tol=DEFAULT_TOL):
    """The isometry defined by the data on generator pairs.

    The map is fitted by least squares on the generator matrices, which
    may be rank deficient; a residual above 1e-8 means the data are
    inconsistent.
    """
    E = g.embed
    gin = np.vstack([E @ p.T1, p.M1])
    gout = np.vstack([E @ p.T2, p.M2])
    scale = max(1.0, np.linalg.norm(gin, 2), np.linalg.norm(gout, 2))
    dV = range_subspace(gin, tol)
    R = dV.basis.conj().T @ gin
    Y = gout @ np.linalg.pinv(R, rcond=tol) if dV.dim else np.zeros((gout.shape[0], 0), complex)
    if np.linalg.norm(Y @ R - gout, 2) > 1e-8 * scale:
        raise IllDefined("generator images are not a function of the generators")
    if dV.dim and np.max(np.abs(Y.conj().T @ Y - np.eye(dV.dim))) > 1e-8:
        raise IllDefined("fitted map is not isometric; the fundamental identity fails")
    if dV.dim:
        # nearest isometry (polar factor) removes rounding drift
        u, _, vh = np.linalg.svd(Y, full_matrices=False)
        Y = u @ vh
    DeltaV = Subspace(gout.shape[0], Y)
    return Isometry(V=Y @ dV.basis.conj().T, dV=dV, DeltaV=DeltaV,
                    generators_in=gin, generators_out=gout)


@dataclass(frozen=True)
class CoefficientMatrix:
    """The universal colligation ``A0`` and its characteristic function ``S``."""

    colligation: UnitaryColligation
    dimE1: int
    dimE2: int
    dimN1: int
    dimN2: int
    problem: object = field(default=None, compare=False)
    gram: GramSpace = field(default=None, compare=False)
    isometry: Isometry = field(default=None, compare=False)
    normalization: dict = field(default_factory=dict, compare=False)

    @property
    def dimH0(self):
        return self.colligation.dimH

    def __call__(self, z):
        return eval_S(self, z)

    def blocks(self, S):
        """Split ``S`` values (single or stacked) into ``s0, s1, s2, s``."""
        e1, e2 = self.dimE1, self.dimE2
        return (S[..., :e2, :e1], S[..., e2:, :e1], S[..., :e2, e1:], S[..., e2:, e1:])

    def embed(self, x):
        return self.gram.embed @ np.asarray(x, dtype=complex)

    def rescaled(self, alpha, beta):
        """Multiply the ``N1`` output coordinates by ``alpha`` and ``N2`` inputs by ``beta``.

        ``alpha``, ``beta`` are unimodular; the result is the coefficient
        matrix for the normalization ``u1 -> alpha u1``, ``u2 -> conj(beta) u2``.
        """
        col = self.colligation
        e1, e2 = self.dimE1, self.dimE2
        lo = np.concatenate([np.ones(e2), np.broadcast_to(alpha, (self.dimN1,))]).astype(complex)
        ri = np.concatenate([np.ones(e1), np.broadcast_to(beta, (self.dimN2,))]).astype(complex)
        new = UnitaryColligation(col.A, col.B * ri[None, :], lo[:, None] * col.C,
                                 lo[:, None] * col.Dblk * ri[None, :])
        norm = dict(self.normalization)
        norm["u1_phase"] = complex(np.broadcast_to(alpha, (1,))[0]) if self.dimN1 else 1.0
        norm["u2_phase"] = complex(np.conj(np.broadcast_to(beta, (1,))[0])) if self.dimN2 else 1.0
        return replace(self, colligation=new, normalization=norm)


def build_universal_colligation(p, g=None, tol=DEFAULT_TOL):
    """Build ``A0`` and wrap it as a :class:`CoefficientMatrix`.

    Complement bases of ``dV`` and ``DeltaV`` come from
    :func:`orthonormal_complement`, so ``u1`` and ``u2`` are the identity
    in those coordinates.  Zero-dimensional ``N1``/``N2`` are allowed.
    """
    if g is None:
        g = build_gram_space(p, tol)
    iso = build_isometry(p, g, tol)
    U = complete_isometry_to_unitary(iso.V, iso.dV, iso.DeltaV)
    r = g.dimH0
    n1 = iso.dV.ambient_dim - iso.dV.dim
    n2 = iso.DeltaV.ambient_dim - iso.DeltaV.dim
    col = UnitaryColligation(U[:r, :r], U[:r, r:], U[r:, :r], U[r:, r:])
    cm = CoefficientMatrix(col, p.dimE1, p.dimE2, n1, n2, problem=p, gram=g, isometry=iso,
                           normalization={"u1": "identity on pivoted complement basis of dV",
                                          "u2": "identity on pivoted complement basis of DeltaV",
                                          "u1_phase": 1.0, "u2_phase": 1.0})
    s_at_0 = cm.blocks(col.Dblk)[3]
    if s_at_0.size and np.max(np.abs(s_at_0)) > 1e-10:
        raise IllDefined("s(0) != 0; universal colligation is malformed")
    return cm


def build_coefficient_matrix(p, tol=DEFAULT_TOL):
    return build_universal_colligation(p, build_gram_space(p, tol), tol)


def eval_S(cm, z):
    """``S(z) = D0 + z C0 (I - z A0)^{-1} B0``; scalar or batched ``z``."""
    return eval_char_fn(cm.colligation, z)


def eval_fourier_G0(cm, h0, z):
    """Fourier representation of ``h0`` (H0 coordinates) at ``z``.

    Returns ``(plus, minus)`` with ``plus = C0 (I - z A0)^{-1} h0`` in
    ``E2+N1`` and ``minus = conj(z) B0^H (I - conj(z) A0^H)^{-1} h0`` in
    ``E1+N2``.  ``h0`` may be a vector or a matrix of column vectors; for
    array ``z`` the point index comes first.
    """
    col = cm.colligation
    h = np.asarray(h0, dtype=complex)
    vec = h.ndim == 1
    h = h.reshape(col.dimH, 1 if vec else h.shape[-1])
    pts, scalar = _points(z)
    k = h.shape[1]
    if col.dimH == 0:
        plus = np.zeros((pts.size, col.dimOut, k), complex)
        minus = np.zeros((pts.size, col.dimIn, k), complex)
    else:
        _screen(col.eigenvalues, pts)
        xp = kernels.resolvent_solve(col.A, h, pts)
        xm = kernels.resolvent_solve(col.A.conj().T, h, pts.conj())
        plus = col.C[None] @ xp
        minus = pts.conj()[:, None, None] * (col.B.conj().T[None] @ xm)
    if vec:
        plus, minus = plus[..., 0], minus[..., 0]
    if scalar:
        plus, minus = plus[0], minus[0]
    return plus, minus


def restriction_residual(cm):
    """``max ||A0 g - V g||`` over the generators of ``dV`` (should vanish)."""
    iso = cm.isometry
    U = cm.colligation.full()
    gin = np.vstack([iso.generators_in, np.zeros((cm.dimN2, iso.generators_in.shape[1]))])
    out = U @ gin
    expect = np.vstack([iso.generators_out, np.zeros((cm.dimN1, iso.generators_out.shape[1]))])
    if out.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(out - expect, axis=0)))


def check_dims(cm):
    col = cm.colligation
    if col.dimIn != cm.dimE1 + cm.dimN2 or col.dimOut != cm.dimE2 + cm.dimN1:
        raise DimensionMismatch("coefficient matrix dimensions are inconsistent")

"""Dense complex linear algebra used throughout the package.

All matrices are ``numpy.ndarray`` objects of dtype ``complex128``.  The
routines here fix every arbitrary choice (eigenvector phases, basis order,
complement bases) so that the coefficient matrix built downstream is
bitwise reproducible on a given machine.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotIsometric, NotPsd

DEFAULT_TOL = 1e-10


def as_cmatrix(a, rows=None, cols=None, name="matrix"):
    """Coerce ``a`` to a finite 2-D complex array, optionally checking its shape."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(1, -1) if rows == 1 else m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch(f"{name} has {m.shape[0]} rows, expected {rows}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatch(f"{name} has {m.shape[1]} columns, expected {cols}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``C^ambient_dim`` given by an orthonormal basis (columns)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(self.ambient_dim, -1)
        object.__setattr__(self, "basis", b)
        gram = b.conj().T @ b
        if gram.size and np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-10:
            raise ValueError("Subspace basis is not orthonormal")

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.conj().T


def _fix_phase(v):
    """Rotate each column so its largest-magnitude entry is real positive."""
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    piv = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(piv) / piv)[None, :]


def hermitian_psd_decompose(G, tol=DEFAULT_TOL):
    """Factor a Hermitian PSD matrix as ``G = L L^H``.

    Parameters
    ----------
    G : array_like
        Square Hermitian matrix.
    tol : float
        Relative tolerance.  Eigenvalues above ``tol * ||G||`` count
        towards the rank; eigenvalues below ``-tol * ||G||`` are an error.

    Returns
    -------
    rank : int
    factor : ndarray, shape (n, rank)
        Columns are eigenvectors scaled by the square roots of their
        eigenvalues, in descending eigenvalue order.  Exact ties are broken
        by the row index of the eigenvector's largest entry.
    """
    G = as_cmatrix(G, name="G")
    n = G.shape[0]
    if G.shape[1] != n:
        raise DimensionMismatch("G must be square")
    scale = np.linalg.norm(G, 2) if n else 0.0
    if n == 0 or scale == 0.0:
        return 0, np.zeros((n, 0), dtype=complex)
    if np.linalg.norm(G - G.conj().T, 2) > tol * scale:
        raise NotHermitian("G is not Hermitian within tolerance")
    lam, vec = np.linalg.eigh((G + G.conj().T) / 2)
    if lam[0] < -tol * scale:
        raise NotPsd(f"G has negative eigenvalue {lam[0]:.6g}", eigenvalue=float(lam[0]))
    vec = _fix_phase(vec)
    lead = np.argmax(np.abs(vec), axis=0)
    order = sorted(range(n), key=lambda i: (-lam[i], lead[i]))
    keep = [i for i in order if lam[i] > tol * scale]
    factor = vec[:, keep] * np.sqrt(lam[keep])[None, :]
    return len(keep), factor


def orthonormal_complement(S):
    """Orthonormal basis of the orthogonal complement of ``S``.

    Greedy column-pivoted Gram-Schmidt on the identity: at each step the
    standard basis vector with the largest residual (first index on ties)
    is normalized and removed from the rest.
    """
    n = S.ambient_dim
    k = n - S.dim
    R = np.eye(n, dtype=complex) - S.projector()
    cols = []
    for _ in range(k):
        norms = np.linalg.norm(R, axis=0)
        j = int(np.argmax(norms))
        q = R[:, j] / norms[j]
        # reorthogonalize against what we already hold
        for _ in range(2):
            if cols:
                Q = np.column_stack(cols)
                q = q - Q @ (Q.conj().T @ q)
            q = q - S.basis @ (S.basis.conj().T @ q)
            q = q / np.linalg.norm(q)
        cols.append(q)
        R = R - np.outer(q, q.conj() @ R)
        R[:, j] = 0.0
    basis = np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)
    return Subspace(n, basis)


def range_subspace(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the column space of ``M`` via the SVD."""
    M = as_cmatrix(M)
    n = M.shape[0]
    if M.size == 0:
        return Subspace(n, np.zeros((n, 0), dtype=complex))
    u, sv, _ = np.linalg.svd(M)
    r = int(np.sum(sv > tol * max(sv[0], 1.0))) if sv.size else 0
    return Subspace(n, _fix_phase(u[:, :r]))


def complete_isometry_to_unitary(V, dom, ran, u1=None, u2=None, tol=1e-8):
    """Extend an isometry ``V: dom -> ran`` to a unitary colligation.

    The result acts on ``dom.ambient (+) N2`` and maps into
    ``ran.ambient (+) N1``, where ``N1`` and ``N2`` are coordinate copies
    of the complements of ``dom`` and ``ran``::

        [ V P_dom     Pc_ran u2^H ]
        [ u1 Pc_dom^H      0      ]

    Parameters
    ----------
    V : array_like, shape (ran.ambient_dim, dom.ambient_dim)
        Only its action on ``dom`` matters.
    dom, ran : Subspace
    u1, u2 : array_like, optional
        Unitary coordinate maps on the complements (identity by default).
    """
    V = as_cmatrix(V, rows=ran.ambient_dim, cols=dom.ambient_dim, name="V")
    if dom.dim != ran.dim:
        raise DimensionMismatch("dom and ran must have equal dimension")
    img = V @ dom.basis
    if np.max(np.abs(img.conj().T @ img - np.eye(dom.dim)), initial=0.0) > tol:
        raise NotIsometric("V is not isometric on dom")
    if np.max(np.abs(img - ran.basis @ (ran.basis.conj().T @ img)), initial=0.0) > tol:
        raise NotIsometric("V does not map dom into ran")
    cdom = orthonormal_complement(dom)
    cran = orthonormal_complement(ran)
    n1, n2 = cdom.dim, cran.dim
    u1 = np.eye(n1, dtype=complex) if u1 is None else as_cmatrix(u1, n1, n1, "u1")
    u2 = np.eye(n2, dtype=complex) if u2 is None else as_cmatrix(u2, n2, n2, "u2")
    top = np.hstack([img @ dom.basis.conj().T, cran.basis @ u2.conj().T])
    bottom = np.hstack([u1 @ cdom.basis.conj().T, np.zeros((n1, n2), dtype=complex)])
    return np.vstack([top, bottom])


def pinv(M, tol=DEFAULT_TOL):
    """Moore-Penrose pseudo-inverse; singular values below ``tol*smax`` are dropped."""
    M = as_cmatrix(M)
    if M.size == 0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=complex)
    return np.linalg.pinv(M, rcond=tol)


def unitarity_defect(U):
    """``max(||U^H U - I||, ||U U^H - I||)`` in the spectral norm."""
    U = np.asarray(U)
    if U.size == 0:
        return 0.0
    eye = np.eye(U.shape[0])
    return max(np.linalg.norm(U.conj().T @ U - eye, 2), np.linalg.norm(U @ U.conj().T - eye, 2))

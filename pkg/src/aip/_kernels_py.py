"""Pure numpy implementation of the batched resolvent kernels.

Mirrors the interface of the compiled ``_kernels`` extension exactly.
"""
import numpy as np


def resolvent_solve(A, R, z):
    A = np.asarray(A, dtype=complex)
    R = np.asarray(R, dtype=complex)
    z = np.ravel(np.asarray(z, dtype=complex))
    n, k = R.shape
    m = z.size
    if n == 0:
        return np.zeros((m, 0, k), dtype=complex)
    M = np.eye(n)[None, :, :] - z[:, None, None] * A[None, :, :]
    return np.linalg.solve(M, np.broadcast_to(R, (m, n, k)))


def transfer_eval(A, B, C, D, z):
    z = np.ravel(np.asarray(z, dtype=complex))
    C = np.asarray(C, dtype=complex)
    D = np.asarray(D, dtype=complex)
    X = resolvent_solve(A, B, z)
    return D[None, :, :] + z[:, None, None] * (C[None, :, :] @ X)

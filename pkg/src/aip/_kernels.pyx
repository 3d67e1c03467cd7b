# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched resolvent kernels.

Each grid point needs one small dense solve with ``I - z A``; doing the
LU factorization inline avoids per-point LAPACK dispatch overhead.
"""
import numpy as np
from libc.math cimport NAN

ctypedef double complex cplx

cdef extern from "complex.h" nogil:
    double cabs(double complex)


cdef int _solve_one(cplx[:, ::1] M, cplx[:, ::1] X, Py_ssize_t n, Py_ssize_t k,
                    double* minpiv) noexcept nogil:
    """In-place Gaussian elimination with partial pivoting: M X = X."""
    cdef Py_ssize_t i, j, c, p
    cdef double best, a
    cdef cplx f, t
    minpiv[0] = 1e300
    for j in range(n):
        p = j
        best = cabs(M[j, j])
        for i in range(j + 1, n):
            a = cabs(M[i, j])
            if a > best:
                best = a
                p = i
        if best < minpiv[0]:
            minpiv[0] = best
        if best == 0.0:
            return 1
        if p != j:
            for c in range(n):
                t = M[j, c]; M[j, c] = M[p, c]; M[p, c] = t
            for c in range(k):
                t = X[j, c]; X[j, c] = X[p, c]; X[p, c] = t
        for i in range(j + 1, n):
            f = M[i, j] / M[j, j]
            if f != 0:
                for c in range(j + 1, n):
                    M[i, c] = M[i, c] - f * M[j, c]
                for c in range(k):
                    X[i, c] = X[i, c] - f * X[j, c]
    for j in range(n - 1, -1, -1):
        for c in range(k):
            t = X[j, c]
            for i in range(j + 1, n):
                t = t - M[j, i] * X[i, c]
            X[j, c] = t / M[j, j]
    return 0


def resolvent_solve(A, R, z):
    """Solve ``(I - z_m A) X_m = R`` for every point ``z_m``.

    Returns ``X`` with shape ``(m, n, k)``.  A zero pivot leaves NaNs in the
    affected slice; callers screen points against the spectrum of ``A``.
    """
    cdef cplx[:, ::1] a = np.ascontiguousarray(A, dtype=np.complex128)
    cdef cplx[:, ::1] r = np.ascontiguousarray(R, dtype=np.complex128)
    cdef cplx[::1] zz = np.ascontiguousarray(np.ravel(z), dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0], k = r.shape[1], m = zz.shape[0]
    out = np.empty((m, n, k), dtype=np.complex128)
    cdef cplx[:, :, ::1] xo = out
    cdef double minpiv
    cdef cplx[:, ::1] M = np.empty((n, n), dtype=np.complex128)
    cdef Py_ssize_t p, i, j
    cdef cplx zp
    with nogil:
        for p in range(m):
            zp = zz[p]
            for i in range(n):
                for j in range(n):
                    M[i, j] = -zp * a[i, j]
                M[i, i] = M[i, i] + 1.0
                for j in range(k):
                    xo[p, i, j] = r[i, j]
            if _solve_one(M, xo[p], n, k, &minpiv):
                for i in range(n):
                    for j in range(k):
                        xo[p, i, j] = NAN
    return out


def transfer_eval(A, B, C, D, z):
    """Evaluate ``D + z C (I - z A)^{-1} B`` at every point of ``z``."""
    cdef cplx[:, ::1] c = np.ascontiguousarray(C, dtype=np.complex128)
    cdef cplx[:, ::1] d = np.ascontiguousarray(D, dtype=np.complex128)
    cdef cplx[::1] zz = np.ascontiguousarray(np.ravel(z), dtype=np.complex128)
    X = resolvent_solve(A, B, zz)
    cdef cplx[:, :, ::1] x = X
    cdef Py_ssize_t m = zz.shape[0], po = c.shape[0], n = c.shape[1], q = d.shape[1]
    out = np.empty((m, po, q), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    cdef Py_ssize_t p, i, j, l
    cdef cplx acc
    with nogil:
        for p in range(m):
            for i in range(po):
                for j in range(q):
                    acc = 0
                    for l in range(n):
                        acc = acc + c[i, l] * x[p, l, j]
                    o[p, i, j] = d[i, j] + zz[p] * acc
    return out

"""Grids, trapezoid quadrature and Hardy-space projections on the unit circle.

Boundary samples live on the half-step shifted grid
``t_j = exp(2 pi i (j + 1/2) / n)`` so that the distinguished points
``1, -1, i, -i`` are never nodes.  Sample arrays carry the grid index on
axis 0; trailing axes are vector or matrix components.
"""
import numpy as np


def circle_grid(n):
    """Shifted equispaced nodes on the unit circle."""
    return np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)


def disk_grid(count, radius=0.99):
    """Deterministic sunflower point set filling ``|z| <= radius``."""
    k = np.arange(count) + 0.5
    golden = np.pi * (3.0 - np.sqrt(5.0))
    return radius * np.sqrt(k / count) * np.exp(1j * golden * k)


def fourier_coefficients(samples):
    """Fourier coefficients ``c_k`` of boundary samples on :func:`circle_grid`.

    Returns ``(k, c)`` where ``k`` are signed integer frequencies in FFT
    order and ``c`` has the same trailing shape as ``samples``.
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.shape[0]
    k = np.rint(np.fft.fftfreq(n) * n).astype(int)
    c = np.fft.fft(samples, axis=0) / n
    phase = np.exp(-1j * np.pi * k / n).reshape((n,) + (1,) * (samples.ndim - 1))
    return k, c * phase


def _synthesize(k, c):
    n = c.shape[0]
    phase = np.exp(1j * np.pi * k / n).reshape((n,) + (1,) * (c.ndim - 1))
    return np.fft.ifft(c * phase, axis=0) * n


def project_plus(samples):
    """Riesz projection ``P_+`` onto H^2_+ (nonnegative frequencies)."""
    k, c = fourier_coefficients(samples)
    mask = (k >= 0).reshape((-1,) + (1,) * (c.ndim - 1))
    return _synthesize(k, c * mask)


def project_minus(samples):
    """``P_- = I - P_+`` onto H^2_- (negative frequencies)."""
    return np.asarray(samples, dtype=complex) - project_plus(samples)


def wrong_sign_mass(samples, space="plus", scale=0.0):
    """Relative L^2 mass of ``samples`` outside H^2_+ (``space='plus'``) or H^2_-.

    The mass is measured against ``max(||samples||, scale)`` so that
    functions that vanish up to rounding do not report O(1) noise.
    Returns 0 for identically zero input.
    """
    k, c = fourier_coefficients(samples)
    power = np.abs(c) ** 2
    power = power.reshape(power.shape[0], -1).sum(axis=1)
    total = max(power.sum(), scale ** 2)
    if total == 0.0:
        return 0.0
    wrong = power[k < 0].sum() if space == "plus" else power[k >= 0].sum()
    return float(np.sqrt(wrong / total))


def mean(samples):
    """Trapezoid rule for the normalized Lebesgue measure."""
    return np.mean(np.asarray(samples), axis=0)


def poisson_kernel(z, t):
    """``(1 - |z|^2) / |t - z|^2`` broadcast over ``z`` and ``t``."""
    return (1.0 - np.abs(z) ** 2) / np.abs(t - z) ** 2


def weight_blocks(w):
    """Stack ``[[I, w], [w^H, I]]`` for a batch of matrices ``w`` (m, p, q)."""
    w = np.asarray(w, dtype=complex)
    m, p, q = w.shape
    W = np.zeros((m, p + q, p + q), dtype=complex)
    W[:, :p, :p] = np.eye(p)
    W[:, p:, p:] = np.eye(q)
    W[:, :p, p:] = w
    W[:, p:, :p] = np.conj(np.swapaxes(w, 1, 2))
    return W


def range_inner(W, f, g, tol=1e-10):
    """Quadrature of ``g(t)^H W(t)^+ f(t)``: the range-norm inner product.

    ``W`` has shape (m, d, d); ``f`` and ``g`` have shape (m, d) or
    (m, d, k) for several vectors at once, giving a (k, k) Gram matrix.
    """
    Wp = np.linalg.pinv(W, rcond=tol, hermitian=True)
    if f.ndim == 2:
        return complex(np.mean(np.einsum("mi,mij,mj->m", g.conj(), Wp, f)))
    return np.mean(np.einsum("mia,mij,mjb->mab", g.conj(), Wp, f), axis=0)

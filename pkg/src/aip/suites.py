"""Random feasible instances and Schur parameters for test and acceptance suites."""
import numpy as np

from .colligation import UnitaryColligation
from .parametrization import SchurParameter
from .problems import BoundaryData, NpData, SarasonData, sarason_from_np


def _separated_points(rng, n, radius, gap=0.05):
    pts = []
    while len(pts) < n:
        z = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(z - q) > gap for q in pts):
            pts.append(complex(z))
    return pts


def random_schur_function(rng, rho=0.9):
    """A strictly contractive rational function ``rho * e^{i phi} * (z - a)/(1 - conj(a) z)``."""
    a = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    c = rho * np.exp(2j * np.pi * rng.uniform())

    def w(z):
        z = np.asarray(z, dtype=complex)
        return c * (z - a) / (1 - np.conj(a) * z)
    return w


def random_np(rng, n, radius=0.85, rho=0.9):
    """Completely indeterminate NP data: values of a function with sup norm ``rho < 1``."""
    nodes = _separated_points(rng, n, radius)
    w = random_schur_function(rng, rho)
    return NpData(nodes, [complex(v) for v in w(np.array(nodes))])


def random_sarason(rng, n, radius=0.85, rho=0.9):
    d = random_np(rng, n, radius, rho)
    return sarason_from_np(d)


def random_sarason_general(rng, n, radius=0.85):
    """Sarason data with ``W*`` diagonal in the kernel basis, scaled to be contractive."""
    d = random_np(rng, n, radius)
    return SarasonData(d.nodes, np.diag(np.conj(d.values)))


def random_boundary(rng, dmin=0.2, dmax=3.0):
    t0 = np.exp(2j * np.pi * rng.uniform())
    w0 = np.exp(2j * np.pi * rng.uniform())
    return BoundaryData(t0, w0, rng.uniform(dmin, dmax))


def random_contraction(rng, rows, cols, radius=0.95):
    """Uniformly scaled random matrix with spectral norm ``radius * u``, ``u`` uniform in [0, 1)."""
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=complex)
    M = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return M / np.linalg.norm(M, 2) * radius * rng.uniform()


def random_constant_parameter(rng, dimN1, dimN2, radius=0.95):
    return SchurParameter(value=random_contraction(rng, dimN2, dimN1, radius))


def mobius_parameter(a, phase=1.0):
    """Scalar parameter ``phase * (z - a)/(1 - conj(a) z)`` realized by a 2x2 unitary colligation."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError("Mobius zero must lie in the open unit disk")
    r = np.sqrt(1 - abs(a) ** 2)
    col = UnitaryColligation([[np.conj(a)]], [[r]], [[phase * r]], [[-phase * a]])
    return SchurParameter(realization=col)

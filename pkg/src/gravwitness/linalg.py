"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays of shape ``(n, n)``. The
Hermitian eigensolver is a cyclic complex Jacobi iteration, which is
deterministic and accurate to a few ulps at the dimensions used here
(n <= 16).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, NotHermitian

HERMITIAN_ATOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
MAX_EIGEN_DIM = 16

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex128 array, raising on bad shapes."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def hermiticity_error(m) -> float:
    """Largest entrywise deviation ``|m - m^dagger|``."""
    a = as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    return hermiticity_error(m) <= atol


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``(a (x) b)[i*nb + k, j*nb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose_A(m, dim_a: int = 2, dim_b: int = 2) -> np.ndarray:
    """Transpose the first tensor factor.

    ``(m^{T_A})[(a, b), (a', b')] = m[(a', b), (a, b')]``. Pure index
    permutation, so applying it twice gives back ``m`` bit for bit.
    """
    a = as_matrix(m)
    if a.shape[0] != dim_a * dim_b:
        raise DimensionMismatch(
            f"matrix of dim {a.shape[0]} is not a {dim_a}x{dim_b} bipartite operator"
        )
    t = a.reshape(dim_a, dim_b, dim_a, dim_b).transpose(2, 1, 0, 3)
    return np.ascontiguousarray(t.reshape(dim_a * dim_b, dim_a * dim_b))


def _off_norm(a: list[list[complex]]) -> float:
    n = len(a)
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                z = row[j]
                total += z.real * z.real + z.imag * z.imag
    return math.sqrt(total)


def hermitian_eigen(
    m, atol: float = HERMITIAN_ATOL, vectors: bool = True
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(values, vectors)`` with real ``values`` sorted in descending
    order and orthonormal eigenvectors stored as the columns of
    ``vectors``, so that ``m = V diag(values) V^dagger``.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then annihilates the now-real pivot with a real
    Givens rotation. Sweeps continue until the off-diagonal Frobenius norm
    drops below ``1e-14`` relative to the input norm. ``vectors=False``
    skips accumulating the rotations and returns ``None`` in their place.
    """
    arr = as_matrix(m)
    n = arr.shape[0]
    if n > MAX_EIGEN_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds supported maximum {MAX_EIGEN_DIM}")
    herm_err = hermiticity_error(arr)
    if herm_err > atol:
        raise NotHermitian(f"matrix deviates from Hermitian by {herm_err:.3e}")

    # plain Python scalars: numpy call overhead dominates at n <= 16
    a = (0.5 * (arr + arr.conj().T)).tolist()
    v = np.eye(n, dtype=complex).tolist() if vectors else []
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(arr)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                ph = (apq / r).conjugate()
                zeta = (a[q][q].real - a[p][p].real) / (2.0 * r)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, ph) @ [[c, s], [-s, c]] on the (p, q) plane
                u10 = -s * ph
                u11 = c * ph
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = x * c + y * u10
                    row[q] = x * s + y * u11
                ap, aq = a[p], a[q]
                u10c, u11c = u10.conjugate(), u11.conjugate()
                for k in range(n):
                    x, y = ap[k], aq[k]
                    ap[k] = c * x + u10c * y
                    aq[k] = s * x + u11c * y
                ap[q] = aq[p] = 0j
                ap[p] = complex(ap[p].real)
                aq[q] = complex(aq[q].real)
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = x * c + y * u10
                    row[q] = x * s + y * u11
    else:
        if _off_norm(a) > tol:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    values = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(-values, kind="stable")
    if not vectors:
        return values[order], None
    return values[order], np.array(v, dtype=complex)[:, order]


def eigvalsh_desc(m) -> np.ndarray:
    return hermitian_eigen(m, vectors=False)[0]


def min_eigenpair(m) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and its unit eigenvector."""
    values, vectors = hermitian_eigen(m)
    return float(values[-1]), vectors[:, -1].copy()

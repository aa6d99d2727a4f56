"""Dense complex-matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Bipartite
operators use the row-major index convention ``(i * dB + m)`` for the pair
``(i_A, m_B)``.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NotHermitian

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]

TOL_HERM = 1e-9
TOL_PSD = 1e-9
TOL_EIG = 1e-9


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    """Coerce to a square complex128 matrix with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(v: npt.ArrayLike) -> ComplexVector:
    out = np.asarray(v, dtype=np.complex128).reshape(-1)
    if out.size < 1:
        raise DimensionMismatch("empty vector")
    if not np.all(np.isfinite(out)):
        raise ValueError("vector has non-finite entries")
    return out


def _check_bipartite(rho: ComplexMatrix, dA: int, dB: int) -> None:
    if rho.shape[0] != dA * dB:
        raise DimensionMismatch(f"matrix dim {rho.shape[0]} != dA*dB = {dA}*{dB}")


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def dagger(a: npt.ArrayLike) -> ComplexMatrix:
    return np.conj(np.asarray(a, dtype=np.complex128)).T


def projector(v: npt.ArrayLike) -> ComplexMatrix:
    """|v><v| for a (not necessarily normalized) vector."""
    v = as_vector(v)
    return np.outer(v, v.conj())


def partial_trace(
    rho: npt.ArrayLike, dA: int, dB: int, subsystem: Literal["A", "B"] = "B"
) -> ComplexMatrix:
    """Trace out ``subsystem``; tracing B leaves a dA x dA operator."""
    rho = as_matrix(rho)
    _check_bipartite(rho, dA, dB)
    t = rho.reshape(dA, dB, dA, dB)
    if subsystem == "B":
        return np.einsum("imjm->ij", t)
    if subsystem == "A":
        return np.einsum("imin->mn", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(rho: npt.ArrayLike, dA: int, dB: int) -> ComplexMatrix:
    """Transpose the B indices."""
    rho = as_matrix(rho)
    _check_bipartite(rho, dA, dB)
    n = dA * dB
    return rho.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(n, n)


def hadamard_product(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_same_shape(a, b)
    return a * b


def hermiticity_residual(a: npt.ArrayLike) -> float:
    """Max-norm of ``a - a^dagger``."""
    a = np.asarray(a, dtype=np.complex128)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: npt.ArrayLike, tol: float = TOL_HERM) -> bool:
    return hermiticity_residual(a) <= tol


def hermitian_eigenvalues(a: npt.ArrayLike, tol: float = TOL_HERM) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Raises NotHermitian if the max-norm asymmetry exceeds ``tol``.
    """
    a = as_matrix(a)
    res = hermiticity_residual(a)
    if res > tol:
        raise NotHermitian(f"asymmetry {res:.3g} exceeds {tol:g}")
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigvalsh((a + a.conj().T) / 2)


def min_eigenvalue(a: npt.ArrayLike, tol: float = TOL_HERM) -> float:
    return float(hermitian_eigenvalues(a, tol)[0])


def is_psd(a: npt.ArrayLike, tol: float = TOL_PSD) -> bool:
    return min_eigenvalue(a) >= -tol


def frobenius_distance(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_same_shape(a, b)
    return float(np.linalg.norm(a - b))


def blocks(rho: npt.ArrayLike, dA: int, dB: int) -> np.ndarray:
    """View ``rho`` as a (dA, dA, dB, dB) array of blocks <iA .|rho|jA .>."""
    rho = as_matrix(rho)
    _check_bipartite(rho, dA, dB)
    return rho.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3)


def from_blocks(b: np.ndarray) -> ComplexMatrix:
    dA, _, dB, _ = b.shape
    return np.ascontiguousarray(b.transpose(0, 2, 1, 3)).reshape(dA * dB, dA * dB)

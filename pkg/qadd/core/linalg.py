"""
Dense complex linear algebra on small matrices

Everything downstream (channels, entropies, optimizers) works on dense
``numpy`` arrays of dimension at most a few hundred. Vectorization is column
stacking, product bases are row-major: |i>|j> <-> i * d2 + j.
"""

from enum import Enum
from functools import reduce
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from qadd.config import settings
from qadd.middleware.error_handler import DimensionError, InvalidStateError, ParameterError
from qadd.models.schemas import HermEig, PsdResult

CMatrix = NDArray[np.complex128]


class MatrixFunction(str, Enum):
    """Spectral functions available through matrix_fn"""

    LOG2 = "log2"
    SQRT = "sqrt"
    INV_SQRT = "inv_sqrt"


def as_matrix(a: object) -> CMatrix:
    """Coerce to a finite complex 2-D array"""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"Expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError("Matrix has non-finite entries")
    return m


def require_square(a: CMatrix) -> int:
    """Return the side of a square matrix"""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {a.shape}")
    return int(a.shape[0])


def max_abs(a: np.ndarray) -> float:
    """Entrywise infinity norm"""
    return float(np.max(np.abs(a))) if a.size else 0.0


def symmetrize(a: CMatrix) -> CMatrix:
    """Hermitian part (A + A^dagger) / 2"""
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: CMatrix, tol: float | None = None) -> bool:
    tol = settings.HERMITIAN_TOL if tol is None else tol
    require_square(a)
    return max_abs(a - a.conj().T) <= tol * (1.0 + max_abs(a))


def zero_cutoff(a: CMatrix) -> float:
    """Support threshold relative to the matrix scale"""
    return settings.ZERO_CUTOFF * max(1.0, max_abs(a))


def hermitian_eig(a: CMatrix) -> HermEig:
    """
    Eigendecomposition of a Hermitian matrix

    Args:
        a: square matrix, symmetrized before decomposition

    Returns:
        HermEig with real eigenvalues sorted descending and unitary eigenvectors
    """
    a = as_matrix(a)
    require_square(a)
    values, vectors = np.linalg.eigh(symmetrize(a))
    order = np.argsort(values)[::-1]
    return HermEig(eigenvalues=values[order], eigenvectors=vectors[:, order])


def eigvalsh_desc(a: CMatrix) -> np.ndarray:
    """Eigenvalues of the Hermitian part, descending"""
    return np.linalg.eigvalsh(symmetrize(a))[::-1]


def kron(*ops: CMatrix) -> CMatrix:
    """Kronecker product of one or more matrices"""
    if not ops:
        raise DimensionError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=np.complex128) for op in ops))


def _check_dims(a: CMatrix, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d <= 0 for d in dims):
        raise DimensionError(f"Subsystem dimensions must be positive: {dims}")
    side = require_square(a)
    if side != int(np.prod(dims)):
        raise DimensionError(f"Matrix of side {side} does not factor as {dims}")
    return dims


def _as_indices(which: int | Sequence[int], n: int) -> tuple[int, ...]:
    idx = (which,) if isinstance(which, (int, np.integer)) else tuple(which)
    for k in idx:
        if not 0 <= k < n:
            raise DimensionError(f"Subsystem index {k} out of range for {n} subsystems")
    return tuple(sorted(set(int(k) for k in idx)))


def partial_trace(a: CMatrix, dims: Sequence[int], traced: int | Sequence[int]) -> CMatrix:
    """
    Trace out subsystems of an operator on a tensor product space

    Args:
        a: operator on H_0 (x) ... (x) H_{n-1}
        dims: local dimensions (d_0, ..., d_{n-1})
        traced: zero-based index or indices of the subsystems to trace out

    Returns:
        Operator on the remaining subsystems, in their original order
    """
    dims = _check_dims(a, dims)
    n = len(dims)
    gone = _as_indices(traced, n)
    kept = [k for k in range(n) if k not in gone]
    tensor = a.reshape(dims + dims)
    rows = list(range(n))
    cols = [k if k in gone else n + k for k in range(n)]
    out = kept + [n + k for k in kept]
    reduced = np.einsum(tensor, rows + cols, out)
    side = int(np.prod([dims[k] for k in kept])) if kept else 1
    return reduced.reshape(side, side)


def reduced_state(a: CMatrix, dims: Sequence[int], keep: int | Sequence[int]) -> CMatrix:
    """Marginal on the listed subsystems"""
    n = len(dims)
    kept = _as_indices(keep, n)
    return partial_trace(a, dims, [k for k in range(n) if k not in kept])


def partial_transpose(a: CMatrix, dims: Sequence[int], which: int | Sequence[int]) -> CMatrix:
    """Transpose the listed subsystems; an involution on the entries"""
    dims = _check_dims(a, dims)
    n = len(dims)
    axes = list(range(2 * n))
    for k in _as_indices(which, n):
        axes[k], axes[n + k] = axes[n + k], axes[k]
    side = a.shape[0]
    return a.reshape(dims + dims).transpose(axes).reshape(side, side)


def matrix_fn(
    a: CMatrix, fn: MatrixFunction | str, pseudo_inverse: bool = True
) -> CMatrix:
    """
    Apply a spectral function to a positive semidefinite matrix

    Eigenvalues below the zero cutoff count as exact zeros: log2 maps them to 0
    (0 log 0 = 0) and inv_sqrt inverts on the support only.

    Args:
        a: Hermitian PSD matrix
        fn: log2, sqrt or inv_sqrt
        pseudo_inverse: allow inv_sqrt on singular input

    Returns:
        f(A) in the eigenbasis of A
    """
    fn = MatrixFunction(fn)
    eig = hermitian_eig(a)
    cutoff = zero_cutoff(a)
    values = eig.eigenvalues
    if values[-1] < -cutoff:
        raise InvalidStateError(f"Matrix is not PSD: eigenvalue {values[-1]:.3e}")
    support = values > cutoff
    mapped = np.zeros_like(values)
    if fn is MatrixFunction.LOG2:
        mapped[support] = np.log2(values[support])
    elif fn is MatrixFunction.SQRT:
        mapped[support] = np.sqrt(values[support])
    else:
        if not pseudo_inverse and not np.all(support):
            raise InvalidStateError("inv_sqrt requested off the support without pseudo-inverse")
        mapped[support] = 1.0 / np.sqrt(values[support])
    u = eig.eigenvectors
    return (u * mapped) @ u.conj().T


def support_projector(a: CMatrix) -> CMatrix:
    """Orthogonal projector onto the span of eigenvectors above the cutoff"""
    eig = hermitian_eig(a)
    u = eig.eigenvectors[:, eig.eigenvalues > zero_cutoff(a)]
    return u @ u.conj().T


def psd_check(a: CMatrix, tol: float) -> PsdResult:
    """Positivity of the Hermitian part up to -tol"""
    a = as_matrix(a)
    require_square(a)
    lowest = float(np.linalg.eigvalsh(symmetrize(a))[0])
    return PsdResult(is_psd=lowest >= -tol, min_eigenvalue=lowest)


def vec(x: CMatrix) -> np.ndarray:
    """Column-stacking vectorization"""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> CMatrix:
    """Inverse of vec"""
    return np.asarray(v).reshape(rows, rows if cols is None else cols, order="F")


def trace_norm(a: CMatrix) -> float:
    """Sum of singular values"""
    return float(np.sum(np.linalg.svd(np.asarray(a), compute_uv=False)))


def matrix_units(d: int) -> list[tuple[int, int, CMatrix]]:
    """All |i><j| of size d, column-major order (index i + d * j)"""
    units = []
    for j in range(d):
        for i in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            units.append((i, j, e))
    return units

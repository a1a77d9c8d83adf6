"""
Density matrices and ensembles
"""

from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from qadd.config import settings
from qadd.core.linalg import CMatrix, as_matrix, max_abs, require_square, symmetrize
from qadd.middleware.error_handler import DimensionError, InvalidStateError

STATE_TOL = 1e-10


def validate_state(rho: object, tol: float = STATE_TOL) -> CMatrix:
    """
    Check that rho is a density matrix

    Args:
        rho: candidate matrix
        tol: tolerance for hermiticity, positivity and unit trace

    Returns:
        The Hermitian part of rho as a complex array
    """
    m = as_matrix(rho)
    require_square(m)
    if max_abs(m - m.conj().T) > max(tol, settings.HERMITIAN_TOL) * (1.0 + max_abs(m)):
        raise InvalidStateError("Matrix is not Hermitian")
    m = symmetrize(m)
    trace = float(np.trace(m).real)
    if abs(trace - 1.0) > tol:
        raise InvalidStateError(f"Trace is {trace:.12f}, not 1")
    lowest = float(np.linalg.eigvalsh(m)[0])
    if lowest < -tol:
        raise InvalidStateError(f"Matrix is not PSD: eigenvalue {lowest:.3e}")
    return m


def pure_state(vector: Sequence[complex] | np.ndarray) -> CMatrix:
    """|psi><psi| of a normalized vector"""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidStateError("Zero vector has no state")
    v = v / norm
    return np.outer(v, v.conj())


def basis_state(d: int, i: int) -> CMatrix:
    """|i><i| in dimension d"""
    if not 0 <= i < d:
        raise DimensionError(f"Basis index {i} out of range for dimension {d}")
    out = np.zeros((d, d), dtype=np.complex128)
    out[i, i] = 1.0
    return out


def maximally_mixed(d: int) -> CMatrix:
    return np.eye(d, dtype=np.complex128) / d


class Ensemble(BaseModel):
    """Probability-weighted input states {p_x, rho_x} on a common space"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probabilities: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    @field_validator("probabilities")
    @classmethod
    def check_probabilities(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v:
            raise ValueError("ensemble is empty")
        if any(p < -1e-12 for p in v):
            raise ValueError("negative probability")
        if abs(sum(v) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {sum(v)}")
        return tuple(max(float(p), 0.0) for p in v)

    @field_validator("states", mode="before")
    @classmethod
    def check_states(cls, v: Sequence[object]) -> tuple[np.ndarray, ...]:
        return tuple(validate_state(rho) for rho in v)

    @model_validator(mode="after")
    def check_shapes(self) -> "Ensemble":
        if len(self.probabilities) != len(self.states):
            raise DimensionError(
                f"{len(self.probabilities)} probabilities for {len(self.states)} states"
            )
        if len({rho.shape for rho in self.states}) != 1:
            raise DimensionError("Ensemble states live on different spaces")
        return self

    @property
    def dim(self) -> int:
        return int(self.states[0].shape[0])

    def average(self) -> CMatrix:
        return sum(p * rho for p, rho in zip(self.probabilities, self.states))

    def cq_state(self) -> CMatrix:
        """sum_x p_x |x><x| (x) rho_x"""
        return classical_quantum_state(self.probabilities, self.states)


def classical_quantum_state(probabilities: Sequence[float], states: Sequence[CMatrix]) -> CMatrix:
    """Block-diagonal sum_x p_x |x><x| (x) rho_x"""
    n = len(states)
    d = states[0].shape[0]
    out = np.zeros((n * d, n * d), dtype=np.complex128)
    for x, (p, rho) in enumerate(zip(probabilities, states)):
        out[x * d : (x + 1) * d, x * d : (x + 1) * d] = p * rho
    return out

"""
Channel representations: Stinespring isometry, Kraus set, Choi and transfer matrices

Conventions:
    isometry rows are indexed b * d_env + e (output before environment)
    Choi J = sum_ij |i><j| (x) N(|i><j|), input factor first
    transfer T = sum_k conj(A_k) (x) A_k, so vec(N(X)) = T vec(X) with column stacking
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qadd.config import settings
from qadd.core.linalg import (
    CMatrix,
    as_matrix,
    hermitian_eig,
    matrix_units,
    max_abs,
    partial_trace,
    psd_check,
    unvec,
    vec,
    zero_cutoff,
)
from qadd.core.random import random_isometry
from qadd.middleware.error_handler import ChannelValidationError, DimensionError


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128)
    out.setflags(write=False)
    return out


def choi_to_transfer(choi: CMatrix, d_in: int, d_out: int) -> CMatrix:
    """Reshuffle a Choi matrix into the transfer matrix of the same map"""
    j = as_matrix(choi)
    if j.shape != (d_in * d_out, d_in * d_out):
        raise DimensionError(f"Choi matrix of shape {j.shape} does not match ({d_in}, {d_out})")
    return j.reshape(d_in, d_out, d_in, d_out).transpose(3, 1, 2, 0).reshape(d_out**2, d_in**2)


def transfer_to_choi(transfer: CMatrix, d_in: int, d_out: int) -> CMatrix:
    """Inverse of choi_to_transfer"""
    t = as_matrix(transfer)
    if t.shape != (d_out**2, d_in**2):
        raise DimensionError(f"Transfer matrix of shape {t.shape} does not match ({d_in}, {d_out})")
    return t.reshape(d_out, d_out, d_in, d_in).transpose(3, 1, 2, 0).reshape(
        d_in * d_out, d_in * d_out
    )


def _choi_from_kraus(kraus: np.ndarray) -> CMatrix:
    k, d_out, d_in = kraus.shape
    vectors = kraus.transpose(0, 2, 1).reshape(k, d_in * d_out)
    return vectors.T @ vectors.conj()


def _transfer_from_kraus(kraus: np.ndarray) -> CMatrix:
    k, d_out, d_in = kraus.shape
    return np.einsum("kcj,kbi->cbji", kraus.conj(), kraus).reshape(d_out**2, d_in**2)


class Isometry(BaseModel):
    """Stinespring isometry V: A -> B (x) E"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    d_in: int = Field(gt=0)
    d_out: int = Field(gt=0)
    d_env: int = Field(gt=0)

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze_matrix(cls, v: object) -> np.ndarray:
        return _frozen(as_matrix(v))

    @model_validator(mode="after")
    def check_isometry(self) -> "Isometry":
        expected = (self.d_out * self.d_env, self.d_in)
        if self.matrix.shape != expected:
            raise DimensionError(f"Isometry of shape {self.matrix.shape}, expected {expected}")
        deviation = max_abs(self.matrix.conj().T @ self.matrix - np.eye(self.d_in))
        if deviation > settings.ISOMETRY_TOL:
            raise ChannelValidationError(f"V^dagger V deviates from identity by {deviation:.3e}")
        return self

    @classmethod
    def from_kraus(cls, kraus: np.ndarray) -> "Isometry":
        """Stack Kraus operators into an isometry with d_env = number of operators"""
        k, d_out, d_in = kraus.shape
        return cls(
            matrix=kraus.transpose(1, 0, 2).reshape(d_out * k, d_in),
            d_in=d_in,
            d_out=d_out,
            d_env=k,
        )

    def kraus(self) -> np.ndarray:
        """Kraus operators A_e = (I (x) <e|) V, shape (d_env, d_out, d_in)"""
        return self.matrix.reshape(self.d_out, self.d_env, self.d_in).transpose(1, 0, 2)

    def complementary(self) -> "Isometry":
        """Same isometry with the roles of output and environment exchanged"""
        swapped = self.matrix.reshape(self.d_out, self.d_env, self.d_in).transpose(1, 0, 2)
        return Isometry(
            matrix=swapped.reshape(self.d_env * self.d_out, self.d_in),
            d_in=self.d_in,
            d_out=self.d_env,
            d_env=self.d_out,
        )


class SuperOperator:
    """Linear map between operator spaces held by its transfer matrix; positivity not assumed"""

    def __init__(self, transfer: CMatrix, d_in: int, d_out: int, label: Optional[str] = None):
        t = as_matrix(transfer)
        if t.shape != (d_out**2, d_in**2):
            raise DimensionError(
                f"Transfer matrix of shape {t.shape} does not match ({d_in}, {d_out})"
            )
        self.d_in = d_in
        self.d_out = d_out
        self.label = label
        self._transfer = _frozen(t)
        self._choi = _frozen(transfer_to_choi(t, d_in, d_out))

    @classmethod
    def from_action(
        cls,
        action: Callable[[CMatrix], CMatrix],
        d_in: int,
        d_out: int,
        label: Optional[str] = None,
    ) -> "SuperOperator":
        """Tabulate a linear action on the matrix units of the input space"""
        columns = []
        for _, _, unit in matrix_units(d_in):
            image = as_matrix(action(unit))
            if image.shape != (d_out, d_out):
                raise DimensionError(
                    f"Action returned shape {image.shape}, expected ({d_out}, {d_out})"
                )
            columns.append(vec(image))
        return cls(np.stack(columns, axis=1), d_in, d_out, label)

    @classmethod
    def from_choi(
        cls, choi: CMatrix, d_in: int, d_out: int, label: Optional[str] = None
    ) -> "SuperOperator":
        return cls(choi_to_transfer(choi, d_in, d_out), d_in, d_out, label)

    @property
    def transfer(self) -> CMatrix:
        return self._transfer

    @property
    def choi(self) -> CMatrix:
        return self._choi

    def apply(self, x: CMatrix) -> CMatrix:
        x = as_matrix(x)
        if x.shape != (self.d_in, self.d_in):
            raise DimensionError(f"Input of shape {x.shape} does not match d_in={self.d_in}")
        return unvec(self._transfer @ vec(x), self.d_out)

    def compose(self, inner: Union["SuperOperator", "Channel"]) -> "SuperOperator":
        """self o inner"""
        if inner.d_out != self.d_in:
            raise DimensionError(
                f"Cannot compose: inner d_out={inner.d_out}, outer d_in={self.d_in}"
            )
        return SuperOperator(self._transfer @ inner.transfer, inner.d_in, self.d_out)

    def inverse(self) -> "SuperOperator":
        if self.d_in != self.d_out:
            raise DimensionError("Only maps with d_in == d_out can be inverted")
        return SuperOperator(np.linalg.inv(self._transfer), self.d_out, self.d_in)

    def is_trace_preserving(self, tol: Optional[float] = None) -> bool:
        tol = settings.CHANNEL_TOL if tol is None else tol
        marginal = partial_trace(self._choi, (self.d_in, self.d_out), 1)
        return max_abs(marginal - np.eye(self.d_in)) <= tol

    def is_completely_positive(self, tol: Optional[float] = None) -> bool:
        tol = settings.CHANNEL_TOL if tol is None else tol
        return psd_check(self._choi, tol).is_psd

    def is_cptp(self, tol: Optional[float] = None) -> bool:
        return self.is_completely_positive(tol) and self.is_trace_preserving(tol)

    def to_channel(self, tol: Optional[float] = None, label: Optional[str] = None) -> "Channel":
        """Promote to a Channel; fails unless the map is CPTP within tol"""
        if not self.is_cptp(tol):
            lowest = psd_check(self._choi, 0.0).min_eigenvalue
            raise ChannelValidationError(
                f"Map is not CPTP (Choi min eigenvalue {lowest:.3e}, "
                f"trace preserving: {self.is_trace_preserving(tol)})"
            )
        return Channel.from_choi(self._choi, self.d_in, self.d_out, label=label or self.label)

    def __repr__(self) -> str:
        return f"SuperOperator(d_in={self.d_in}, d_out={self.d_out}, label={self.label!r})"


@dataclass(frozen=True)
class FlagStructure:
    """Branch probabilities and branch channels of a flagged mixture"""

    probabilities: tuple[float, ...]
    branches: tuple["Channel", ...]

    def complementary(self) -> "FlagStructure":
        return FlagStructure(self.probabilities, tuple(b.complementary() for b in self.branches))


class Channel:
    """
    CPTP map held by its Stinespring isometry

    Kraus operators, Choi and transfer matrices are computed once at construction
    and stored read-only, so instances can be shared between threads and processes.
    """

    def __init__(
        self,
        isometry: Isometry,
        label: Optional[str] = None,
        family: Optional[str] = None,
        params: Optional[dict[str, float]] = None,
        flags: Optional[FlagStructure] = None,
    ):
        self._isometry = isometry
        self.label = label
        self.family = family
        self.params = dict(params or {})
        self.flags = flags
        self._kraus = _frozen(isometry.kraus())
        self._choi = _frozen(_choi_from_kraus(self._kraus))
        self._transfer = _frozen(_transfer_from_kraus(self._kraus))

    # Construction

    @classmethod
    def from_isometry(
        cls,
        matrix: CMatrix,
        d_out: int,
        d_env: int,
        label: Optional[str] = None,
        family: Optional[str] = None,
        params: Optional[dict[str, float]] = None,
    ) -> "Channel":
        m = as_matrix(matrix)
        isometry = Isometry(matrix=m, d_in=m.shape[1], d_out=d_out, d_env=d_env)
        return cls(isometry, label=label, family=family, params=params)

    @classmethod
    def from_kraus(
        cls,
        kraus: Sequence[CMatrix] | np.ndarray,
        label: Optional[str] = None,
        family: Optional[str] = None,
        params: Optional[dict[str, float]] = None,
        flags: Optional[FlagStructure] = None,
        tol: Optional[float] = None,
    ) -> "Channel":
        """
        Build a channel from Kraus operators

        Args:
            kraus: operators of common shape (d_out, d_in)
            label: display name
            family: zoo family tag, if any
            params: family parameters
            flags: flag structure, for flagged mixtures
            tol: trace-preservation tolerance, defaults to CHANNEL_TOL

        Returns:
            Channel whose environment dimension is the number of operators
        """
        tol = settings.CHANNEL_TOL if tol is None else tol
        ops = np.asarray(kraus, dtype=np.complex128)
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise DimensionError(
                f"Kraus operators must form a non-empty stack, got shape {ops.shape}"
            )
        if not np.all(np.isfinite(ops)):
            raise ChannelValidationError("Kraus operators have non-finite entries")
        completeness = np.einsum("kba,kbc->ac", ops.conj(), ops)
        deviation = max_abs(completeness - np.eye(ops.shape[2]))
        if deviation > tol:
            raise ChannelValidationError(
                f"Kraus operators are not trace preserving: {deviation:.3e}"
            )
        return cls(Isometry.from_kraus(ops), label=label, family=family, params=params, flags=flags)

    @classmethod
    def from_choi(
        cls,
        choi: CMatrix,
        d_in: int,
        d_out: int,
        label: Optional[str] = None,
        tol: Optional[float] = None,
    ) -> "Channel":
        """Kraus operators from the eigendecomposition of a PSD Choi matrix"""
        tol = settings.CHANNEL_TOL if tol is None else tol
        j = as_matrix(choi)
        if j.shape != (d_in * d_out, d_in * d_out):
            raise DimensionError(f"Choi matrix of shape {j.shape} does not match ({d_in}, {d_out})")
        check = psd_check(j, tol)
        if not check.is_psd:
            raise ChannelValidationError(
                f"Choi matrix not PSD: eigenvalue {check.min_eigenvalue:.3e}"
            )
        eig = hermitian_eig(j)
        keep = eig.eigenvalues > zero_cutoff(j)
        if not np.any(keep):
            raise ChannelValidationError("Choi matrix vanishes")
        vectors = eig.eigenvectors[:, keep] * np.sqrt(eig.eigenvalues[keep])
        kraus = vectors.T.reshape(-1, d_in, d_out).transpose(0, 2, 1)
        return cls.from_kraus(kraus, label=label, tol=tol)

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls.from_isometry(np.eye(d), d_out=d, d_env=1, label=f"id_{d}")

    @classmethod
    def unitary(cls, u: CMatrix, label: Optional[str] = None) -> "Channel":
        m = as_matrix(u)
        return cls.from_isometry(m, d_out=m.shape[0], d_env=1, label=label or "unitary")

    @classmethod
    def random(
        cls, rng: np.random.Generator, d_in: int, d_out: int, d_env: int
    ) -> "Channel":
        """Channel of a Haar-random isometry"""
        v = random_isometry(rng, d_in, d_out * d_env)
        return cls.from_isometry(v, d_out=d_out, d_env=d_env, label="random")

    # Representations

    @property
    def isometry(self) -> Isometry:
        return self._isometry

    @property
    def d_in(self) -> int:
        return self._isometry.d_in

    @property
    def d_out(self) -> int:
        return self._isometry.d_out

    @property
    def d_env(self) -> int:
        return self._isometry.d_env

    @property
    def kraus(self) -> np.ndarray:
        return self._kraus

    @property
    def choi(self) -> CMatrix:
        return self._choi

    @property
    def transfer(self) -> CMatrix:
        return self._transfer

    def as_superoperator(self) -> SuperOperator:
        return SuperOperator(self._transfer, self.d_in, self.d_out, self.label)

    # Action

    def _check_input(self, rho: CMatrix) -> CMatrix:
        rho = as_matrix(rho)
        if rho.shape != (self.d_in, self.d_in):
            raise DimensionError(f"Input of shape {rho.shape} does not match d_in={self.d_in}")
        return rho

    def apply(self, rho: CMatrix) -> CMatrix:
        """N(rho) = sum_k A_k rho A_k^dagger"""
        rho = self._check_input(rho)
        return np.einsum("kba,ac,kdc->bd", self._kraus, rho, self._kraus.conj())

    def apply_complementary(self, rho: CMatrix) -> CMatrix:
        """N^c(rho) = Tr_B(V rho V^dagger)"""
        joint = self.stinespring_state(rho)
        return partial_trace(joint, (self.d_out, self.d_env), 0)

    def stinespring_state(self, rho: CMatrix) -> CMatrix:
        """V rho V^dagger on B (x) E"""
        rho = self._check_input(rho)
        v = self._isometry.matrix
        return v @ rho @ v.conj().T

    @cached_property
    def _complement(self) -> "Channel":
        flags = self.flags.complementary() if self.flags is not None else None
        label = f"{self.label}^c" if self.label else None
        return Channel(self._isometry.complementary(), label=label, flags=flags)

    def complementary(self) -> "Channel":
        """Channel to the environment of the same isometry"""
        return self._complement

    def restrict(self, basis: Sequence[int], label: Optional[str] = None) -> "Channel":
        """Subchannel on the span of the listed input basis vectors"""
        idx = list(basis)
        if not idx or any(not 0 <= i < self.d_in for i in idx) or len(set(idx)) != len(idx):
            raise DimensionError(f"Invalid basis {idx} for input dimension {self.d_in}")
        isometry = Isometry(
            matrix=self._isometry.matrix[:, idx],
            d_in=len(idx),
            d_out=self.d_out,
            d_env=self.d_env,
        )
        return Channel(isometry, label=label or f"{self.label}|{idx}")

    def embed_output(self, d: int) -> "Channel":
        """Same channel with the output space enlarged to dimension d"""
        if d < self.d_out:
            raise DimensionError(f"Cannot embed output of dimension {self.d_out} into {d}")
        padded = np.zeros((self._kraus.shape[0], d, self.d_in), dtype=np.complex128)
        padded[:, : self.d_out, :] = self._kraus
        return Channel.from_kraus(padded, label=self.label)

    def transfer_distance(self, other: Union["Channel", SuperOperator]) -> float:
        """max |T_self - T_other| over all matrix units"""
        if self._transfer.shape != other.transfer.shape:
            raise DimensionError(f"Shapes differ: {self._transfer.shape} vs {other.transfer.shape}")
        return max_abs(self._transfer - other.transfer)

    def __repr__(self) -> str:
        return (
            f"Channel(label={self.label!r}, d_in={self.d_in}, d_out={self.d_out}, "
            f"d_env={self.d_env})"
        )


def channel_from_isometry(isometry: Isometry) -> tuple[Channel, Channel]:
    """The complementary pair (N, N^c) generated by one isometry"""
    channel = Channel(isometry)
    return channel, channel.complementary()


def transfer_of(n: Union[Channel, SuperOperator]) -> CMatrix:
    return n.transfer


def choi_of(n: Union[Channel, SuperOperator]) -> CMatrix:
    return n.choi

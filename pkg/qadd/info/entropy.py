"""
Entropic functionals in bits
"""

import math
from typing import Sequence

import numpy as np

from qadd.channels.base import Channel
from qadd.core.linalg import (
    CMatrix,
    MatrixFunction,
    as_matrix,
    matrix_fn,
    psd_check,
    reduced_state,
    support_projector,
    symmetrize,
    trace_norm,
)
from qadd.config import settings
from qadd.info.states import Ensemble, validate_state
from qadd.middleware.error_handler import DimensionError, InvalidStateError, ParameterError

OFF_SUPPORT_MASS = 1e-9


def entropy_of_spectrum(values: np.ndarray) -> float:
    """-sum p log2 p over eigenvalues above the zero cutoff"""
    p = np.asarray(values, dtype=float)
    p = p[p > settings.ZERO_CUTOFF]
    return float(-np.sum(p * np.log2(p)))


def _entropy(m: CMatrix) -> float:
    return entropy_of_spectrum(np.linalg.eigvalsh(symmetrize(m)))


def entropy(rho: CMatrix, validate: bool = True) -> float:
    """von Neumann entropy S(rho) = -Tr rho log2 rho"""
    m = validate_state(rho) if validate else as_matrix(rho)
    return _entropy(m)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x)"""
    if not -1e-12 <= x <= 1 + 1e-12:
        raise ParameterError(f"binary_entropy needs x in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    return entropy_of_spectrum(np.array([x, 1.0 - x]))


def relative_entropy(rho: CMatrix, sigma: CMatrix) -> float:
    """
    Umegaki relative entropy D(rho || sigma)

    Args:
        rho: density matrix
        sigma: PSD matrix of the same dimension

    Returns:
        D in bits, or math.inf when rho has mass off the support of sigma
    """
    rho = validate_state(rho)
    sigma = symmetrize(as_matrix(sigma))
    if sigma.shape != rho.shape:
        raise DimensionError(f"Shapes differ: {rho.shape} vs {sigma.shape}")
    check = psd_check(sigma, 1e-10)
    if not check.is_psd:
        raise InvalidStateError(f"sigma is not PSD: eigenvalue {check.min_eigenvalue:.3e}")
    projector = support_projector(sigma)
    off_support = float(np.trace(rho).real - np.trace(projector @ rho).real)
    if off_support > OFF_SUPPORT_MASS:
        return math.inf
    cross = float(np.trace(rho @ matrix_fn(sigma, MatrixFunction.LOG2)).real)
    return -_entropy(rho) - cross


def mutual_information(rho: CMatrix, dims: Sequence[int], validate: bool = True) -> float:
    """I(V;B) = S(V) + S(B) - S(VB) for dims (d_V, d_B)"""
    if len(dims) != 2:
        raise DimensionError(f"mutual_information needs two subsystem dimensions, got {dims}")
    m = validate_state(rho) if validate else as_matrix(rho)
    return (
        _entropy(reduced_state(m, dims, 0))
        + _entropy(reduced_state(m, dims, 1))
        - _entropy(m)
    )


def conditional_mutual_information(rho: CMatrix, dims: Sequence[int]) -> float:
    """I(V;B|W) = I(V;BW) - I(V;W) for dims (d_V, d_W, d_B)"""
    if len(dims) != 3:
        raise DimensionError(f"conditional_mutual_information needs three dimensions, got {dims}")
    d_v, d_w, d_b = dims
    m = validate_state(rho)
    joint = mutual_information(m, (d_v, d_w * d_b), validate=False)
    marginal = mutual_information(reduced_state(m, dims, (0, 1)), (d_v, d_w), validate=False)
    return joint - marginal


def coherent_information(rho: CMatrix, channel: Channel, validate: bool = True) -> float:
    """I_c(rho, N) = S(N(rho)) - S(N^c(rho))"""
    m = validate_state(rho) if validate else as_matrix(rho)
    joint = channel.stinespring_state(m)
    dims = (channel.d_out, channel.d_env)
    return _entropy(reduced_state(joint, dims, 0)) - _entropy(reduced_state(joint, dims, 1))


def holevo_information(ensemble: Ensemble, channel: Channel) -> float:
    """I(X;B) of the classical-quantum state sum_x p_x |x><x| (x) N(rho_x)"""
    if ensemble.dim != channel.d_in:
        raise DimensionError(f"Ensemble dimension {ensemble.dim} for channel input {channel.d_in}")
    outputs = [channel.apply(rho) for rho in ensemble.states]
    average = sum(p * out for p, out in zip(ensemble.probabilities, outputs))
    return _entropy(average) - sum(
        p * _entropy(out) for p, out in zip(ensemble.probabilities, outputs)
    )


def private_information(ensemble: Ensemble, channel: Channel) -> float:
    """I(X;B) - I(X;E)"""
    return holevo_information(ensemble, channel) - holevo_information(
        ensemble, channel.complementary()
    )


def telescoping_check(rho: CMatrix, dims: Sequence[int]) -> float:
    """
    Residual of the telescoping identity for S(B_1..B_n) - S(E_1..E_n)

    Args:
        rho: state on B_1 .. B_n (x) E_1 .. E_n
        dims: the 2n local dimensions in that order

    Returns:
        |S(B) - S(E) - sum_i (S(B_i V_i) - S(E_i V_i))| with
        V_i = E_1 .. E_{i-1} B_{i+1} .. B_n
    """
    if len(dims) % 2 or len(dims) < 4:
        raise DimensionError(f"telescoping_check needs 2n >= 4 dimensions, got {dims}")
    m = validate_state(rho)
    n = len(dims) // 2
    b = list(range(n))
    e = list(range(n, 2 * n))

    def s(keep: list[int]) -> float:
        return _entropy(reduced_state(m, dims, keep))

    total = s(b) - s(e)
    terms = 0.0
    for i in range(n):
        v = e[:i] + b[i + 1 :]
        terms += s([b[i]] + v) - s([e[i]] + v)
    return abs(total - terms)


def trace_distance(rho: CMatrix, sigma: CMatrix) -> float:
    """1/2 ||rho - sigma||_1"""
    return 0.5 * trace_norm(as_matrix(rho) - as_matrix(sigma))


def continuity_bound(eps: float, d: int) -> float:
    """eps log2(d - 1) + h(eps), valid for eps <= 1 - 1/d"""
    if d < 2:
        raise ParameterError(f"continuity_bound needs d >= 2, got {d}")
    return eps * math.log2(d - 1) + binary_entropy(eps)

"""
Channel calculus: composition, tensor products, direct sums, flags, switches and recovery
"""

from typing import Optional, Sequence

import numpy as np
from loguru import logger

from qadd.channels.base import Channel, FlagStructure, SuperOperator
from qadd.core.linalg import (
    CMatrix,
    MatrixFunction,
    as_matrix,
    hermitian_eig,
    kron,
    matrix_fn,
    partial_trace,
    partial_transpose,
    zero_cutoff,
)
from qadd.info.states import validate_state
from qadd.middleware.error_handler import DimensionError, ParameterError


def compose(outer: Channel, inner: Channel, label: Optional[str] = None) -> Channel:
    """outer o inner, Kraus operators B_j A_i"""
    if inner.d_out != outer.d_in:
        raise DimensionError(f"Cannot compose: inner d_out={inner.d_out}, outer d_in={outer.d_in}")
    kraus = np.einsum("jcb,iba->jica", outer.kraus, inner.kraus)
    kraus = kraus.reshape(-1, outer.d_out, inner.d_in)
    return Channel.from_kraus(kraus, label=label or f"{outer.label}o{inner.label}")


def compose_all(*channels: Channel) -> Channel:
    """Compose right to left: compose_all(D, N, E) = D o N o E"""
    if not channels:
        raise DimensionError("compose_all needs at least one channel")
    result = channels[-1]
    for outer in reversed(channels[:-1]):
        result = compose(outer, result)
    return result


def tensor(first: Channel, second: Channel, label: Optional[str] = None) -> Channel:
    """first (x) second; the environment is E_first (x) E_second"""
    k1, b1, a1 = first.kraus.shape
    k2, b2, a2 = second.kraus.shape
    kraus = np.einsum("iab,jcd->ijacbd", first.kraus, second.kraus)
    kraus = kraus.reshape(k1 * k2, b1 * b2, a1 * a2)
    return Channel.from_kraus(kraus, label=label or f"{first.label}x{second.label}")


def link_product_compose(
    choi_outer: CMatrix, choi_inner: CMatrix, dims: tuple[int, int, int]
) -> CMatrix:
    """
    Choi matrix of outer o inner from the two Choi matrices

    J = Tr_B[(I_A (x) J_outer)(J_inner^{T_B} (x) I_C)] for inner: A -> B, outer: B -> C.

    Args:
        choi_outer: Choi matrix on B (x) C
        choi_inner: Choi matrix on A (x) B
        dims: (d_A, d_B, d_C)

    Returns:
        Choi matrix on A (x) C
    """
    d_a, d_b, d_c = dims
    j_outer = as_matrix(choi_outer)
    j_inner = as_matrix(choi_inner)
    if j_outer.shape != (d_b * d_c,) * 2 or j_inner.shape != (d_a * d_b,) * 2:
        raise DimensionError(f"Choi shapes {j_inner.shape}, {j_outer.shape} do not fit dims {dims}")
    left = kron(np.eye(d_a), j_outer)
    right = kron(partial_transpose(j_inner, (d_a, d_b), 1), np.eye(d_c))
    return partial_trace(left @ right, (d_a, d_b, d_c), 1)


def direct_sum(channels: Sequence[Channel], label: Optional[str] = None) -> Channel:
    """Block-diagonal channel; off-diagonal input blocks are annihilated"""
    if not channels:
        raise DimensionError("direct_sum needs at least one channel")
    d_in = sum(ch.d_in for ch in channels)
    d_out = sum(ch.d_out for ch in channels)
    blocks = []
    off_in = off_out = 0
    for ch in channels:
        for op in ch.kraus:
            embedded = np.zeros((d_out, d_in), dtype=np.complex128)
            embedded[off_out : off_out + ch.d_out, off_in : off_in + ch.d_in] = op
            blocks.append(embedded)
        off_in += ch.d_in
        off_out += ch.d_out
    name = label or "+".join(str(c.label) for c in channels)
    return Channel.from_kraus(np.stack(blocks), label=name)


def _check_probabilities(ps: Sequence[float]) -> tuple[float, ...]:
    probs = tuple(float(p) for p in ps)
    if not probs:
        raise ParameterError("Probability vector is empty")
    if any(p < -1e-12 for p in probs):
        raise ParameterError(f"Negative probability in {probs}")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise ParameterError(f"Probabilities sum to {sum(probs)}, not 1")
    return tuple(max(p, 0.0) for p in probs)


def _pad_kraus(channel: Channel, count: int) -> Channel:
    if channel.d_env == count:
        return channel
    padded = np.zeros((count, channel.d_out, channel.d_in), dtype=np.complex128)
    padded[: channel.d_env] = channel.kraus
    return Channel.from_kraus(
        padded, label=channel.label, family=channel.family, params=channel.params
    )


def flagged(
    ps: Sequence[float], channels: Sequence[Channel], label: Optional[str] = None
) -> Channel:
    """
    Flagged mixture sum_i p_i |i><i| (x) N_i

    Branch Kraus sets are padded with zero operators to a common length, so the
    complementary channel is the flagged mixture of the branch complementaries.

    Args:
        ps: branch probabilities
        channels: branch channels with common input and output dimensions
        label: display name

    Returns:
        Channel with output F (x) B carrying its flag structure
    """
    probs = _check_probabilities(ps)
    if len(probs) != len(channels):
        raise DimensionError(f"{len(probs)} probabilities for {len(channels)} channels")
    d_in, d_out = channels[0].d_in, channels[0].d_out
    if any(ch.d_in != d_in or ch.d_out != d_out for ch in channels):
        raise DimensionError("Flagged branches must share input and output dimensions")
    count = max(ch.d_env for ch in channels)
    branches = tuple(_pad_kraus(ch, count) for ch in channels)
    d_flag = len(branches)
    kraus = np.zeros((d_flag * count, d_flag * d_out, d_in), dtype=np.complex128)
    for i, (p, branch) in enumerate(zip(probs, branches)):
        rows = slice(i * d_out, (i + 1) * d_out)
        kraus[i * count : (i + 1) * count, rows, :] = np.sqrt(p) * branch.kraus
    return Channel.from_kraus(
        kraus,
        label=label or "flagged",
        flags=FlagStructure(probabilities=probs, branches=branches),
    )


def switch_channel(i: int, j: int, d_flag: int) -> SuperOperator:
    """S_ij(rho) = <j|rho|j> |i><i|"""
    if not (0 <= i < d_flag and 0 <= j < d_flag):
        raise DimensionError(f"Switch indices ({i}, {j}) out of range for flag dimension {d_flag}")
    target = np.zeros((d_flag, d_flag), dtype=np.complex128)
    target[i, i] = 1.0
    return SuperOperator.from_action(
        lambda rho: rho[j, j] * target, d_flag, d_flag, label=f"S{i}{j}"
    )


def switch_sum(
    terms: Sequence[tuple[float, int, int, Channel]],
    d_flag: int,
    d_flag_out: Optional[int] = None,
    label: Optional[str] = None,
) -> Channel:
    """
    Channel sum_k w_k S_{i_k j_k} (x) D_k

    Args:
        terms: (weight, output flag i, input flag j, branch channel)
        d_flag: input flag dimension
        d_flag_out: output flag dimension, defaults to d_flag
        label: display name

    Returns:
        Channel on F (x) B with Kraus operators sqrt(w) |i><j| (x) K
    """
    if not terms:
        raise DimensionError("switch_sum needs at least one term")
    d_flag_out = d_flag if d_flag_out is None else d_flag_out
    d_in, d_out = terms[0][3].d_in, terms[0][3].d_out
    ops = []
    for weight, i, j, branch in terms:
        if weight < -1e-12:
            raise ParameterError(f"Negative switch weight {weight}")
        if branch.d_in != d_in or branch.d_out != d_out:
            raise DimensionError("Switch branches must share dimensions")
        if not (0 <= i < d_flag_out and 0 <= j < d_flag):
            raise DimensionError(f"Switch indices ({i}, {j}) out of range")
        unit = np.zeros((d_flag_out, d_flag), dtype=np.complex128)
        unit[i, j] = 1.0
        for op in branch.kraus:
            ops.append(np.sqrt(max(weight, 0.0)) * np.kron(unit, op))
    return Channel.from_kraus(np.stack(ops), label=label or "switch")


def petz_recovery(channel: Channel, sigma: CMatrix) -> Channel:
    """
    Petz recovery map of a channel at a reference state

    R(X) = sigma^{1/2} N*(N(sigma)^{-1/2} X N(sigma)^{-1/2}) sigma^{1/2} on the
    support of N(sigma); off that support the map prepares sigma, which keeps R
    trace preserving without changing R(N(sigma)) = sigma.

    Args:
        channel: channel N
        sigma: reference state on the input of N

    Returns:
        Recovery channel from the output of N back to its input
    """
    sigma = validate_state(sigma)
    if sigma.shape[0] != channel.d_in:
        raise DimensionError(
            f"State of dimension {sigma.shape[0]} for channel input {channel.d_in}"
        )
    image = channel.apply(sigma)
    sigma_half = matrix_fn(sigma, MatrixFunction.SQRT)
    image_inv_half = matrix_fn(image, MatrixFunction.INV_SQRT, pseudo_inverse=True)
    ops = [sigma_half @ op.conj().T @ image_inv_half for op in channel.kraus]

    image_eig = hermitian_eig(image)
    kernel = image_eig.eigenvectors[:, image_eig.eigenvalues <= zero_cutoff(image)]
    if kernel.shape[1]:
        sigma_eig = hermitian_eig(sigma)
        for weight, vector in zip(sigma_eig.eigenvalues, sigma_eig.eigenvectors.T):
            if weight <= zero_cutoff(sigma):
                continue
            for q in kernel.T:
                ops.append(np.sqrt(weight) * np.outer(vector, q.conj()))
        logger.debug(f"Petz recovery completed on a {kernel.shape[1]}-dimensional kernel")
    return Channel.from_kraus(np.stack(ops), label=f"petz({channel.label})")


def symmetric_extension(channel: Channel) -> Channel:
    """1/2 |0><0| (x) N + 1/2 |1><1| (x) N^c, outputs embedded in a common space"""
    complement = channel.complementary()
    d = max(channel.d_out, complement.d_out)
    return flagged(
        [0.5, 0.5],
        [channel.embed_output(d), complement.embed_output(d)],
        label=f"sym({channel.label})",
    )

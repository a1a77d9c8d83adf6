"""
Qutrit Platypus channels N_{s,t}
"""

import math
from typing import Optional

import numpy as np

from qadd.channels.base import Channel, transfer_to_choi
from qadd.config import settings
from qadd.core.linalg import max_abs, psd_check
from qadd.middleware.error_handler import ParameterError
from qadd.models.schemas import Certificate, SideCertificate
from qadd.zoo.base import SIMPLEX_SLACK, ChannelFamily

Basis = tuple[int, int]

# Columns of T_N for |2><1| and |1><2|; zero for every (s, t)
ZERO_COLUMNS = (5, 7)


def _check_simplex(s: float, t: float) -> tuple[float, float, float]:
    if s < 0 or t < 0 or s + t > 1.0 + SIMPLEX_SLACK:
        raise ParameterError(f"Need s, t >= 0 and s + t <= 1, got s={s}, t={t}")
    return float(s), float(t), max(0.0, 1.0 - s - t)


def platypus_isometry(s: float, t: float) -> np.ndarray:
    """
    F|0> = sqrt(s)|00> + sqrt(1-s-t)|11> + sqrt(t)|22>, F|1> = |20>, F|2> = |21>
    """
    s, t, r = _check_simplex(s, t)
    v = np.zeros((9, 3), dtype=np.complex128)
    v[0, 0] = math.sqrt(s)
    v[4, 0] = math.sqrt(r)
    v[8, 0] = math.sqrt(t)
    v[6, 1] = 1.0
    v[7, 2] = 1.0
    return v


def platypus(s: float, t: float) -> Channel:
    return Channel.from_isometry(
        platypus_isometry(s, t),
        d_out=3,
        d_env=3,
        label=f"Platypus({s:g},{t:g})",
        family=ChannelFamily.PLATYPUS,
        params={"s": float(s), "t": float(t)},
    )


def _unit(i: int, j: int) -> np.ndarray:
    out = np.zeros((3, 3), dtype=np.complex128)
    out[i, j] = 1.0
    return out


def platypus_kraus(s: float, t: float) -> np.ndarray:
    """E0 = sqrt(s)|0><0| + |2><1|, E1 = sqrt(1-s-t)|1><0| + |2><2|, E2 = sqrt(t)|2><0|"""
    s, t, r = _check_simplex(s, t)
    return np.stack(
        [
            math.sqrt(s) * _unit(0, 0) + _unit(2, 1),
            math.sqrt(r) * _unit(1, 0) + _unit(2, 2),
            math.sqrt(t) * _unit(2, 0),
        ]
    )


def platypus_complementary_kraus(s: float, t: float) -> np.ndarray:
    """sqrt(s)|0><0|, sqrt(1-s-t)|1><0|, sqrt(t)|2><0| + |0><1| + |1><2|"""
    s, t, r = _check_simplex(s, t)
    return np.stack(
        [
            math.sqrt(s) * _unit(0, 0),
            math.sqrt(r) * _unit(1, 0),
            math.sqrt(t) * _unit(2, 0) + _unit(0, 1) + _unit(1, 2),
        ]
    )


def platypus_subchannel_basis(s: float, t: float) -> Basis:
    """span{|0>,|1>} when s >= (1-t)/2, else span{|0>,|2>}"""
    s, t, _ = _check_simplex(s, t)
    return (0, 1) if s >= (1.0 - t) / 2.0 else (0, 2)


def platypus_subchannel(s: float, t: float, basis: Optional[Basis] = None) -> Channel:
    """Restriction of N_{s,t} to a two-dimensional input subspace"""
    basis = platypus_subchannel_basis(s, t) if basis is None else basis
    return platypus(s, t).restrict(basis, label=f"Platypus({s:g},{t:g})|{basis}")


def platypus_diagonal_state(u: float, basis: Basis) -> np.ndarray:
    """u |0><0| + (1-u) |b><b| on the qutrit for basis (0, b)"""
    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[basis[0], basis[0]] = u
    rho[basis[1], basis[1]] = 1.0 - u
    return rho


def swap_damping(a: int, b: int, other: int, rate: float, label: Optional[str] = None) -> Channel:
    """
    Qutrit channel exchanging levels a and b, returning a fraction of a to b

    Kraus operators |a><b| + sqrt(rate)|b><a|, sqrt(1-rate)|a><a| and |other><other|.
    """
    if not 0.0 <= rate <= 1.0 + SIMPLEX_SLACK:
        raise ParameterError(f"Swap-damping rate must lie in [0, 1], got {rate}")
    rate = min(rate, 1.0)
    return Channel.from_kraus(
        [
            _unit(a, b) + math.sqrt(rate) * _unit(b, a),
            math.sqrt(1.0 - rate) * _unit(a, a),
            _unit(other, other),
        ],
        label=label or f"swap-damping({a}{b},{rate:g})",
    )


def platypus_subchannel_degrading_map(
    s: float, t: float, basis: Optional[Basis] = None
) -> Channel:
    """
    D with D o N_sub = N_sub^c

    On span{|0>,|1>} this needs t <= s, on span{|0>,|2>} it needs t <= 1-s-t.
    """
    s, t, r = _check_simplex(s, t)
    basis = platypus_subchannel_basis(s, t) if basis is None else basis
    if basis == (0, 1):
        if t > s + SIMPLEX_SLACK or s == 0.0:
            raise ParameterError(f"Subchannel on (0, 1) is not degradable at s={s}, t={t}")
        return swap_damping(0, 2, 1, t / s, label="subchannel degrading map")
    if t > r + SIMPLEX_SLACK or r == 0.0:
        raise ParameterError(f"Subchannel on (0, 2) is not degradable at s={s}, t={t}")
    return swap_damping(1, 2, 0, t / r, label="subchannel degrading map")


def platypus_subchannel_antidegrading_map(
    s: float, t: float, basis: Optional[Basis] = None
) -> Channel:
    """
    D with D o N_sub^c = N_sub

    On span{|0>,|1>} this needs s <= t, on span{|0>,|2>} it needs t >= 1-s-t.
    """
    s, t, r = _check_simplex(s, t)
    basis = platypus_subchannel_basis(s, t) if basis is None else basis
    if t == 0.0:
        raise ParameterError("Subchannel is not anti-degradable at t=0")
    if basis == (0, 1):
        if s > t + SIMPLEX_SLACK:
            raise ParameterError(f"Subchannel on (0, 1) is not anti-degradable at s={s}, t={t}")
        return swap_damping(2, 0, 1, s / t, label="subchannel anti-degrading map")
    if r > t + SIMPLEX_SLACK:
        raise ParameterError(f"Subchannel on (0, 2) is not anti-degradable at s={s}, t={t}")
    return swap_damping(2, 1, 0, r / t, label="subchannel anti-degrading map")


def platypus_subchannel_simulator(s: float, t: float) -> tuple[Channel, Basis]:
    """
    Qutrit-to-qubit channel A with N_sub o A = N_{s,t}

    Exists for s + t = 1 (subchannel on span{|0>,|1>}) and for s = 0 (span{|0>,|2>}).

    Returns:
        (A, basis of the subchannel it feeds)
    """
    s, t, r = _check_simplex(s, t)
    if r <= SIMPLEX_SLACK:
        keep, fold = 1, 2
        basis: Basis = (0, 1)
    elif s <= SIMPLEX_SLACK:
        keep, fold = 2, 1
        basis = (0, 2)
    else:
        raise ParameterError(f"No subchannel simulator unless s + t = 1 or s = 0, got s={s}, t={t}")
    k0 = np.zeros((2, 3), dtype=np.complex128)
    k0[0, 0] = 1.0
    k0[1, keep] = 1.0
    k1 = np.zeros((2, 3), dtype=np.complex128)
    k1[1, fold] = 1.0
    return Channel.from_kraus([k0, k1], label="subchannel simulator"), basis


def platypus_antideg_certificate(s: float, t: float) -> Certificate:
    """
    Closed-form degradability certificate of N_{s,t}

    Degradability is refuted by the zero columns of T_N, which are nonzero in
    T_{N^c}. The anti-degrading candidate T_N T_{N^c}^{-1} is unique because
    T_{N^c} is invertible for t > 0; it is a channel iff t >= 1/2.

    Args:
        s: weight of |00> in F|0>
        t: weight of |22> in F|0>

    Returns:
        Certificate; Indeterminate on the anti-degradable side at t = 0
    """
    s, t, _ = _check_simplex(s, t)
    channel = platypus(s, t)
    complement = channel.complementary()
    tol = settings.CERTIFICATE_TOL

    witness_columns = [
        j
        for j in ZERO_COLUMNS
        if max_abs(channel.transfer[:, j]) <= tol and max_abs(complement.transfer[:, j]) > tol
    ]
    degradable = SideCertificate(
        certified=False if witness_columns else None,
        method="kernel inclusion",
        witness=(
            f"columns {witness_columns} of T_N vanish while those of T_N^c do not"
            if witness_columns
            else None
        ),
    )

    if t <= 0.0:
        anti = SideCertificate(
            certified=None,
            method="transfer inversion",
            witness="T_N^c is not invertible at t=0",
        )
        return Certificate(degradable=degradable, anti_degradable=anti)

    candidate = channel.transfer @ np.linalg.inv(complement.transfer)
    choi = transfer_to_choi(candidate, 3, 3)
    check = psd_check(choi, tol)
    if check.is_psd:
        anti_map = Channel.from_choi(choi, 3, 3, label="platypus anti-degrading map")
        anti = SideCertificate(
            certified=True,
            method="transfer inversion",
            map=anti_map,
            residual=max_abs(anti_map.transfer @ complement.transfer - channel.transfer),
            min_eigenvalue=check.min_eigenvalue,
        )
    else:
        anti = SideCertificate(
            certified=False,
            method="transfer inversion",
            min_eigenvalue=check.min_eigenvalue,
            witness=(
                "Choi matrix of the unique anti-degrading candidate has eigenvalue "
                f"{check.min_eigenvalue:.6g}"
            ),
        )
    return Certificate(degradable=degradable, anti_degradable=anti)

"""
Qubit amplitude damping: channel, inverse, compositions and a recovered channel
"""

import math

import numpy as np

from qadd.channels.base import Channel, SuperOperator
from qadd.channels.calculus import compose, petz_recovery
from qadd.info.states import validate_state
from qadd.middleware.error_handler import ParameterError
from qadd.zoo.base import ChannelFamily


def _check_gamma(gamma: float, name: str = "gamma") -> float:
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {gamma}")
    return float(gamma)


def amplitude_damping_isometry(gamma: float) -> np.ndarray:
    """U|0> = |00>, U|1> = sqrt(1-gamma)|10> + sqrt(gamma)|01> on B (x) E"""
    gamma = _check_gamma(gamma)
    v = np.zeros((4, 2), dtype=np.complex128)
    v[0, 0] = 1.0
    v[2, 1] = math.sqrt(1.0 - gamma)
    v[1, 1] = math.sqrt(gamma)
    return v


def amplitude_damping(gamma: float) -> Channel:
    """A_gamma; its complementary channel is A_{1-gamma}"""
    return Channel.from_isometry(
        amplitude_damping_isometry(gamma),
        d_out=2,
        d_env=2,
        label=f"AD({gamma:g})",
        family=ChannelFamily.AMPLITUDE_DAMPING,
        params={"gamma": float(gamma)},
    )


def ad_transfer(gamma: float) -> np.ndarray:
    """Closed-form transfer matrix of A_gamma"""
    gamma = _check_gamma(gamma)
    root = math.sqrt(1.0 - gamma)
    return np.array(
        [
            [1.0, 0.0, 0.0, gamma],
            [0.0, root, 0.0, 0.0],
            [0.0, 0.0, root, 0.0],
            [0.0, 0.0, 0.0, 1.0 - gamma],
        ],
        dtype=np.complex128,
    )


def ad_inverse(gamma: float) -> SuperOperator:
    """A_gamma^{-1}; a linear map that is never CP for gamma > 0"""
    gamma = _check_gamma(gamma)
    if gamma >= 1.0:
        raise ParameterError("A_1 is not invertible")
    return ad_compose_inverse(0.0, gamma)


def ad_compose_inverse(gamma2: float, gamma1: float) -> SuperOperator:
    """
    A_{gamma2} o A_{gamma1}^{-1} in closed form

    Equals A_{(gamma2 - gamma1) / (1 - gamma1)}, which is a channel iff gamma1 <= gamma2.

    Args:
        gamma2: damping of the outer channel
        gamma1: damping of the inverted channel, below 1

    Returns:
        SuperOperator on a qubit
    """
    gamma2 = _check_gamma(gamma2, "gamma2")
    gamma1 = _check_gamma(gamma1, "gamma1")
    if gamma1 >= 1.0:
        raise ParameterError("A_1 is not invertible")
    ratio = (1.0 - gamma2) / (1.0 - gamma1)
    transfer = np.array(
        [
            [1.0, 0.0, 0.0, (gamma2 - gamma1) / (1.0 - gamma1)],
            [0.0, math.sqrt(ratio), 0.0, 0.0],
            [0.0, 0.0, math.sqrt(ratio), 0.0],
            [0.0, 0.0, 0.0, ratio],
        ],
        dtype=np.complex128,
    )
    return SuperOperator(transfer, 2, 2, label=f"AD({gamma2:g})oAD({gamma1:g})^-1")


def recovered_ad_channel(gamma: float, rho_b: np.ndarray) -> Channel:
    """
    R o A_{gamma'} with gamma' = (1 - 2 gamma) / (1 - gamma) and R the Petz
    recovery of A_{gamma'} at rho_b

    Kraus operators are R_i E_j in the order 2 i + j when A_{gamma'}(rho_b) has full rank.
    """
    gamma = _check_gamma(gamma)
    if gamma > 0.5:
        raise ParameterError(f"gamma must not exceed 1/2, got {gamma}")
    damping = (1.0 - 2.0 * gamma) / (1.0 - gamma)
    inner = amplitude_damping(damping)
    recovery = petz_recovery(inner, validate_state(rho_b))
    return compose(recovery, inner, label=f"recovered AD({gamma:g})")


def recovered_ad_kraus_11(damping: float, p: float, delta: complex) -> np.ndarray:
    """
    Closed form of the Kraus operator R_1 E_1 of the recovered channel

    Args:
        damping: gamma' of the inner amplitude damping
        p: population <1|rho_b|1>
        delta: coherence <0|rho_b|1>

    Returns:
        2x2 Kraus operator
    """
    det_in = p * (1.0 - p) - abs(delta) ** 2
    det_out = (1.0 - damping) * det_in + damping * (1.0 - damping) * p**2
    if det_in <= 0 or det_out <= 0:
        raise ParameterError("Closed form needs full-rank rho_b and A(rho_b)")
    root_in, root_out = math.sqrt(det_in), math.sqrt(det_out)
    scale = damping * ((1.0 - damping) * p + root_out) / (
        root_out * math.sqrt(1.0 + 2.0 * root_in) * math.sqrt(1.0 + 2.0 * root_out)
    )
    return scale * np.array([[0.0, delta], [0.0, p + root_in]], dtype=np.complex128)

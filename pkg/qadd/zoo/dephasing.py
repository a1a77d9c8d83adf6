"""
Qubit dephasing and the ququart-to-qutrit channel it simulates
"""

import numpy as np

from qadd.channels.base import Channel, SuperOperator
from qadd.info.entropy import binary_entropy
from qadd.middleware.error_handler import ParameterError
from qadd.zoo.base import ChannelFamily

PAULI_Z = np.diag([1.0, -1.0]).astype(np.complex128)


def _check_alpha(alpha: float) -> float:
    if not -1.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must lie in [-1, 1], got {alpha}")
    return float(alpha)


def dephasing(alpha: float) -> Channel:
    """D_alpha: off-diagonal entries scaled by alpha"""
    alpha = _check_alpha(alpha)
    kraus = [
        np.sqrt((1.0 + alpha) / 2.0) * np.eye(2, dtype=np.complex128),
        np.sqrt((1.0 - alpha) / 2.0) * PAULI_Z,
    ]
    return Channel.from_kraus(
        kraus,
        label=f"Deph({alpha:g})",
        family=ChannelFamily.DEPHASING,
        params={"alpha": alpha},
    )


def q1_dephasing(alpha: float) -> float:
    """Q1(D_alpha) = 1 - h((1 + alpha) / 2)"""
    alpha = _check_alpha(alpha)
    return 1.0 - binary_entropy((1.0 + alpha) / 2.0)


def _gao_action(alpha: float):
    def action(a: np.ndarray) -> np.ndarray:
        out = np.zeros((3, 3), dtype=np.complex128)
        out[0, 0] = a[0, 0] + a[1, 1]
        out[0, 1] = alpha * a[0, 2]
        out[0, 2] = alpha * a[1, 3]
        out[1, 0] = alpha * a[2, 0]
        out[1, 1] = a[2, 2]
        out[2, 0] = alpha * a[3, 1]
        out[2, 2] = a[3, 3]
        return out

    return action


def gao_channel(alpha: float) -> Channel:
    """Phi_alpha on a ququart, tabulated from its action on matrix units"""
    alpha = _check_alpha(alpha)
    tabulated = SuperOperator.from_action(_gao_action(alpha), 4, 3).to_channel()
    return Channel(
        tabulated.isometry,
        label=f"Gao({alpha:g})",
        family=ChannelFamily.GAO,
        params={"alpha": alpha},
    )


def gao_factorization(alpha: float) -> tuple[Channel, Channel]:
    """
    Encoder E and decoder D with D o (D_alpha + D_alpha) o E = Phi_alpha

    Args:
        alpha: dephasing parameter in [-1, 1]

    Returns:
        (E, D): the permutation unitary exchanging levels 1 and 2, and the
        ququart-to-qutrit channel with Kraus operators |0><0| + |1><1| and
        |0><2| + |2><3|
    """
    _check_alpha(alpha)
    permutation = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]
    encoder = Channel.unitary(permutation, label="swap12")
    k0 = np.zeros((3, 4), dtype=np.complex128)
    k0[0, 0] = k0[1, 1] = 1.0
    k1 = np.zeros((3, 4), dtype=np.complex128)
    k1[0, 2] = k1[2, 3] = 1.0
    decoder = Channel.from_kraus([k0, k1], label="gao decoder")
    return encoder, decoder


def gao_witness_state() -> np.ndarray:
    """1/2 |0><0| + 1/2 |2><2|, reaching Q1(D_alpha) on Phi_alpha"""
    return np.diag([0.5, 0.0, 0.5, 0.0]).astype(np.complex128)

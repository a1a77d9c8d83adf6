"""
Qutrit multi-level amplitude damping
"""

import math

import numpy as np

from qadd.channels.base import Channel
from qadd.middleware.error_handler import ParameterError
from qadd.zoo.base import SIMPLEX_SLACK, ChannelFamily


def _check_simplex(gamma0: float, gamma1: float) -> tuple[float, float, float]:
    if gamma0 < 0 or gamma1 < 0 or gamma0 + gamma1 > 1.0 + SIMPLEX_SLACK:
        raise ParameterError(
            f"Need gamma0, gamma1 >= 0 and gamma0 + gamma1 <= 1, got {gamma0}, {gamma1}"
        )
    return float(gamma0), float(gamma1), max(0.0, 1.0 - gamma0 - gamma1)


def mad_channel(gamma0: float, gamma1: float) -> Channel:
    """
    U|0> = |00>, U|1> = |10>,
    U|2> = sqrt(gamma2)|20> + sqrt(gamma1)|11> + sqrt(gamma0)|02>
    """
    gamma0, gamma1, gamma2 = _check_simplex(gamma0, gamma1)
    v = np.zeros((9, 3), dtype=np.complex128)
    v[0, 0] = 1.0
    v[3, 1] = 1.0
    v[6, 2] = math.sqrt(gamma2)
    v[4, 2] = math.sqrt(gamma1)
    v[2, 2] = math.sqrt(gamma0)
    return Channel.from_isometry(
        v,
        d_out=3,
        d_env=3,
        label=f"MAD({gamma0:g},{gamma1:g})",
        family=ChannelFamily.MAD,
        params={"gamma0": gamma0, "gamma1": gamma1},
    )


def mad_degradable_simulator(gamma0: float, gamma1: float) -> tuple[float, float]:
    """Rates (gamma0', gamma1') summing to 1/2 whose channel simulates MAD(gamma0, gamma1)"""
    gamma0, gamma1, gamma2 = _check_simplex(gamma0, gamma1)
    if gamma2 >= 0.5:
        raise ParameterError(f"A degradable simulator needs gamma2 < 1/2, got {gamma2}")
    total = 2.0 * (gamma0 + gamma1)
    return gamma0 / total, gamma1 / total


def mad_simulation(gamma0: float, gamma1: float) -> tuple[Channel, Channel, Channel]:
    """
    (N_hat, E, D) with D o N_hat o E = MAD(gamma0, gamma1)

    N_hat is the simulator channel, E the identity and D a further damping with
    rates 2 (gamma_k - gamma_k').
    """
    sim0, sim1 = mad_degradable_simulator(gamma0, gamma1)
    post0 = max(0.0, 2.0 * (gamma0 - sim0))
    post1 = max(0.0, 2.0 * (gamma1 - sim1))
    return mad_channel(sim0, sim1), Channel.identity(3), mad_channel(post0, post1)

"""
Erasure channels E_{d,lambda} with the erasure flag as last basis vector
"""

import math

import numpy as np

from qadd.channels.base import Channel
from qadd.middleware.error_handler import ParameterError
from qadd.zoo.base import ChannelFamily


def _check(d: int, lam: float) -> None:
    if d < 2:
        raise ParameterError(f"Erasure input dimension must be at least 2, got {d}")
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"Erasure probability must lie in [0, 1], got {lam}")


def erasure_isometry(d: int, lam: float) -> np.ndarray:
    """|i> -> sqrt(1-lam)|i>_B|e>_E + sqrt(lam)|e>_B|i>_E with |e> = |d>"""
    _check(d, lam)
    side = d + 1
    v = np.zeros((side * side, d), dtype=np.complex128)
    for i in range(d):
        v[i * side + d, i] = math.sqrt(1.0 - lam)
        v[d * side + i, i] = math.sqrt(lam)
    return v


def erasure(d: int, lam: float) -> Channel:
    """E(rho) = (1-lam) rho + lam Tr(rho) |e><e|; the complementary is E_{d,1-lam}"""
    return Channel.from_isometry(
        erasure_isometry(d, lam),
        d_out=d + 1,
        d_env=d + 1,
        label=f"Erasure({d},{lam:g})",
        family=ChannelFamily.ERASURE,
        params={"d": float(d), "lam": float(lam)},
    )


def q1_erasure(lam: float, d: int = 2) -> float:
    """Q1(E_{d,lam}) = max(0, 1 - 2 lam) log2 d"""
    _check(d, lam)
    return max(0.0, 1.0 - 2.0 * lam) * math.log2(d)

"""
Seeded random generators and random quantum objects
"""

import numpy as np
from scipy.stats import unitary_group

from qadd.middleware.error_handler import ParameterError

_KEY_LIMIT = 2**64


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Counter-based generator keyed by (seed, stream)

    Args:
        seed: 64-bit experiment seed
        stream: 64-bit substream, e.g. a grid index

    Returns:
        numpy Generator backed by Philox
    """
    if not 0 <= seed < _KEY_LIMIT or not 0 <= stream < _KEY_LIMIT:
        raise ParameterError(f"seed and stream must lie in [0, 2**64): {seed}, {stream}")
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(stream)))


def random_pure_state(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random unit vector"""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density_matrix(
    rng: np.random.Generator, d: int, rank: int | None = None
) -> np.ndarray:
    """Induced-measure density matrix G G^dagger / Tr, full rank unless rank is given"""
    k = d if rank is None else rank
    if not 1 <= k <= d:
        raise ParameterError(f"rank must lie in [1, {d}], got {k}")
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random unitary"""
    if d == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(d, random_state=rng), dtype=np.complex128)


def random_isometry(rng: np.random.Generator, d_in: int, d_out: int) -> np.ndarray:
    """First d_in columns of a Haar unitary on d_out"""
    if d_in > d_out:
        raise ParameterError(f"An isometry needs d_in <= d_out, got {d_in} > {d_out}")
    return random_unitary(rng, d_out)[:, :d_in]

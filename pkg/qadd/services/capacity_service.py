"""
Coherent and private information maximization
"""

import itertools
import math
from typing import Callable, Optional

import numpy as np
from loguru import logger
from scipy.optimize import minimize, minimize_scalar

from qadd.channels.base import Channel
from qadd.config import settings
from qadd.core.linalg import CMatrix
from qadd.core.random import make_rng
from qadd.info.entropy import coherent_information, private_information
from qadd.info.states import Ensemble, basis_state
from qadd.middleware.error_handler import DimensionError, OptimizationError, ParameterError
from qadd.models.schemas import OptimizationReport, OptimizationStrategy, PrivateInfoOptimum
from qadd.zoo.base import DIAGONAL_OPTIMAL, ChannelFamily
from qadd.zoo.platypus import platypus, platypus_diagonal_state, platypus_subchannel_basis

DIAGONAL_GRID_POINTS = 5000
DIAGONAL_POLISH = 3
RESTRICTED_GRID = 201
RESTRICTED_XATOL = 1e-10
TWO_STATE_GRID = 21
RESTART_SPREAD_TOL = 1e-6


def _state_from_factor(x: np.ndarray, d: int) -> CMatrix:
    """
    rho = L L^dagger / Tr for lower-triangular L

    Parameters are d real diagonal entries followed by d(d-1) off-diagonal ones.
    """
    factor = np.zeros((d, d), dtype=np.complex128)
    factor[np.diag_indices(d)] = x[:d]
    rows, cols = np.tril_indices(d, -1)
    m = len(rows)
    factor[rows, cols] = x[d : d + m] + 1j * x[d + m :]
    rho = factor @ factor.conj().T
    trace = float(np.trace(rho).real)
    if trace < 1e-300:
        return np.eye(d, dtype=np.complex128) / d
    return rho / trace


def _diagonal_from_weights(y: np.ndarray) -> CMatrix:
    w = np.asarray(y, dtype=float) ** 2
    total = w.sum()
    if total < 1e-300:
        w = np.ones_like(w)
        total = w.sum()
    return np.diag(w / total).astype(np.complex128)


def _simplex_resolution(d: int, max_points: int) -> int:
    """Largest n with C(n + d - 1, d - 1) <= max_points"""
    n = 1
    while n < 200 and math.comb(n + d, d - 1) <= max_points:
        n += 1
    return n


def _simplex_grid(d: int, n: int) -> np.ndarray:
    """All weight vectors k / n with k a composition of n into d parts (stars and bars)"""
    points = []
    for bars in itertools.combinations(range(n + d - 1), d - 1):
        edges = (-1,) + bars + (n + d - 1,)
        points.append([edges[k + 1] - edges[k] - 1 for k in range(d)])
    return np.asarray(points, dtype=float) / n


class CapacityService:
    """Service for maximizing coherent information and two-state private information"""

    def __init__(
        self,
        seed: Optional[int] = None,
        restarts: Optional[int] = None,
        tol: Optional[float] = None,
        max_iterations: Optional[int] = None,
    ):
        self.seed = settings.DEFAULT_SEED if seed is None else seed
        self.restarts = settings.MULTISTART_RESTARTS if restarts is None else restarts
        self.tol = settings.SIMPLEX_TOL if tol is None else tol
        self.max_iterations = settings.MAX_ITERATIONS if max_iterations is None else max_iterations

    def _nelder_mead(self, objective: Callable[[np.ndarray], float], x0: np.ndarray):
        return minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": self.tol,
                "fatol": self.tol,
                "maxiter": self.max_iterations,
                "maxfev": self.max_iterations,
                "adaptive": True,
            },
        )

    def q1(
        self,
        channel: Channel,
        strategy: OptimizationStrategy = OptimizationStrategy.AUTO,
        stream: int = 0,
        degradable: bool = False,
    ) -> OptimizationReport:
        """
        Maximize I_c(rho, N) over input states

        Args:
            channel: channel N
            strategy: auto, diagonal_grid or multistart
            stream: random substream for multistart initial points
            degradable: N is certified degradable, so multistart restarts must agree

        Returns:
            OptimizationReport whose value is I_c re-evaluated at the argmax
        """
        try:
            strategy = OptimizationStrategy(strategy)
            if strategy == OptimizationStrategy.DIAGONAL_GRID:
                return self.q1_diagonal(channel)
            if strategy == OptimizationStrategy.MULTISTART:
                return self.q1_multistart(channel, stream=stream, degradable=degradable)

            if channel.family == ChannelFamily.PLATYPUS and channel.params is not None:
                return self.platypus_restricted_report(channel.params["s"], channel.params["t"])
            if channel.family in DIAGONAL_OPTIMAL:
                return self.q1_diagonal(channel)
            return self.q1_multistart(channel, stream=stream, degradable=degradable)

        except Exception as e:
            logger.error(f"Error maximizing coherent information of {channel.label}: {e}")
            raise

    def q1_multistart(
        self,
        channel: Channel,
        restarts: Optional[int] = None,
        stream: int = 0,
        degradable: bool = False,
    ) -> OptimizationReport:
        """
        Nelder-Mead over Cholesky-like factors from random starting points

        Args:
            channel: channel N with d_in <= MAX_MULTISTART_DIM
            restarts: number of random starts, defaults to the service setting
            stream: random substream
            degradable: N is certified degradable; I_c is then concave and restarts
                spreading by more than RESTART_SPREAD_TOL are flagged in the warning

        Returns:
            OptimizationReport with per-restart best values
        """
        d = channel.d_in
        if d > settings.MAX_MULTISTART_DIM:
            raise DimensionError(
                f"Multistart needs d_in <= {settings.MAX_MULTISTART_DIM}, got {d}"
            )
        restarts = self.restarts if restarts is None else restarts
        if restarts < 1:
            raise ParameterError(f"restarts must be positive, got {restarts}")

        def objective(x: np.ndarray) -> float:
            return -coherent_information(_state_from_factor(x, d), channel, validate=False)

        rng = make_rng(self.seed, stream)
        starts = [np.concatenate([np.ones(d), np.zeros(d * d - d)])]
        starts += [rng.standard_normal(d * d) for _ in range(restarts - 1)]

        best_x: Optional[np.ndarray] = None
        best_value = -math.inf
        best_success = False
        values = []
        for k, x0 in enumerate(starts):
            result = self._nelder_mead(objective, x0)
            value = -float(result.fun)
            values.append(value)
            logger.debug(f"restart {k}: I_c={value:.12f} nfev={result.nfev}")
            if value > best_value:
                best_value, best_x, best_success = value, result.x, bool(result.success)

        if best_x is None or not math.isfinite(best_value):
            raise OptimizationError(f"No finite coherent information found for {channel.label}")

        polish = self._nelder_mead(objective, best_x)
        if -float(polish.fun) >= best_value:
            best_x, best_success = polish.x, best_success or bool(polish.success)

        warning = None
        spread = max(values) - min(values)
        if degradable and spread > RESTART_SPREAD_TOL:
            warning = (
                f"Restarts disagree by {spread:.3e} on a degradable channel; "
                "increase MAX_ITERATIONS or MULTISTART_RESTARTS"
            )
            logger.warning(f"{channel.label}: {warning}")

        argmax = _state_from_factor(best_x, d)
        return OptimizationReport(
            value=coherent_information(argmax, channel, validate=False),
            argmax=argmax,
            strategy=OptimizationStrategy.MULTISTART,
            restarts=len(starts),
            converged=best_success,
            restart_values=values,
            warning=warning,
        )

    def q1_diagonal(self, channel: Channel, resolution: Optional[int] = None) -> OptimizationReport:
        """
        Maximize over input states diagonal in the computational basis

        A simplex grid is evaluated first and the best grid points are polished
        with Nelder-Mead on squared weights.

        Args:
            channel: channel N
            resolution: grid denominator n; chosen from the point budget if omitted

        Returns:
            OptimizationReport, with a warning for families without a diagonal optimizer
        """
        d = channel.d_in
        n = _simplex_resolution(d, DIAGONAL_GRID_POINTS) if resolution is None else resolution
        if n < 1:
            raise ParameterError(f"Grid resolution must be positive, got {n}")
        warning = None
        if channel.family not in DIAGONAL_OPTIMAL:
            warning = f"no diagonal-optimizer guarantee for {channel.label}; value is a lower bound"
            logger.warning(warning)

        grid = _simplex_grid(d, n)
        values = np.array(
            [
                coherent_information(np.diag(w).astype(np.complex128), channel, validate=False)
                for w in grid
            ]
        )
        order = np.argsort(-values, kind="stable")[:DIAGONAL_POLISH]

        def objective(y: np.ndarray) -> float:
            return -coherent_information(_diagonal_from_weights(y), channel, validate=False)

        best_rho = np.diag(grid[order[0]]).astype(np.complex128)
        best_value = float(values[order[0]])
        converged = False
        for k in order:
            result = self._nelder_mead(objective, np.sqrt(grid[k]))
            if -float(result.fun) > best_value:
                best_value = -float(result.fun)
                best_rho = _diagonal_from_weights(result.x)
                converged = bool(result.success)

        return OptimizationReport(
            value=coherent_information(best_rho, channel, validate=False),
            argmax=best_rho,
            strategy=OptimizationStrategy.DIAGONAL_GRID,
            restarts=len(order),
            converged=converged,
            restart_values=[float(values[k]) for k in order],
            warning=warning,
        )

    def q1_platypus_restricted(self, s: float, t: float) -> tuple[float, float]:
        """
        Single-parameter maximization for the Platypus channel

        I_c is maximized over u |0><0| + (1-u) |b><b|, with b = 1 if 1-s-t <= s
        and b = 2 otherwise.

        Args:
            s: weight of |00> in F|0>
            t: weight of |22> in F|0>

        Returns:
            (u*, value)
        """
        channel = platypus(s, t)
        basis = platypus_subchannel_basis(s, t)

        def value_at(u: float) -> float:
            return coherent_information(platypus_diagonal_state(u, basis), channel, validate=False)

        grid = np.linspace(0.0, 1.0, RESTRICTED_GRID)
        values = [value_at(u) for u in grid]
        k = int(np.argmax(values))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, RESTRICTED_GRID - 1)]
        result = minimize_scalar(
            lambda u: -value_at(u),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": RESTRICTED_XATOL},
        )
        u_star, best = float(grid[k]), float(values[k])
        refined = value_at(float(result.x))
        if refined > best:
            u_star, best = float(result.x), refined
        return u_star, best

    def platypus_restricted_report(self, s: float, t: float) -> OptimizationReport:
        """q1_platypus_restricted wrapped as an OptimizationReport"""
        u_star, value = self.q1_platypus_restricted(s, t)
        return OptimizationReport(
            value=value,
            argmax=platypus_diagonal_state(u_star, platypus_subchannel_basis(s, t)),
            strategy=OptimizationStrategy.AUTO,
            restarts=1,
            converged=True,
        )

    @staticmethod
    def two_state_ensemble(p: float, u: float) -> Ensemble:
        """{p: |0><0|, 1-p: u|1><1| + (1-u)|2><2|}"""
        if not 0.0 <= p <= 1.0 or not 0.0 <= u <= 1.0:
            raise ParameterError(f"Need p, u in [0, 1], got p={p}, u={u}")
        second = u * basis_state(3, 1) + (1.0 - u) * basis_state(3, 2)
        return Ensemble(probabilities=(p, 1.0 - p), states=(basis_state(3, 0), second))

    def private_information_two_state(self, channel: Channel, p: float, u: float) -> float:
        """Private information of the two-state qutrit ensemble"""
        if channel.d_in != 3:
            raise DimensionError(f"Two-state ensemble needs a qutrit input, got {channel.d_in}")
        return private_information(self.two_state_ensemble(p, u), channel)

    def maximize_private_information_two_state(self, channel: Channel) -> PrivateInfoOptimum:
        """
        Maximize the two-state private information over (p, u)

        Args:
            channel: qutrit-input channel

        Returns:
            PrivateInfoOptimum, value re-evaluated at (p, u)
        """
        try:
            axis = np.linspace(0.0, 1.0, TWO_STATE_GRID)
            best_p, best_u = 1.0, 1.0
            best = self.private_information_two_state(channel, best_p, best_u)
            for p, u in itertools.product(axis, axis):
                value = self.private_information_two_state(channel, float(p), float(u))
                if value > best:
                    best, best_p, best_u = value, float(p), float(u)

            def objective(x: np.ndarray) -> float:
                p, u = np.sin(x) ** 2
                return -self.private_information_two_state(channel, float(p), float(u))

            x0 = np.arcsin(np.sqrt([best_p, best_u]))
            result = self._nelder_mead(objective, x0)
            if -float(result.fun) > best:
                best_p, best_u = (float(v) for v in np.sin(result.x) ** 2)

            value = self.private_information_two_state(channel, best_p, best_u)
            logger.debug(f"two-state private information of {channel.label}: {value:.10f}")
            return PrivateInfoOptimum(p=best_p, u=best_u, value=value)

        except Exception as e:
            logger.error(f"Error maximizing private information of {channel.label}: {e}")
            raise

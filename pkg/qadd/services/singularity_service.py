"""
Epsilon-log-singularity rates and second-order scaling of mutual information
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger

from qadd.channels.base import Channel
from qadd.channels.calculus import tensor
from qadd.config import settings
from qadd.core.linalg import CMatrix, eigvalsh_desc, trace_norm
from qadd.info.entropy import entropy, mutual_information
from qadd.info.states import validate_state
from qadd.middleware.error_handler import InvalidStateError, ParameterError
from qadd.models.schemas import RateEstimate, ScalingReport
from qadd.zoo.amplitude_damping import amplitude_damping

StateFamily = Callable[[float], CMatrix]

MIN_GRID_POINTS = 6
MIN_DECADES = 2.0
TRIM_MIN_POINTS = 8
LIPSCHITZ_RATIO = 10.0
SCALING_TOLERANCE = 0.1
# Eigenvalue residuals are compared with eps^3 only where eps^3 dominates rounding
EIGENVALUE_CHECK_FLOOR = 1e-13


def default_epsilon_grid() -> list[float]:
    """Logarithmic grid between EPSILON_MIN and EPSILON_MAX"""
    return [
        float(e)
        for e in np.logspace(
            math.log10(settings.EPSILON_MIN),
            math.log10(settings.EPSILON_MAX),
            settings.EPSILON_POINTS,
        )
    ]


def check_epsilon_grid(grid: Optional[Sequence[float]]) -> list[float]:
    """Sorted grid of at least 6 points in (0, 1) spanning at least two decades"""
    eps = sorted(float(e) for e in (default_epsilon_grid() if grid is None else grid))
    if len(eps) < MIN_GRID_POINTS:
        raise ParameterError(
            f"epsilon grid needs at least {MIN_GRID_POINTS} points, got {len(eps)}"
        )
    if eps[0] <= 0.0 or eps[-1] >= 1.0:
        raise ParameterError(f"epsilon grid must lie in (0, 1), got [{eps[0]}, {eps[-1]}]")
    if math.log10(eps[-1] / eps[0]) < MIN_DECADES - 1e-9:
        raise ParameterError(f"epsilon grid must span {MIN_DECADES:g} decades")
    return eps


def _weighted_fit(
    regressors: np.ndarray, values: np.ndarray, scale: np.ndarray
) -> tuple[np.ndarray, float]:
    """Least squares on rows divided by scale; returns (coefficients, rms residual)"""
    a = regressors / scale[:, None]
    y = values / scale
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    rms = float(np.sqrt(np.mean((a @ coef - y) ** 2)))
    return coef, rms


class SingularityService:
    """Service for log-singularity rate estimation"""

    def log_singularity_rate(
        self, family: StateFamily, epsilon_grid: Optional[Sequence[float]] = None
    ) -> RateEstimate:
        """
        Fit S(sigma(eps)) - S(sigma(0)) = r eps |log2 eps| + c eps

        Rows are weighted by 1 / (eps |log2 eps|). The two largest eps are
        dropped when that lowers the residual and at least 8 points exist.
        The Lipschitz constant of the family is estimated and reported.

        Args:
            family: map eps -> density matrix
            epsilon_grid: fit points, defaults to the configured grid

        Returns:
            RateEstimate with rate r
        """
        eps = np.asarray(check_epsilon_grid(epsilon_grid))
        try:
            sigma0 = validate_state(family(0.0))
        except InvalidStateError as e:
            raise InvalidStateError(f"family is not a state at eps=0: {e.message}")
        s0 = entropy(sigma0, validate=False)

        differences = []
        moves = []
        for e in eps:
            try:
                sigma = validate_state(family(float(e)))
            except InvalidStateError as exc:
                raise InvalidStateError(f"family is not a state at eps={e:g}: {exc.message}")
            differences.append(entropy(sigma, validate=False) - s0)
            moves.append(trace_norm(sigma - sigma0) / e)
        ds = np.asarray(differences)
        constants = np.asarray(moves)

        log_term = eps * np.abs(np.log2(eps))
        regressors = np.column_stack([log_term, eps])
        coef, rms = _weighted_fit(regressors, ds, log_term)
        used = eps
        dropped = False
        if len(eps) >= TRIM_MIN_POINTS:
            keep = slice(0, len(eps) - 2)
            trimmed, trimmed_rms = _weighted_fit(regressors[keep], ds[keep], log_term[keep])
            if trimmed_rms < rms:
                coef, rms, used, dropped = trimmed, trimmed_rms, eps[keep], True

        lipschitz = float(constants.max())
        lowest = float(constants.min())
        lipschitz_ok = lowest > 0.0 and lipschitz <= LIPSCHITZ_RATIO * lowest
        if not lipschitz_ok:
            logger.warning(
                f"Family is not Lipschitz in trace norm on the grid "
                f"(||sigma(eps)-sigma(0)||_1/eps ranges over [{lowest:.3g}, {lipschitz:.3g}])"
            )

        return RateEstimate(
            rate=float(coef[0]),
            linear_coefficient=float(coef[1]),
            residual=rms,
            epsilon_grid=[float(e) for e in used],
            dropped_largest=dropped,
            lipschitz_constant=lipschitz,
            lipschitz_ok=lipschitz_ok,
        )

    @staticmethod
    def example_family(case: int, a: float = 0.5, b: float = 0.2) -> StateFamily:
        """
        Qutrit families with known log-singularity rates

        case 1: diag(a - b eps, b eps, 1 - a), rate b
        case 2: case 1 with coherence b sqrt(eps(1-eps)) between the first two
                levels, rate b(a-b)/a
        case 3: a full-rank state moved by eps H with traceless H, rate 0

        Args:
            case: 1, 2 or 3
            a: weight of the first level
            b: strength of the perturbation

        Returns:
            Map eps -> density matrix
        """
        if not 0.0 < b < a < 1.0:
            raise ParameterError(f"Need 0 < b < a < 1, got a={a}, b={b}")

        def base(eps: float) -> CMatrix:
            return np.diag([a - b * eps, b * eps, 1.0 - a]).astype(np.complex128)

        if case == 1:
            return base
        if case == 2:

            def coherent(eps: float) -> CMatrix:
                sigma = base(eps)
                sigma[0, 1] = sigma[1, 0] = b * math.sqrt(eps * (1.0 - eps))
                return sigma

            return coherent
        if case == 3:
            center = np.diag([a, (1.0 - a) / 2.0, (1.0 - a) / 2.0]).astype(np.complex128)
            direction = np.zeros((3, 3), dtype=np.complex128)
            direction[0, 0], direction[1, 1] = b, -b
            direction[0, 2] = direction[2, 0] = b / 2.0

            def interior(eps: float) -> CMatrix:
                return center + eps * direction

            return interior
        raise ParameterError(f"Unknown example case {case}; expected 1, 2 or 3")

    @staticmethod
    def scaling_state(eps: float) -> CMatrix:
        """
        Two-qubit rho_VA(eps) = eps |psi+><psi+| + (1 - eps) |11><11|

        with |psi+> = (|01> + |10>) / sqrt(2); a product state at eps = 0.
        """
        rho = np.zeros((4, 4), dtype=np.complex128)
        rho[1:3, 1:3] = eps / 2.0
        rho[3, 3] = 1.0 - eps
        return rho

    def epsilon_scaling_mi(
        self, gamma: float, epsilon_grid: Optional[Sequence[float]] = None
    ) -> ScalingReport:
        """
        Fit I(V;B) = C eps^2 log2 eps + c eps^2 for (id (x) A_gamma)(rho_VA(eps))

        The fitted C is compared with -(1-gamma)/(4 gamma), which is the same
        in any logarithm base. The two nonzero eigenvalues of the coherent
        block are checked against their second-order expansions.

        Args:
            gamma: damping in (0, 1)
            epsilon_grid: fit points, defaults to the configured grid

        Returns:
            ScalingReport
        """
        if not 0.0 < gamma < 1.0:
            raise ParameterError(f"gamma must lie in (0, 1), got {gamma}")
        eps = np.asarray(check_epsilon_grid(epsilon_grid))
        extended = tensor(Channel.identity(2), amplitude_damping(gamma))

        information = []
        worst = 0.0
        for e in eps:
            rho_vb = extended.apply(self.scaling_state(float(e)))
            information.append(mutual_information(rho_vb, (2, 2)))
            if e**3 > EIGENVALUE_CHECK_FLOOR:
                block = rho_vb[1:3, 1:3]
                large, small = eigvalsh_desc(block)
                expected_large = (
                    gamma + (1.0 - 2.0 * gamma) / 2.0 * e + (1.0 - gamma) / (4.0 * gamma) * e**2
                )
                expected_small = (1.0 - gamma) / 2.0 * e - (1.0 - gamma) / (4.0 * gamma) * e**2
                residual = max(abs(large - expected_large), abs(small - expected_small)) / e**3
                worst = max(worst, float(residual))

        values = np.asarray(information)
        log_term = eps**2 * np.log2(eps)
        coef, _ = _weighted_fit(np.column_stack([log_term, eps**2]), values, np.abs(log_term))
        analytic = -(1.0 - gamma) / (4.0 * gamma)
        relative = abs(float(coef[0]) - analytic) / abs(analytic)
        bound = 2.0 / gamma**2
        report = ScalingReport(
            gamma=gamma,
            epsilon_grid=[float(e) for e in eps],
            mutual_information=[float(v) for v in values],
            fitted_coefficient=float(coef[0]),
            analytic_coefficient=analytic,
            relative_error=relative,
            eigenvalue_residual=worst,
            passed=relative <= SCALING_TOLERANCE and worst <= bound,
        )
        logger.info(f"Scaling at gamma={gamma}: fitted {coef[0]:.6f} vs {analytic:.6f}")
        return report

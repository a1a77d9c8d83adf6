"""
Sampled estimators for mutual-information ratios between channels
"""

import math
from typing import Callable, Optional

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from qadd.channels.base import Channel
from qadd.channels.calculus import tensor
from qadd.config import settings
from qadd.core.linalg import CMatrix, kron
from qadd.core.random import make_rng, random_density_matrix, random_pure_state
from qadd.info.entropy import mutual_information, private_information
from qadd.info.states import Ensemble, pure_state
from qadd.middleware.error_handler import DimensionError, OptimizationError, ParameterError
from qadd.models.schemas import ContractionReport, RatioProbeReport, RatioReport
from qadd.services.singularity_service import SingularityService
from qadd.zoo.amplitude_damping import amplitude_damping

DENOMINATOR_CUTOFF = 1e-8
REFINE_FROM = 5
REFINE_ITERATIONS = 2000
SCALING_PROBES = (1e-3, 1e-2, 1e-1)
RATIO_STREAM = 3
CONTRACTION_STREAM = 4
R4_STREAM = 5
CQ_STREAM = 6


def less_noisy_threshold(ratio: float) -> float:
    """Flag probability 1/(1+R) above which the flagged pair is informationally degradable"""
    if ratio < 0.0 or not math.isfinite(ratio):
        raise ParameterError(f"Ratio must be finite and non-negative, got {ratio}")
    return 1.0 / (1.0 + ratio)


def _factor_state(x: np.ndarray, d: int) -> CMatrix:
    factor = np.zeros((d, d), dtype=np.complex128)
    factor[np.diag_indices(d)] = x[:d]
    rows, cols = np.tril_indices(d, -1)
    m = len(rows)
    factor[rows, cols] = x[d : d + m] + 1j * x[d + m :]
    rho = factor @ factor.conj().T
    return rho / max(float(np.trace(rho).real), 1e-300)


def _factor_params(rho: CMatrix) -> np.ndarray:
    """Parameters of a Cholesky factor of rho, regularized to full rank"""
    d = rho.shape[0]
    factor = np.linalg.cholesky(rho + 1e-9 * np.eye(d))
    rows, cols = np.tril_indices(d, -1)
    off = factor[rows, cols]
    return np.concatenate([factor.diagonal().real, off.real, off.imag])


def _ensemble_params(ensemble: Ensemble) -> np.ndarray:
    """Square-root weights followed by the factor parameters of each state"""
    weights = np.sqrt(np.asarray(ensemble.probabilities, dtype=float))
    return np.concatenate([weights, *(_factor_params(rho) for rho in ensemble.states)])


def _ensemble_from_params(x: np.ndarray, size: int, d: int) -> Ensemble:
    weights = x[:size] ** 2
    total = weights.sum()
    probabilities = weights / total if total > 1e-300 else np.full(size, 1.0 / size)
    chunks = np.split(x[size:], size)
    states = tuple(_factor_state(chunk, d) for chunk in chunks)
    return Ensemble(probabilities=tuple(float(p) for p in probabilities), states=states)


class RatioService:
    """Service for estimating infima of mutual-information ratios"""

    def __init__(self, seed: Optional[int] = None, tol: Optional[float] = None):
        self.seed = settings.DEFAULT_SEED if seed is None else seed
        self.tol = settings.SIMPLEX_TOL if tol is None else tol

    @staticmethod
    def _check_pair(first: Channel, second: Channel) -> None:
        if first.d_in != second.d_in:
            raise DimensionError(
                f"Channels need the same input dimension, got {first.d_in} and {second.d_in}"
            )

    @staticmethod
    def _extend(channel: Channel, d_v: int) -> tuple[Channel, Channel]:
        """(id_V (x) N, id_V (x) N^c)"""
        identity = Channel.identity(d_v)
        return tensor(identity, channel), tensor(identity, channel.complementary())

    @staticmethod
    def information_gap(rho_va: CMatrix, extended: tuple[Channel, Channel], d_v: int) -> float:
        """I(V;B) - I(V;E) from the pair returned by _extend"""
        to_output, to_env = extended
        return mutual_information(
            to_output.apply(rho_va), (d_v, to_output.d_out // d_v), validate=False
        ) - mutual_information(to_env.apply(rho_va), (d_v, to_env.d_out // d_v), validate=False)

    def _samples(self, d_v: int, d_a: int, count: int, stream: int) -> list[CMatrix]:
        """Random, low-rank and near-product inputs; qubit pairs also get the scaling family"""
        rng = make_rng(self.seed, stream)
        d = d_v * d_a
        states = []
        for k in range(count):
            kind = k % 3
            if kind == 0:
                states.append(random_density_matrix(rng, d))
            elif kind == 1:
                states.append(random_density_matrix(rng, d, rank=1 + (k // 3) % 2))
            else:
                eps = 10.0 ** rng.uniform(-4.0, -1.0)
                product = kron(
                    pure_state(random_pure_state(rng, d_v)), pure_state(random_pure_state(rng, d_a))
                )
                states.append((1.0 - eps) * product + eps * random_density_matrix(rng, d))
        if d_v == 2 and d_a == 2:
            states.extend(SingularityService.scaling_state(e) for e in SCALING_PROBES)
        return states

    def _minimize_ratio(
        self, ratio: Callable[[CMatrix], Optional[float]], states: list[CMatrix], local_refine: bool
    ) -> RatioReport:
        values: list[tuple[float, int]] = []
        for k, rho in enumerate(states):
            value = ratio(rho)
            if value is not None:
                values.append((value, k))
        excluded = len(states) - len(values)
        if not values:
            raise OptimizationError("Denominator vanishes on all samples")
        values.sort()
        best, best_k = values[0]
        argmin = states[best_k]

        refined = False
        if local_refine:
            d = states[0].shape[0]

            def objective(x: np.ndarray) -> float:
                value = ratio(_factor_state(x, d))
                return math.inf if value is None else value

            for _, k in values[:REFINE_FROM]:
                result = minimize(
                    objective,
                    _factor_params(states[k]),
                    method="Nelder-Mead",
                    options={
                        "xatol": self.tol,
                        "fatol": self.tol,
                        "maxiter": REFINE_ITERATIONS,
                        "adaptive": True,
                    },
                )
                if math.isfinite(result.fun) and result.fun < best:
                    best, argmin, refined = float(result.fun), _factor_state(result.x, d), True

        return RatioReport(
            estimate=best,
            samples_used=len(values),
            excluded=excluded,
            refined=refined,
            argmin=argmin,
        )

    def mi_ratio_R3(
        self,
        first: Channel,
        second: Channel,
        dim_v: int = 2,
        samples: int = 60,
        local_refine: bool = True,
    ) -> RatioReport:
        """
        Estimate inf over rho_VA of [I(V;B1) - I(V;E1)] / [I(V;B2) - I(V;E2)]

        Samples with denominator below 1e-8 are excluded. The result is an
        upper bound on the infimum.

        Args:
            first: numerator channel
            second: denominator channel
            dim_v: reference dimension
            samples: number of random inputs
            local_refine: polish the best samples with Nelder-Mead

        Returns:
            RatioReport with the minimizing state
        """
        self._check_pair(first, second)
        if samples < 1 or dim_v < 1:
            raise ParameterError(f"Need samples >= 1 and dim_v >= 1, got {samples}, {dim_v}")
        try:
            ext_first = self._extend(first, dim_v)
            ext_second = self._extend(second, dim_v)

            def ratio(rho: CMatrix) -> Optional[float]:
                denominator = self.information_gap(rho, ext_second, dim_v)
                if abs(denominator) < DENOMINATOR_CUTOFF:
                    return None
                return self.information_gap(rho, ext_first, dim_v) / denominator

            states = self._samples(dim_v, first.d_in, samples, RATIO_STREAM)
            report = self._minimize_ratio(ratio, states, local_refine)
            logger.info(f"R3({first.label}, {second.label}) <= {report.estimate:.6f}")
            return report

        except Exception as e:
            logger.error(f"Error estimating R3 for {first.label}, {second.label}: {e}")
            raise

    def mi_ratio_R4(
        self,
        first: Channel,
        second: Channel,
        ensemble_size: int = 2,
        samples: int = 60,
        local_refine: bool = False,
    ) -> RatioReport:
        """
        Estimate inf over ensembles of P(ens, N1) / P(ens, N2), P the private information

        Args:
            first: numerator channel
            second: denominator channel
            ensemble_size: number of states per ensemble
            samples: number of random ensembles
            local_refine: polish the best sampled ensembles with Nelder-Mead over
                their weights and Cholesky factors

        Returns:
            RatioReport; argmin holds the classical-quantum state of the best ensemble
        """
        self._check_pair(first, second)
        if samples < 1 or ensemble_size < 1:
            raise ParameterError(
                f"Need samples >= 1 and ensemble_size >= 1, got {samples}, {ensemble_size}"
            )
        rng = make_rng(self.seed, R4_STREAM)
        d = first.d_in
        ensembles = []
        for k in range(samples):
            probabilities = rng.dirichlet(np.ones(ensemble_size))
            rank = None if k % 2 == 0 else 1
            states = [random_density_matrix(rng, d, rank=rank) for _ in range(ensemble_size)]
            ensembles.append(Ensemble(probabilities=tuple(probabilities), states=tuple(states)))

        def ratio(ensemble: Ensemble) -> Optional[float]:
            denominator = private_information(ensemble, second)
            if abs(denominator) < DENOMINATOR_CUTOFF:
                return None
            return private_information(ensemble, first) / denominator

        values: list[tuple[float, int]] = []
        for k, ensemble in enumerate(ensembles):
            value = ratio(ensemble)
            if value is not None:
                values.append((value, k))
        if not values:
            raise OptimizationError("Denominator vanishes on all sampled ensembles")
        values.sort()
        best, best_k = values[0]
        best_ensemble = ensembles[best_k]

        refined = False
        if local_refine:

            def objective(x: np.ndarray) -> float:
                value = ratio(_ensemble_from_params(x, ensemble_size, d))
                return math.inf if value is None else value

            for _, k in values[:REFINE_FROM]:
                result = minimize(
                    objective,
                    _ensemble_params(ensembles[k]),
                    method="Nelder-Mead",
                    options={
                        "xatol": self.tol,
                        "fatol": self.tol,
                        "maxiter": REFINE_ITERATIONS,
                        "adaptive": True,
                    },
                )
                if math.isfinite(result.fun) and result.fun < best:
                    best = float(result.fun)
                    best_ensemble = _ensemble_from_params(result.x, ensemble_size, d)
                    refined = True

        logger.info(f"R4({first.label}, {second.label}) <= {best:.6f}")
        return RatioReport(
            estimate=best,
            samples_used=len(values),
            excluded=samples - len(values),
            refined=refined,
            argmin=best_ensemble.cq_state(),
        )

    def contraction_coefficients(
        self,
        first: Channel,
        second: Channel,
        dim_v: int = 2,
        samples: int = 60,
        cq_only: bool = False,
    ) -> ContractionReport:
        """
        Sampled sup and inf of I(V;B1) / I(V;B2)

        Args:
            first: numerator channel
            second: denominator channel
            dim_v: reference dimension
            samples: number of random inputs
            cq_only: restrict to classical-quantum inputs sum_x p_x |x><x| (x) rho_x

        Returns:
            ContractionReport
        """
        self._check_pair(first, second)
        rng = make_rng(self.seed, CQ_STREAM if cq_only else CONTRACTION_STREAM)
        d_a = first.d_in
        if cq_only:
            states = []
            for _ in range(samples):
                probabilities = rng.dirichlet(np.ones(dim_v))
                blocks = [random_density_matrix(rng, d_a) for _ in range(dim_v)]
                ensemble = Ensemble(probabilities=tuple(probabilities), states=tuple(blocks))
                states.append(ensemble.cq_state())
        else:
            states = self._samples(dim_v, d_a, samples, CONTRACTION_STREAM)

        ext_first = tensor(Channel.identity(dim_v), first)
        ext_second = tensor(Channel.identity(dim_v), second)
        ratios = []
        for rho in states:
            top = mutual_information(ext_first.apply(rho), (dim_v, first.d_out), validate=False)
            bottom = mutual_information(
                ext_second.apply(rho), (dim_v, second.d_out), validate=False
            )
            if top > DENOMINATOR_CUTOFF and bottom > DENOMINATOR_CUTOFF:
                ratios.append(top / bottom)
        if not ratios:
            raise OptimizationError("Mutual information vanishes on all samples")
        return ContractionReport(
            sup=max(ratios), inf=min(ratios), samples_used=len(ratios), cq_only=cq_only
        )

    def ratio_probe(
        self, gamma1: float, gamma2: float, dim_v: int = 2, samples: int = 60
    ) -> RatioProbeReport:
        """
        Ratio estimates for (A_gamma1, A_gamma2) against the conjectured closed form

        The conjectured value gamma2 (1 - gamma1) / (gamma1 (1 - gamma2)) is the
        infimum of I(V;B1) / I(V;B2); it is compared with the sampled contraction
        infimum and, next to it, with the R3 estimate. Never enforced.
        """
        if not 0.0 < gamma1 < 1.0 or not 0.0 < gamma2 < 1.0:
            raise ParameterError(f"Need gamma1, gamma2 in (0, 1), got {gamma1}, {gamma2}")
        first, second = amplitude_damping(gamma1), amplitude_damping(gamma2)
        r3 = self.mi_ratio_R3(first, second, dim_v=dim_v, samples=samples)
        conjectured = gamma2 * (1.0 - gamma1) / (gamma1 * (1.0 - gamma2))
        r3 = r3.model_copy(update={"conjectured": conjectured})
        contraction = self.contraction_coefficients(first, second, dim_v, samples)
        return RatioProbeReport(
            gamma1=gamma1,
            gamma2=gamma2,
            r3=r3,
            contraction=contraction,
            contraction_cq=self.contraction_coefficients(
                first, second, dim_v, samples, cq_only=True
            ),
            less_noisy_threshold=less_noisy_threshold(max(r3.estimate, 0.0)),
            conjectured_ratio=conjectured,
            observed_vs_conjectured=r3.estimate / conjectured,
            contraction_inf_vs_conjectured=contraction.inf / conjectured,
        )

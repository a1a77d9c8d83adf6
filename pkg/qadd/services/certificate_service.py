"""
Degradability certificates, simulation checks and fixed-point uniqueness
"""

from typing import Optional

import numpy as np
from loguru import logger
from scipy.linalg import null_space
from scipy.optimize import linprog

from qadd.channels.base import Channel, SuperOperator, transfer_to_choi
from qadd.channels.calculus import compose_all, switch_sum
from qadd.config import settings
from qadd.core.linalg import max_abs, psd_check, symmetrize, unvec
from qadd.middleware.error_handler import DimensionError, ParameterError
from qadd.models.schemas import Certificate, FixedPointReport, SideCertificate, SimulationReport
from qadd.services.capacity_service import CapacityService

MAX_CERTIFICATE_DIM = 9
MAX_FIXED_POINT_DIM = 6
MAX_PRODUCT_LENGTH = 4
KERNEL_RCOND = 1e-10
EIGENVALUE_ONE_TOL = 1e-9
SPAN_RANK_TOL = 1e-10
SIMULATION_TOL = 1e-9
DOMINATION_SLACK = 1e-6
WEIGHT_CUTOFF = 1e-12


class DegradabilityService:
    """Service for certifying degradability and related structural properties"""

    def __init__(self, capacity_service: Optional[CapacityService] = None):
        self.capacity_service = capacity_service or CapacityService()
        self.tol = settings.CERTIFICATE_TOL

    def degradability_certificate(self, channel: Channel) -> Certificate:
        """
        Certify or refute degradability and anti-degradability of a channel

        Each direction looks for D with D o source = target. Flagged mixtures are
        tried first with a transport program over branch maps; otherwise the
        kernel inclusion ker T_source in ker T_target is tested and, for an
        invertible T_source, the unique candidate T_target T_source^{-1} is
        checked for complete positivity and trace preservation.

        Args:
            channel: channel N

        Returns:
            Certificate; undecided directions make the verdict Indeterminate
        """
        try:
            dims = (channel.d_in, channel.d_out, channel.d_env)
            if max(dims) > MAX_CERTIFICATE_DIM:
                note = f"dimensions {dims} exceed {MAX_CERTIFICATE_DIM}"
                return Certificate(
                    degradable=SideCertificate(certified=None, method="skipped", witness=note),
                    anti_degradable=SideCertificate(certified=None, method="skipped", witness=note),
                )

            complement = channel.complementary()
            certificate = Certificate(
                degradable=self._side(channel, complement, "degrading"),
                anti_degradable=self._side(complement, channel, "anti-degrading"),
            )
            logger.info(
                f"Certificate for {channel.label}: {certificate.verdict.value} "
                f"(residual={certificate.residual})"
            )
            return certificate

        except Exception as e:
            logger.error(f"Error certifying degradability of {channel.label}: {e}")
            raise

    def _side(self, source: Channel, target: Channel, name: str) -> SideCertificate:
        if source.flags is not None and target.flags is not None:
            transported = self._transport(source, target, name)
            if transported is not None:
                return transported

        t_source, t_target = source.transfer, target.transfer
        kernel = null_space(t_source, rcond=KERNEL_RCOND)
        if kernel.shape[1]:
            leak = max_abs(t_target @ kernel)
            if leak > self.tol:
                columns = [
                    j
                    for j in range(t_source.shape[1])
                    if max_abs(t_source[:, j]) <= self.tol and max_abs(t_target[:, j]) > self.tol
                ]
                witness = (
                    f"columns {columns} of the source transfer matrix vanish "
                    "while the target's do not"
                    if columns
                    else f"kernel of the source transfer matrix leaks into the target ({leak:.3e})"
                )
                return SideCertificate(certified=False, method="kernel inclusion", witness=witness)

        square = t_source.shape[0] == t_source.shape[1]
        if square and np.linalg.cond(t_source) < settings.CONDITION_LIMIT:
            candidate = t_target @ np.linalg.inv(t_source)
            return self._check_candidate(candidate, source, target, name, unique=True)

        candidate = t_target @ np.linalg.pinv(t_source)
        return self._check_candidate(candidate, source, target, name, unique=False)

    def _check_candidate(
        self, candidate: np.ndarray, source: Channel, target: Channel, name: str, unique: bool
    ) -> SideCertificate:
        method = "transfer inversion" if unique else "pseudo-inverse"
        d_in, d_out = source.d_out, target.d_out
        choi = transfer_to_choi(candidate, d_in, d_out)
        check = psd_check(choi, self.tol)
        trace_preserving = SuperOperator(candidate, d_in, d_out).is_trace_preserving(self.tol)
        residual = max_abs(candidate @ source.transfer - target.transfer)

        if check.is_psd and trace_preserving and residual <= self.tol:
            d_map = Channel.from_choi(choi, d_in, d_out, label=f"{name} map", tol=self.tol)
            return SideCertificate(
                certified=True,
                method=method,
                map=d_map,
                residual=max_abs(d_map.transfer @ source.transfer - target.transfer),
                min_eigenvalue=check.min_eigenvalue,
            )

        if not unique:
            return SideCertificate(
                certified=None,
                method=method,
                min_eigenvalue=check.min_eigenvalue,
                residual=residual,
                witness="pseudo-inverse candidate is not a channel; other candidates exist",
            )
        if not check.is_psd:
            witness = (
                f"Choi matrix of the unique {name} candidate has eigenvalue "
                f"{check.min_eigenvalue:.6g}"
            )
        else:
            witness = f"unique {name} candidate is not trace preserving"
        return SideCertificate(
            certified=False, method=method, min_eigenvalue=check.min_eigenvalue, witness=witness
        )

    def _transport(self, source: Channel, target: Channel, name: str) -> Optional[SideCertificate]:
        """
        Transport program over branch maps of two flagged mixtures

        Weights w_ij >= 0 on allowed branch maps D_ij (from source branch j to
        target branch i) with sum_i w_ij = 1 and sum_j q_j w_ij = q_i.

        Returns:
            SideCertificate, or None when the branches do not support the program
        """
        q = np.asarray(source.flags.probabilities)
        q_target = np.asarray(target.flags.probabilities)
        if q.shape != q_target.shape or max_abs(q - q_target) > WEIGHT_CUTOFF:
            return None
        n = len(q)
        src_branches, tgt_branches = source.flags.branches, target.flags.branches

        allowed: dict[tuple[int, int], SuperOperator] = {}
        for j, branch in enumerate(src_branches):
            t_branch = branch.transfer
            if t_branch.shape[0] != t_branch.shape[1]:
                return None
            if np.linalg.cond(t_branch) >= settings.CONDITION_LIMIT:
                return None
            inverse = np.linalg.inv(t_branch)
            for i, other in enumerate(tgt_branches):
                candidate = SuperOperator(other.transfer @ inverse, branch.d_out, other.d_out)
                if candidate.is_cptp(self.tol):
                    allowed[(i, j)] = candidate

        a_eq = np.zeros((2 * n, n * n))
        b_eq = np.concatenate([np.ones(n), q])
        for i in range(n):
            for j in range(n):
                a_eq[j, i * n + j] = 1.0
                a_eq[n + i, i * n + j] = q[j]
        bounds = [
            (0.0, None) if (i, j) in allowed else (0.0, 0.0) for i in range(n) for j in range(n)
        ]
        result = linprog(np.zeros(n * n), A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")

        if result.status == 2:
            return SideCertificate(
                certified=False,
                method="flag transport",
                witness=f"no transport plan over {len(allowed)} admissible branch maps",
            )
        if result.status != 0:
            logger.warning(
                f"Transport program for {source.label} ended with status {result.status}"
            )
            return None

        weights = np.clip(result.x.reshape(n, n), 0.0, None)
        weights /= weights.sum(axis=0, keepdims=True)
        terms = [
            (float(weights[i, j]), i, j, allowed[(i, j)].to_channel(self.tol, label=f"D{i}{j}"))
            for i in range(n)
            for j in range(n)
            if weights[i, j] > WEIGHT_CUTOFF
        ]
        d_map = switch_sum(terms, d_flag=n, label=f"{name} map")
        residual = max_abs(d_map.transfer @ source.transfer - target.transfer)
        return SideCertificate(
            certified=residual <= self.tol,
            method="flag transport",
            map=d_map if residual <= self.tol else None,
            residual=residual,
            witness=None if residual <= self.tol else f"transport map residual {residual:.3e}",
        )

    def simulation_additivity_check(
        self,
        channel: Channel,
        simulator: Channel,
        encoder: Channel,
        decoder: Channel,
    ) -> SimulationReport:
        """
        Check D o N_hat o E = N and weak domination q1(N_hat) <= q1(N)

        Args:
            channel: simulated channel N
            simulator: channel N_hat
            encoder: pre-processing E
            decoder: post-processing D

        Returns:
            SimulationReport with both checks
        """
        try:
            composed = compose_all(decoder, simulator, encoder)
            if (composed.d_in, composed.d_out) != (channel.d_in, channel.d_out):
                raise DimensionError(
                    f"Simulation maps {composed.d_in} -> {composed.d_out}, "
                    f"channel maps {channel.d_in} -> {channel.d_out}"
                )
            residual = composed.transfer_distance(channel)
            q1_channel = self.capacity_service.q1(channel).value
            q1_simulator = self.capacity_service.q1(simulator).value
            report = SimulationReport(
                simulation_residual=residual,
                simulates=residual <= SIMULATION_TOL,
                q1_channel=q1_channel,
                q1_simulator=q1_simulator,
                weakly_dominated=q1_simulator <= q1_channel + DOMINATION_SLACK,
            )
            logger.info(f"Simulation check for {channel.label}: passed={report.passed}")
            return report

        except Exception as e:
            logger.error(f"Error checking simulation of {channel.label}: {e}")
            raise

    def unique_fixed_point_check(self, channel: Channel, max_len: int = 2) -> FixedPointReport:
        """
        Uniqueness of the fixed state

        The span of Kraus products of length <= max_len reaching all of M_d is a
        sufficient criterion; uniqueness itself is decided by the multiplicity
        of eigenvalue 1 of the transfer matrix.

        Args:
            channel: channel with d_in == d_out <= 6
            max_len: longest Kraus product, at most 4

        Returns:
            FixedPointReport with the fixed state when unique
        """
        d = channel.d_in
        if channel.d_out != d:
            raise DimensionError(f"Fixed points need d_in == d_out, got {d} and {channel.d_out}")
        if d > MAX_FIXED_POINT_DIM:
            raise ParameterError(f"Fixed-point check needs d <= {MAX_FIXED_POINT_DIM}, got {d}")
        if not 1 <= max_len <= MAX_PRODUCT_LENGTH:
            raise ParameterError(f"max_len must lie in [1, {MAX_PRODUCT_LENGTH}], got {max_len}")

        kraus = [k for k in channel.kraus if max_abs(k) > SPAN_RANK_TOL]
        words: list[np.ndarray] = []
        level = kraus
        rank = 0
        length = 0
        for length in range(1, max_len + 1):
            words.extend(level)
            stacked = np.stack([w.reshape(-1) for w in words])
            rank = int(np.linalg.matrix_rank(stacked, tol=SPAN_RANK_TOL))
            if rank == d * d:
                break
            level = [k @ w for k in kraus for w in level]

        eigenvalues, eigenvectors = np.linalg.eig(channel.transfer)
        ones = np.flatnonzero(np.abs(eigenvalues - 1.0) < EIGENVALUE_ONE_TOL)
        fixed_state = None
        if len(ones) == 1:
            x = unvec(eigenvectors[:, ones[0]], d)
            x = symmetrize(x / np.trace(x))
            fixed_state = x

        logger.debug(f"fixed points of {channel.label}: span={rank}, multiplicity={len(ones)}")
        return FixedPointReport(
            unique=len(ones) == 1,
            span_certified=rank == d * d,
            span_dimension=rank,
            multiplicity=len(ones),
            product_length=length,
            fixed_state=fixed_state,
        )

"""
Superadditivity constructions: Smith-Yard states and Platypus amplification
"""

import math
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from qadd.channels.base import Channel
from qadd.channels.calculus import tensor
from qadd.config import settings
from qadd.core.linalg import CMatrix, hermitian_eig, zero_cutoff
from qadd.info.entropy import coherent_information, private_information
from qadd.info.states import Ensemble
from qadd.middleware.error_handler import ParameterError, PreconditionError
from qadd.models.schemas import AmplificationReport, SmithYardReport
from qadd.services.capacity_service import CapacityService
from qadd.services.singularity_service import SingularityService, check_epsilon_grid
from qadd.zoo.erasure import erasure, q1_erasure
from qadd.zoo.platypus import platypus, platypus_subchannel_basis

HALF = 0.5
IDENTITY_TOL = 1e-8
POSITIVE_Q1 = 1e-6
GAIN_THRESHOLD = 1e-4


def _purification_sectors(ensemble: Ensemble) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """(p_x, eigenvalues, eigenvectors) restricted to the support of each rho_x"""
    sectors = []
    for p, rho in zip(ensemble.probabilities, ensemble.states):
        eig = hermitian_eig(rho)
        keep = eig.eigenvalues > zero_cutoff(rho)
        sectors.append((p, eig.eigenvalues[keep], eig.eigenvectors[:, keep]))
    return sectors


def _two_qudit_vector(d_a: int, d_b: int, terms: Sequence[tuple[float, int, int]]) -> np.ndarray:
    """sum amplitude |a>|b> on A (x) B"""
    v = np.zeros(d_a * d_b, dtype=np.complex128)
    for amplitude, a, b in terms:
        v[a * d_b + b] += amplitude
    return v


class SuperadditivityService:
    """Service for superadditivity constructions with erasure channels"""

    def __init__(
        self,
        capacity_service: Optional[CapacityService] = None,
        singularity_service: Optional[SingularityService] = None,
    ):
        self.capacity_service = capacity_service or CapacityService()
        self.singularity_service = singularity_service or SingularityService()

    @staticmethod
    def smith_yard_state(ensemble: Ensemble, channel: Channel) -> tuple[CMatrix, int]:
        """
        State on A (x) C for the half-private-information construction

        Its coherent information with N (x) E_{d_C,1/2} is half the private information.

        Each rho_x is purified into its own block of C, of size rank(rho_x), and
        the purifications are mixed with weights p_x.

        Args:
            ensemble: input ensemble {p_x, rho_x}
            channel: channel N, used for the dimension check

        Returns:
            (rho_AC, d_C) with d_C the sum of the ranks
        """
        if ensemble.dim != channel.d_in:
            raise ParameterError(
                f"Ensemble dimension {ensemble.dim} does not match channel input {channel.d_in}"
            )
        sectors = _purification_sectors(ensemble)
        d_c = sum(len(values) for _, values, _ in sectors)
        if d_c > settings.SMITH_YARD_MAX_DC:
            raise ParameterError(f"d_C = {d_c} exceeds the cap {settings.SMITH_YARD_MAX_DC}")

        d_a = ensemble.dim
        rho = np.zeros((d_a * d_c, d_a * d_c), dtype=np.complex128)
        offset = 0
        for p, values, vectors in sectors:
            psi = np.zeros((d_a, d_c), dtype=np.complex128)
            for k, value in enumerate(values):
                psi[:, offset + k] = math.sqrt(value) * vectors[:, k]
            flat = psi.reshape(-1)
            rho += p * np.outer(flat, flat.conj())
            offset += len(values)
        return rho, d_c

    @staticmethod
    def _pad_ancilla(rho: CMatrix, d_a: int, d_c: int, d_target: int) -> CMatrix:
        if d_target == d_c:
            return rho
        embed = np.zeros((d_target, d_c))
        embed[:d_c, :d_c] = np.eye(d_c)
        lift = np.kron(np.eye(d_a), embed)
        return lift @ rho @ lift.T

    def smith_yard_check(
        self, ensemble: Ensemble, channel: Channel, erasure_dim: Optional[int] = None
    ) -> SmithYardReport:
        """
        Compare I_c(rho_AC, N (x) E_{d,1/2}) with half the private information

        Args:
            ensemble: input ensemble
            channel: channel N
            erasure_dim: input dimension d of the erasure channel, at least d_C

        Returns:
            SmithYardReport; passed when the identity holds within 1e-8
        """
        try:
            rho, d_c = self.smith_yard_state(ensemble, channel)
            d = d_c if erasure_dim is None else erasure_dim
            if d < d_c:
                raise ParameterError(f"Erasure dimension {d} is smaller than d_C = {d_c}")
            d = max(d, 2)
            rho = self._pad_ancilla(rho, channel.d_in, d_c, d)
            paired = tensor(channel, erasure(d, HALF))
            value = coherent_information(rho, paired)
            private = private_information(ensemble, channel)
            residual = abs(value - HALF * private)
            logger.info(
                f"Smith-Yard check on {channel.label}: I_c={value:.10f}, P/2={HALF * private:.10f}"
            )
            return SmithYardReport(
                d_c=d_c,
                erasure_dim=d,
                probabilities=list(ensemble.probabilities),
                coherent_information=value,
                private_information=private,
                half_private=HALF * private,
                residual=residual,
                passed=residual <= IDENTITY_TOL,
            )

        except Exception as e:
            logger.error(f"Error in Smith-Yard check for {channel.label}: {e}")
            raise

    def platypus_amplification(
        self,
        s: float,
        t: float,
        lam: float,
        epsilon_grid: Optional[Sequence[float]] = None,
    ) -> AmplificationReport:
        """
        Coherent information gain of N_{s,t} (x) E_{2,lam} from a log-singular perturbation

        The input is u*|00><00| + (1-u*)|psi_eps><psi_eps|, where u* is the
        restricted optimizer and psi_eps moves weight eps into a direction
        that is new on the output side. Case I (support {|0>,|2>}) uses
        sqrt(1-eps)|20> + sqrt(eps)|11>; case II (support {|0>,|1>}) uses
        sqrt(1-eps)|10> + sqrt(eps)|21>.

        Args:
            s: Platypus parameter, positive
            t: Platypus parameter, s + t < 1
            lam: erasure probability
            epsilon_grid: perturbation sizes

        Returns:
            AmplificationReport with gains, analytic and fitted rates
        """
        if s <= 0.0 or s + t >= 1.0 or t < 0.0:
            raise ParameterError(
                f"Amplification needs s > 0, t >= 0 and s + t < 1, got s={s}, t={t}"
            )
        if not 0.0 <= lam <= 1.0:
            raise ParameterError(f"Erasure probability must lie in [0, 1], got {lam}")
        eps_grid = check_epsilon_grid(epsilon_grid)

        u_star, q1_channel = self.capacity_service.q1_platypus_restricted(s, t)
        if q1_channel <= POSITIVE_Q1:
            raise PreconditionError(
                f"q1(N_{{{s},{t}}}) = {q1_channel:.3g} vanishes; "
                "use the smith-yard-demo experiment for this parameter point"
            )

        basis = platypus_subchannel_basis(s, t)
        case = "I" if basis == (0, 2) else "II"
        if case == "I":
            start, shifted = (2, 0), (1, 1)
            weight = s + t
        else:
            start, shifted = (1, 0), (2, 1)
            weight = 1.0 - s
        lambda_bound = (1.0 - weight * u_star) / (1.0 + u_star - 2.0 * weight * u_star)
        rate_b = (1.0 - u_star) * (1.0 - lam)
        rate_e = lam * u_star * (1.0 - u_star) * (1.0 - weight) / (1.0 - weight * u_star)

        anchor = _two_qudit_vector(3, 2, [(1.0, 0, 0)])

        def perturbed(eps: float) -> CMatrix:
            psi = _two_qudit_vector(
                3, 2, [(math.sqrt(1.0 - eps), *start), (math.sqrt(eps), *shifted)]
            )
            return u_star * np.outer(anchor, anchor.conj()) + (1.0 - u_star) * np.outer(
                psi, psi.conj()
            )

        paired = tensor(platypus(s, t), erasure(2, lam))
        baseline = q1_channel + q1_erasure(lam)
        gains = [coherent_information(perturbed(e), paired) - baseline for e in eps_grid]

        rate_b_fit = self.singularity_service.log_singularity_rate(
            lambda e: paired.apply(perturbed(e)), eps_grid
        )
        rate_e_fit = self.singularity_service.log_singularity_rate(
            lambda e: paired.apply_complementary(perturbed(e)), eps_grid
        )
        max_gain = max(gains)
        report = AmplificationReport(
            s=s,
            t=t,
            lam=lam,
            case=case,
            u_star=u_star,
            q1_channel=q1_channel,
            q1_erasure=q1_erasure(lam),
            lambda_bound=lambda_bound,
            inside_region=HALF <= lam < lambda_bound,
            epsilon_grid=eps_grid,
            gains=gains,
            max_gain=max_gain,
            rate_b_estimate=rate_b_fit.rate,
            rate_e_estimate=rate_e_fit.rate,
            rate_b_analytic=rate_b,
            rate_e_analytic=rate_e,
            rate_gap_positive=rate_b_fit.rate > rate_e_fit.rate,
            passed=max_gain > GAIN_THRESHOLD and rate_b_fit.rate > rate_e_fit.rate,
        )
        logger.info(
            f"Amplification at s={s}, t={t}, lam={lam}: case {case}, max gain {max_gain:.3e}"
        )
        return report

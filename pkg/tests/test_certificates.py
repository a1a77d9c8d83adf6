"""
Tests for degradability certificates, simulation checks and fixed points
"""

import numpy as np
import pytest

from qadd.channels.base import Channel
from qadd.channels.calculus import compose, direct_sum
from qadd.core.linalg import max_abs
from qadd.middleware.error_handler import DimensionError, ParameterError
from qadd.models.schemas import Verdict
from qadd.services.capacity_service import CapacityService
from qadd.services.certificate_service import DegradabilityService
from qadd.zoo.amplitude_damping import amplitude_damping, recovered_ad_channel
from qadd.zoo.dephasing import dephasing, gao_channel, gao_factorization
from qadd.zoo.flagged_ad import flagged_ad, flagged_ad_region
from qadd.zoo.platypus import (
    platypus,
    platypus_antideg_certificate,
    platypus_subchannel,
    platypus_subchannel_simulator,
)


@pytest.fixture
def degradability_service(capacity_service):
    return DegradabilityService(capacity_service)


class TestDegradabilityCertificate:
    """Test cases for degradability_certificate"""

    def test_degradable_damping(self, degradability_service):
        """Test A_0.3 is degradable with a verified degrading map"""
        channel = amplitude_damping(0.3)

        certificate = degradability_service.degradability_certificate(channel)

        assert certificate.verdict == Verdict.DEGRADABLE
        assert certificate.residual <= 1e-8
        degraded = compose(certificate.map, channel)
        assert degraded.transfer_distance(channel.complementary()) <= 1e-8

    def test_anti_degradable_damping(self, degradability_service):
        """Test A_0.7 is anti-degradable only"""
        certificate = degradability_service.degradability_certificate(amplitude_damping(0.7))

        assert certificate.verdict == Verdict.ANTI_DEGRADABLE
        assert certificate.degradable.certified is False
        assert certificate.witness is not None

    def test_half_damping_is_both(self, degradability_service):
        """Test A_0.5 is its own complement up to a unitary, so both hold"""
        certificate = degradability_service.degradability_certificate(amplitude_damping(0.5))

        assert certificate.verdict == Verdict.BOTH

    @pytest.mark.parametrize("channel", [dephasing(0.4), Channel.identity(2)])
    def test_degradable_examples(self, degradability_service, channel):
        """Test dephasing and the identity are degradable"""
        certificate = degradability_service.degradability_certificate(channel)

        assert certificate.verdict == Verdict.DEGRADABLE

    def test_summary(self, degradability_service):
        """Test the summary row reports verdict and both sides"""
        summary = degradability_service.degradability_certificate(amplitude_damping(0.3)).summary()

        assert summary["verdict"] == "degradable"
        assert summary["degradable"] is True
        assert summary["anti_degradable"] is False
        assert set(summary) == {"verdict", "residual", "witness", "degradable", "anti_degradable"}

    @pytest.mark.parametrize("point", [(0.2, 0.6), (0.2, 0.3), (0.4, 0.55)])
    def test_platypus_matches_closed_form(self, degradability_service, point):
        """Test the generic certificate of N_{s,t} matches the closed form"""
        numeric = degradability_service.degradability_certificate(platypus(*point))
        closed = platypus_antideg_certificate(*point)

        assert numeric.verdict == closed.verdict
        assert numeric.anti_degradable.min_eigenvalue == pytest.approx(
            closed.anti_degradable.min_eigenvalue, abs=1e-8
        )

    @pytest.mark.parametrize("point", [(0.5, 0.3, 0.6), (0.8, 0.7, 0.6), (0.7, 0.2, 0.6)])
    def test_flagged_mixture_matches_region(self, degradability_service, point):
        """Test the transport certificate reproduces the analytic region"""
        certificate = degradability_service.degradability_certificate(flagged_ad(*point))

        assert certificate.verdict == flagged_ad_region(*point).verdict

    @pytest.mark.slow
    def test_flagged_mixture_scan(self, degradability_service):
        """Test agreement with the analytic region on a coarse interior grid"""
        axis = [0.15, 0.35, 0.65, 0.85]
        for p in (0.3, 0.5, 0.7):
            for gamma in axis:
                for eta in axis:
                    region = flagged_ad_region(p, gamma, eta)
                    if region.boundary:
                        continue
                    certificate = degradability_service.degradability_certificate(
                        flagged_ad(p, gamma, eta)
                    )
                    assert certificate.verdict == region.verdict, (p, gamma, eta)

    @pytest.mark.parametrize(
        "channel",
        [
            amplitude_damping(0.3),
            amplitude_damping(0.7),
            dephasing(0.4),
            platypus(0.2, 0.3),
            flagged_ad(0.5, 0.3, 0.6),
        ],
    )
    def test_complement_mirrors_verdict(self, degradability_service, channel):
        """Test N is degradable exactly when N^c is anti-degradable, and vice versa"""
        direct = degradability_service.degradability_certificate(channel)
        mirrored = degradability_service.degradability_certificate(channel.complementary())

        assert direct.degradable.certified == mirrored.anti_degradable.certified
        assert direct.anti_degradable.certified == mirrored.degradable.certified

    def test_complement_mirrors_random_channels(self, degradability_service, rng):
        """Test the mirror relation on random qubit channels"""
        for _ in range(10):
            channel = Channel.random(rng, 2, 2, 2)

            direct = degradability_service.degradability_certificate(channel)
            mirrored = degradability_service.degradability_certificate(channel.complementary())

            assert direct.degradable.certified == mirrored.anti_degradable.certified
            assert direct.anti_degradable.certified == mirrored.degradable.certified


class TestSimulationCheck:
    """Test cases for simulation_additivity_check"""

    def test_gao_simulation(self):
        """Test the ququart channel is simulated by two dephasing channels"""
        service = DegradabilityService(CapacityService(seed=1, restarts=1, max_iterations=400))
        encoder, decoder = gao_factorization(0.5)
        simulator = direct_sum([dephasing(0.5), dephasing(0.5)])

        report = service.simulation_additivity_check(gao_channel(0.5), simulator, encoder, decoder)

        assert report.simulates
        assert report.simulation_residual <= 1e-12

    def test_platypus_simulation_on_the_edge(self, degradability_service):
        """Test N_sub o A = N_{s,t} at s + t = 1 passes both checks"""
        simulator_map, basis = platypus_subchannel_simulator(0.4, 0.6)

        report = degradability_service.simulation_additivity_check(
            platypus(0.4, 0.6),
            platypus_subchannel(0.4, 0.6, basis=basis),
            simulator_map,
            Channel.identity(3),
        )

        assert report.passed

    def test_trivial_simulation(self, degradability_service):
        """Test a channel simulates itself with identity pre- and post-processing"""
        report = degradability_service.simulation_additivity_check(
            amplitude_damping(0.3), amplitude_damping(0.3), Channel.identity(2), Channel.identity(2)
        )

        assert report.passed
        assert report.q1_simulator == pytest.approx(report.q1_channel)

    def test_dimension_mismatch(self, degradability_service):
        """Test a simulation with the wrong input dimension is refused"""
        with pytest.raises(DimensionError):
            degradability_service.simulation_additivity_check(
                amplitude_damping(0.3),
                Channel.identity(3),
                Channel.identity(3),
                Channel.identity(3),
            )


class TestFixedPoints:
    """Test cases for unique_fixed_point_check"""

    def test_damping_has_unique_fixed_point(self, degradability_service):
        """Test A_gamma fixes only |0><0| while its Kraus span stays three-dimensional"""
        report = degradability_service.unique_fixed_point_check(amplitude_damping(0.3))

        assert report.unique
        assert not report.span_certified
        assert report.span_dimension == 3
        np.testing.assert_allclose(report.fixed_state, np.diag([1.0, 0.0]), atol=1e-10)

    def test_dephasing_unitary_has_many(self, degradability_service):
        """Test a diagonal unitary fixes every diagonal state"""
        channel = Channel.unitary(np.diag([1.0, -1.0]).astype(np.complex128))

        report = degradability_service.unique_fixed_point_check(channel)

        assert not report.unique
        assert report.multiplicity == 2
        assert report.fixed_state is None

    def test_recovered_channel_fixes_reference(self, degradability_service):
        """Test the Petz-recovered damping channel has rho_b as its unique fixed state"""
        rho_b = np.array([[0.6, 0.1 + 0.05j], [0.1 - 0.05j, 0.4]])

        report = degradability_service.unique_fixed_point_check(recovered_ad_channel(0.3, rho_b))

        assert report.unique
        assert max_abs(report.fixed_state - rho_b) <= 1e-8

    def test_product_length_range(self, degradability_service):
        """Test max_len outside [1, 4] is rejected"""
        with pytest.raises(ParameterError):
            degradability_service.unique_fixed_point_check(Channel.identity(3), max_len=5)

    def test_square_channels_only(self, degradability_service):
        """Test channels with d_in != d_out are rejected"""
        with pytest.raises(DimensionError):
            degradability_service.unique_fixed_point_check(platypus_subchannel(0.4, 0.2))

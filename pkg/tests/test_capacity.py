"""
Tests for coherent and private information maximization
"""

import numpy as np
import pytest

from qadd.channels.base import Channel
from qadd.core.linalg import eigvalsh_desc
from qadd.info.entropy import binary_entropy
from qadd.middleware.error_handler import DimensionError, ParameterError
from qadd.models.schemas import OptimizationStrategy
from qadd.services.capacity_service import CapacityService
from qadd.zoo.amplitude_damping import amplitude_damping
from qadd.zoo.dephasing import dephasing
from qadd.zoo.platypus import platypus


class TestCoherentInformation:
    """Test cases for Q1 maximization"""

    def test_identity_multistart(self, capacity_service):
        """Test Q1(id_2) = 1 with the argmax maximally mixed"""
        report = capacity_service.q1_multistart(Channel.identity(2))

        assert report.value == pytest.approx(1.0, abs=1e-6)
        np.testing.assert_allclose(eigvalsh_desc(report.argmax), [0.5, 0.5], atol=1e-3)
        assert report.strategy == OptimizationStrategy.MULTISTART

    def test_dephasing_auto(self, capacity_service):
        """Test Q1(D_alpha) = 1 - h((1+alpha)/2) via the diagonal strategy"""
        report = capacity_service.q1(dephasing(0.4))

        assert report.strategy == OptimizationStrategy.DIAGONAL_GRID
        assert report.warning is None
        assert report.value == pytest.approx(1.0 - binary_entropy(0.7), abs=1e-8)

    def test_anti_degradable_damping_has_zero_q1(self, capacity_service):
        """Test Q1(A_gamma) = 0 for gamma >= 1/2"""
        report = capacity_service.q1(amplitude_damping(0.7))

        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_diagonal_warning_outside_diagonal_families(self, capacity_service, rng):
        """Test the diagonal strategy flags channels without a diagonal optimizer"""
        report = capacity_service.q1(
            Channel.random(rng, 2, 2, 2), strategy=OptimizationStrategy.DIAGONAL_GRID
        )

        assert report.warning is not None

    def test_platypus_restricted_anti_degradable(self, capacity_service):
        """Test the restricted optimizer finds Q1 = 0 for t >= 1/2"""
        u_star, value = capacity_service.q1_platypus_restricted(0.2, 0.6)

        assert 0.0 <= u_star <= 1.0
        assert value == pytest.approx(0.0, abs=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("point", [(0.1, 0.1), (0.3, 0.2)])
    def test_platypus_restricted_matches_diagonal(self, capacity_service, point):
        """Test the single-parameter optimum agrees with the full diagonal search"""
        _, restricted = capacity_service.q1_platypus_restricted(*point)

        diagonal = capacity_service.q1_diagonal(platypus(*point))

        assert restricted > 0.0
        assert restricted == pytest.approx(diagonal.value, abs=1e-6)

    def test_platypus_auto_uses_restricted(self, capacity_service):
        """Test the auto strategy routes Platypus channels to the restricted optimizer"""
        report = capacity_service.q1(platypus(0.2, 0.3))

        assert report.value == pytest.approx(
            capacity_service.q1_platypus_restricted(0.2, 0.3)[1], abs=1e-12
        )

    def test_multistart_deterministic(self):
        """Test equal seeds give equal reports and one value per restart"""
        channel = amplitude_damping(0.3)

        first = CapacityService(seed=5, restarts=3, max_iterations=2000).q1_multistart(channel)
        second = CapacityService(seed=5, restarts=3, max_iterations=2000).q1_multistart(channel)

        assert first.value == second.value
        assert first.restart_values == second.restart_values
        assert len(first.restart_values) == 3
        assert first.restarts == 3

    def test_multistart_needs_restarts(self, capacity_service):
        """Test zero restarts are rejected"""
        with pytest.raises(ParameterError):
            capacity_service.q1_multistart(amplitude_damping(0.3), restarts=0)

    def test_multistart_dimension_limit(self, capacity_service):
        """Test inputs beyond the multistart dimension limit are refused"""
        with pytest.raises(DimensionError):
            capacity_service.q1_multistart(Channel.identity(17))

    def test_degradable_restarts_agree(self):
        """Test restarts on a degradable channel agree within 1e-6 and raise no warning"""
        service = CapacityService(seed=1234, restarts=4)

        report = service.q1_multistart(amplitude_damping(0.3), degradable=True)

        assert max(report.restart_values) - min(report.restart_values) <= 1e-6
        assert report.warning is None

    def test_restart_spread_flagged_on_degradable(self):
        """Test a starved budget leaves restarts apart and the spread is flagged"""
        service = CapacityService(seed=1234, restarts=4, max_iterations=2)
        channel = amplitude_damping(0.3)

        flagged = service.q1_multistart(channel, degradable=True)
        unflagged = service.q1_multistart(channel)

        assert max(flagged.restart_values) - min(flagged.restart_values) > 1e-6
        assert "disagree" in flagged.warning
        assert unflagged.warning is None


class TestPrivateInformation:
    """Test cases for two-state private information"""

    def test_two_state_ensemble(self):
        """Test the ensemble {p: |0><0|, 1-p: u|1><1| + (1-u)|2><2|}"""
        ensemble = CapacityService.two_state_ensemble(0.3, 0.25)

        np.testing.assert_allclose(ensemble.average(), np.diag([0.3, 0.175, 0.525]), atol=1e-14)

    def test_two_state_ensemble_range(self):
        """Test p and u outside [0, 1] are rejected"""
        with pytest.raises(ParameterError):
            CapacityService.two_state_ensemble(1.2, 0.5)

    def test_single_state_has_zero_private_information(self, capacity_service):
        """Test p = 1 carries no information"""
        value = capacity_service.private_information_two_state(platypus(0.2, 0.3), 1.0, 0.5)

        assert value == pytest.approx(0.0, abs=1e-12)

    def test_anti_degradable_platypus(self, capacity_service):
        """Test the two-state private information vanishes for t >= 1/2"""
        optimum = capacity_service.maximize_private_information_two_state(platypus(0.2, 0.6))

        assert abs(optimum.value) <= 1e-6
        assert 0.0 <= optimum.p <= 1.0
        assert 0.0 <= optimum.u <= 1.0

    def test_qutrit_input_required(self, capacity_service):
        """Test qubit channels are rejected"""
        with pytest.raises(DimensionError):
            capacity_service.private_information_two_state(amplitude_damping(0.3), 0.5, 0.5)

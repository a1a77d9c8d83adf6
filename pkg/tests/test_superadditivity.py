"""
Tests for superadditivity constructions with erasure channels
"""

import pytest

from qadd.channels.base import Channel
from qadd.core.random import random_density_matrix
from qadd.info.states import Ensemble, basis_state
from qadd.middleware.error_handler import ParameterError, PreconditionError
from qadd.services.superadditivity_service import SuperadditivityService
from qadd.zoo.amplitude_damping import amplitude_damping
from qadd.zoo.platypus import platypus

ORTHOGONAL_QUBITS = (basis_state(2, 0), basis_state(2, 1))


@pytest.fixture
def superadditivity_service(capacity_service):
    return SuperadditivityService(capacity_service)


def _random_ensemble(rng, d: int, size: int) -> Ensemble:
    weights = rng.random(size) + 0.1
    weights = weights / weights.sum()
    states = tuple(random_density_matrix(rng, d) for _ in range(size))
    return Ensemble(probabilities=tuple(float(w) for w in weights), states=states)


class TestSmithYard:
    """Test cases for the half-private-information construction"""

    def test_identity_channel(self, superadditivity_service):
        """Test orthogonal inputs through the identity give I_c = 1/2"""
        ensemble = Ensemble(probabilities=(0.5, 0.5), states=ORTHOGONAL_QUBITS)

        report = superadditivity_service.smith_yard_check(ensemble, Channel.identity(2))

        assert report.d_c == 2
        assert report.coherent_information == pytest.approx(0.5, abs=1e-10)
        assert report.passed

    @pytest.mark.parametrize(
        "channel, size", [(platypus(0.2, 0.3), 2), (amplitude_damping(0.3), 3)]
    )
    def test_random_ensembles(self, superadditivity_service, rng, channel, size):
        """Test I_c equals half the private information for random mixed ensembles"""
        for _ in range(3):
            ensemble = _random_ensemble(rng, channel.d_in, size)

            report = superadditivity_service.smith_yard_check(ensemble, channel)

            assert report.d_c <= 9
            assert report.residual <= 1e-8
            assert report.passed

    def test_larger_erasure_dimension(self, superadditivity_service):
        """Test padding the ancilla into a larger erasure input leaves the value unchanged"""
        ensemble = Ensemble(probabilities=(0.5, 0.5), states=ORTHOGONAL_QUBITS)

        report = superadditivity_service.smith_yard_check(
            ensemble, amplitude_damping(0.3), erasure_dim=4
        )

        assert report.erasure_dim == 4
        assert report.passed

    def test_erasure_dimension_too_small(self, superadditivity_service, rng):
        """Test an erasure input smaller than d_C is rejected"""
        ensemble = _random_ensemble(rng, 2, 2)

        with pytest.raises(ParameterError):
            superadditivity_service.smith_yard_check(
                ensemble, amplitude_damping(0.3), erasure_dim=2
            )

    def test_ensemble_dimension_mismatch(self, superadditivity_service, rng):
        """Test a qubit ensemble cannot feed a qutrit channel"""
        with pytest.raises(ParameterError):
            superadditivity_service.smith_yard_state(
                _random_ensemble(rng, 2, 2), platypus(0.2, 0.3)
            )


class TestPlatypusAmplification:
    """Test cases for platypus_amplification"""

    @pytest.mark.slow
    def test_gain_with_half_erasure(self, superadditivity_service):
        """Test the perturbed input beats q1(N) + q1(E) with the output rate ahead"""
        report = superadditivity_service.platypus_amplification(0.1, 0.1, 0.5)

        assert report.case == "I"
        assert report.rate_gap_positive
        assert report.max_gain > 0.0
        assert report.passed
        assert report.rate_b_estimate == pytest.approx(report.rate_b_analytic, rel=0.05)
        assert report.rate_e_estimate == pytest.approx(report.rate_e_analytic, rel=0.05)

    def test_zero_q1_is_a_precondition_failure(self, superadditivity_service):
        """Test anti-degradable points are refused"""
        with pytest.raises(PreconditionError):
            superadditivity_service.platypus_amplification(0.2, 0.6, 0.5)

    @pytest.mark.parametrize("s, t, lam", [(0.0, 0.3, 0.5), (0.5, 0.5, 0.5), (0.1, 0.1, 1.5)])
    def test_parameter_range(self, superadditivity_service, s, t, lam):
        """Test s = 0, s + t = 1 and lam outside [0, 1] are rejected"""
        with pytest.raises(ParameterError):
            superadditivity_service.platypus_amplification(s, t, lam)

"""
Tests for the channel zoo
"""

import numpy as np
import pytest

from qadd.channels.base import Channel
from qadd.channels.calculus import compose, compose_all, direct_sum
from qadd.core.linalg import max_abs
from qadd.info.entropy import coherent_information
from qadd.info.states import basis_state
from qadd.middleware.error_handler import ParameterError
from qadd.models.schemas import Verdict
from qadd.services.certificate_service import DegradabilityService
from qadd.zoo.amplitude_damping import (
    ad_compose_inverse,
    ad_inverse,
    ad_transfer,
    amplitude_damping,
    recovered_ad_channel,
    recovered_ad_kraus_11,
)
from qadd.zoo.base import ChannelFamily
from qadd.zoo.dephasing import (
    dephasing,
    gao_channel,
    gao_factorization,
    gao_witness_state,
    q1_dephasing,
)
from qadd.zoo.erasure import erasure, q1_erasure
from qadd.zoo.factory import ChannelFactory
from qadd.zoo.flagged_ad import (
    flagged_ad,
    flagged_ad_antidegrading_map,
    flagged_ad_degrading_map,
    flagged_ad_region,
)
from qadd.zoo.mad import mad_channel, mad_degradable_simulator, mad_simulation
from qadd.zoo.platypus import (
    platypus,
    platypus_antideg_certificate,
    platypus_complementary_kraus,
    platypus_kraus,
    platypus_subchannel,
    platypus_subchannel_antidegrading_map,
    platypus_subchannel_basis,
    platypus_subchannel_degrading_map,
    platypus_subchannel_simulator,
)

RHO_B = np.array([[0.6, 0.1 + 0.05j], [0.1 - 0.05j, 0.4]])


class TestAmplitudeDamping:
    """Test cases for amplitude damping channels"""

    @pytest.mark.parametrize("gamma", [0.0, 0.3, 0.75, 1.0])
    def test_closed_form_transfer(self, gamma):
        """Test the closed-form transfer matrix against the isometry"""
        assert max_abs(ad_transfer(gamma) - amplitude_damping(gamma).transfer) <= 1e-14

    def test_compose_inverse_is_damping(self):
        """Test A_g2 o A_g1^{-1} o A_g1 = A_g2 and its closed form"""
        composed = ad_compose_inverse(0.5, 0.3)

        assert composed.is_cptp()
        assert max_abs(composed.transfer - ad_transfer(0.2 / 0.7)) <= 1e-12
        chained = composed.compose(amplitude_damping(0.3))
        assert max_abs(chained.transfer - ad_transfer(0.5)) <= 1e-12

    def test_compose_inverse_not_cp_when_decreasing(self):
        """Test A_g2 o A_g1^{-1} is not CP for g1 > g2"""
        assert not ad_compose_inverse(0.3, 0.5).is_completely_positive()

    def test_inverse(self):
        """Test A_gamma^{-1} undoes A_gamma but is not a channel"""
        inverse = ad_inverse(0.3)

        assert max_abs(inverse.compose(amplitude_damping(0.3)).transfer - np.eye(4)) <= 1e-12
        assert not inverse.is_completely_positive()
        with pytest.raises(ParameterError):
            ad_inverse(1.0)

    def test_gamma_out_of_range(self):
        """Test damping outside [0, 1] is rejected"""
        with pytest.raises(ParameterError):
            amplitude_damping(1.2)

    def test_recovered_channel_kraus_closed_form(self):
        """Test the Kraus operator R_1 E_1 of the recovered channel against its closed form"""
        gamma = 0.3
        damping = (1.0 - 2.0 * gamma) / (1.0 - gamma)

        channel = recovered_ad_channel(gamma, RHO_B)
        expected = recovered_ad_kraus_11(damping, p=0.4, delta=RHO_B[0, 1])

        assert channel.d_env == 4
        assert max_abs(channel.kraus[3] - expected) <= 1e-10

    def test_recovered_channel_fixes_reference(self):
        """Test the recovered channel fixes rho_b"""
        channel = recovered_ad_channel(0.3, RHO_B)

        assert max_abs(channel.apply(RHO_B) - RHO_B) <= 1e-10

    def test_recovered_channel_needs_small_gamma(self):
        """Test gamma above 1/2 is rejected"""
        with pytest.raises(ParameterError):
            recovered_ad_channel(0.6, RHO_B)


class TestDephasingFamilies:
    """Test cases for dephasing and the ququart-to-qutrit channel"""

    def test_dephasing_action(self):
        """Test D_alpha scales coherences by alpha"""
        plus = np.full((2, 2), 0.5, dtype=np.complex128)

        out = dephasing(0.4).apply(plus)

        np.testing.assert_allclose(out, [[0.5, 0.2], [0.2, 0.5]], atol=1e-14)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.3, 0.9, 1.0])
    def test_gao_factorization(self, alpha):
        """Test D o (D_alpha + D_alpha) o E reproduces the channel on all matrix units"""
        encoder, decoder = gao_factorization(alpha)
        simulator = direct_sum([dephasing(alpha), dephasing(alpha)])

        composed = compose_all(decoder, simulator, encoder)

        assert composed.transfer_distance(gao_channel(alpha)) <= 1e-12

    @pytest.mark.parametrize("alpha", [0.0, 0.2, 0.5, 0.8])
    def test_gao_witness_reaches_dephasing_value(self, alpha):
        """Test the witness state attains 1 - h((1+alpha)/2)"""
        value = coherent_information(gao_witness_state(), gao_channel(alpha))

        assert value == pytest.approx(q1_dephasing(alpha), abs=1e-10)


class TestErasureAndMad:
    """Test cases for erasure and multi-level damping channels"""

    def test_q1_erasure(self):
        """Test Q1 of erasure channels"""
        assert q1_erasure(0.25) == pytest.approx(0.5)
        assert q1_erasure(0.6) == 0.0
        assert q1_erasure(0.25, d=4) == pytest.approx(1.0)

    def test_erasure_parameters(self):
        """Test erasure channels need d >= 2"""
        with pytest.raises(ParameterError):
            erasure(1, 0.5)

    def test_mad_without_damping_is_identity(self):
        """Test MAD(0, 0) is the identity"""
        assert mad_channel(0.0, 0.0).transfer_distance(Channel.identity(3)) <= 1e-14

    def test_mad_decay(self):
        """Test level 2 decays with rates gamma0 and gamma1"""
        out = mad_channel(0.3, 0.4).apply(basis_state(3, 2))

        np.testing.assert_allclose(np.diag(out).real, [0.3, 0.4, 0.3], atol=1e-14)

    def test_mad_simulation(self):
        """Test D o N_hat o E = MAD with a simulator whose rates sum to 1/2"""
        simulator, encoder, decoder = mad_simulation(0.3, 0.4)
        rates = mad_degradable_simulator(0.3, 0.4)

        assert sum(rates) == pytest.approx(0.5)
        assert compose_all(decoder, simulator, encoder).transfer_distance(
            mad_channel(0.3, 0.4)
        ) <= 1e-12

    def test_mad_simulator_needs_small_gamma2(self):
        """Test no simulator is returned when gamma2 >= 1/2"""
        with pytest.raises(ParameterError):
            mad_degradable_simulator(0.2, 0.1)


class TestFlaggedAmplitudeDamping:
    """Test cases for flagged mixtures of amplitude damping channels"""

    @pytest.mark.parametrize(
        "point, verdict",
        [
            ((0.5, 0.3, 0.6), Verdict.DEGRADABLE),
            ((0.2, 0.3, 0.4), Verdict.DEGRADABLE),
            ((0.8, 0.7, 0.6), Verdict.ANTI_DEGRADABLE),
            ((0.7, 0.2, 0.6), Verdict.NEITHER),
            ((0.3, 0.6, 0.8), Verdict.ANTI_DEGRADABLE),
        ],
    )
    def test_region(self, point, verdict):
        """Test the analytic classification at interior points"""
        region = flagged_ad_region(*point)

        assert region.verdict == verdict
        assert not region.boundary

    def test_region_boundary(self):
        """Test a point on gamma + eta = 1 is flagged and satisfies both lists"""
        region = flagged_ad_region(0.5, 0.4, 0.6)

        assert region.boundary
        assert region.verdict == Verdict.BOTH

    @pytest.mark.parametrize("point", [(0.5, 0.3, 0.6), (0.7, 0.3, 0.4), (0.3, 0.4, 0.5)])
    def test_degrading_map(self, point):
        """Test the switch-channel degrading map takes N to N^c"""
        channel = flagged_ad(*point)

        degrading = flagged_ad_degrading_map(*point)

        assert compose(degrading, channel).transfer_distance(channel.complementary()) <= 1e-10

    def test_antidegrading_map(self):
        """Test the anti-degrading map takes N^c to N"""
        channel = flagged_ad(0.8, 0.7, 0.6)

        antidegrading = flagged_ad_antidegrading_map(0.8, 0.7, 0.6)

        assert compose(antidegrading, channel.complementary()).transfer_distance(channel) <= 1e-10

    def test_degrading_map_outside_region(self):
        """Test asking for a degrading map outside the region fails"""
        with pytest.raises(ParameterError):
            flagged_ad_degrading_map(0.8, 0.7, 0.6)

    def test_family_tag(self):
        """Test the mixture carries its family and flag structure"""
        channel = flagged_ad(0.4, 0.2, 0.3)

        assert channel.family == ChannelFamily.FLAGGED_AD
        assert channel.flags.probabilities == pytest.approx((0.6, 0.4))


class TestPlatypus:
    """Test cases for Platypus channels"""

    def test_kraus_operators(self):
        """Test the isometry reproduces the listed Kraus operators of N and N^c"""
        channel = platypus(0.2, 0.3)

        assert max_abs(channel.kraus - platypus_kraus(0.2, 0.3)) <= 1e-14
        complement = channel.complementary()
        assert max_abs(complement.kraus - platypus_complementary_kraus(0.2, 0.3)) <= 1e-14

    def test_action_on_basis(self):
        """Test N|1><1| = N|2><2| = |2><2| and N|0><0| = diag(s, 1-s-t, t)"""
        channel = platypus(0.2, 0.3)

        np.testing.assert_allclose(channel.apply(basis_state(3, 1)), basis_state(3, 2), atol=1e-14)
        np.testing.assert_allclose(channel.apply(basis_state(3, 2)), basis_state(3, 2), atol=1e-14)
        np.testing.assert_allclose(
            np.diag(channel.apply(basis_state(3, 0))).real, [0.2, 0.5, 0.3], atol=1e-14
        )

    def test_zero_columns(self):
        """Test the transfer matrix columns of |2><1| and |1><2| vanish"""
        transfer = platypus(0.3, 0.4).transfer

        assert max_abs(transfer[:, 5]) <= 1e-15
        assert max_abs(transfer[:, 7]) <= 1e-15

    def test_subchannel_basis(self):
        """Test the subchannel basis switches at s = (1-t)/2"""
        assert platypus_subchannel_basis(0.4, 0.2) == (0, 1)
        assert platypus_subchannel_basis(0.1, 0.1) == (0, 2)

    @pytest.mark.parametrize("point", [(0.4, 0.2), (0.1, 0.3)])
    def test_subchannel_degrading_map(self, point):
        """Test the swap-damping map degrades the subchannel"""
        sub = platypus_subchannel(*point)

        degrading = platypus_subchannel_degrading_map(*point)

        assert compose(degrading, sub).transfer_distance(sub.complementary()) <= 1e-12

    @pytest.mark.parametrize("point", [(0.3, 0.5), (0.25, 0.6)])
    def test_subchannel_antidegrading_map(self, point):
        """Test the swap-damping map anti-degrades the subchannel"""
        sub = platypus_subchannel(*point)

        antidegrading = platypus_subchannel_antidegrading_map(*point)

        assert compose(antidegrading, sub.complementary()).transfer_distance(sub) <= 1e-12

    @pytest.mark.parametrize("point", [(0.4, 0.6), (0.0, 0.4)])
    def test_subchannel_simulator(self, point):
        """Test N_sub o A = N_{s,t} at s + t = 1 and at s = 0"""
        simulator, basis = platypus_subchannel_simulator(*point)

        composed = compose(platypus_subchannel(*point, basis=basis), simulator)

        assert composed.transfer_distance(platypus(*point)) <= 1e-12

    def test_no_simulator_inside(self):
        """Test the simulator is refused for s > 0 and s + t < 1"""
        with pytest.raises(ParameterError):
            platypus_subchannel_simulator(0.2, 0.3)

    def test_closed_form_certificate(self):
        """Test degradability is refuted and anti-degradability switches at t = 1/2"""
        assert platypus_antideg_certificate(0.2, 0.6).verdict == Verdict.ANTI_DEGRADABLE
        assert platypus_antideg_certificate(0.2, 0.3).verdict == Verdict.NEITHER
        assert platypus_antideg_certificate(0.5, 0.0).verdict == Verdict.INDETERMINATE

    @pytest.mark.parametrize("s", [0.0, 0.2, 0.4])
    def test_anti_degradability_threshold(self, s):
        """Test the Choi minimum eigenvalue of the unique candidate crosses zero at t = 1/2"""
        below = platypus_antideg_certificate(s, 0.499)
        above = platypus_antideg_certificate(s, 0.501)

        assert below.anti_degradable.certified is False
        assert below.anti_degradable.min_eigenvalue < 0.0
        assert above.anti_degradable.certified is True
        assert below.degradable.certified is False

    @pytest.mark.parametrize("point", [(0.2, 0.6), (0.2, 0.3), (0.1, 0.45)])
    def test_certificate_matches_numeric(self, point):
        """Test the closed form agrees with the generic certificate"""
        numeric = DegradabilityService().degradability_certificate(platypus(*point))

        assert numeric.verdict == platypus_antideg_certificate(*point).verdict


class TestChannelFactory:
    """Test cases for ChannelFactory"""

    def test_from_spec(self):
        """Test parsing and building a Platypus channel"""
        channel = ChannelFactory.from_spec("platypus:0.2,0.3")

        assert channel.family == ChannelFamily.PLATYPUS
        assert channel.params == {"s": 0.2, "t": 0.3}
        assert channel.transfer_distance(platypus(0.2, 0.3)) == 0.0

    @pytest.mark.parametrize(
        "spec, dims",
        [
            ("ad:0.3", (2, 2)),
            ("dephasing:0.4", (2, 2)),
            ("gao:0.5", (4, 3)),
            ("mad:0.2,0.3", (3, 3)),
            ("flagged_ad:0.4,0.2,0.3", (2, 4)),
            ("erasure:3,0.25", (3, 4)),
        ],
    )
    def test_every_family(self, spec, dims):
        """Test each family spec builds a channel of the right dimensions"""
        channel = ChannelFactory.from_spec(spec)

        assert (channel.d_in, channel.d_out) == dims

    @pytest.mark.parametrize(
        "spec",
        ["unknown:0.1", "ad:0.1,0.2", "ad:1.5", "ad:abc", "platypus:0.7,0.6", "erasure:1,0.5"],
    )
    def test_invalid_specs(self, spec):
        """Test unsupported families, wrong counts and invalid values raise ParameterError"""
        with pytest.raises(ParameterError):
            ChannelFactory.from_spec(spec)

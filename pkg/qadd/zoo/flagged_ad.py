"""
Flagged mixtures of two amplitude-damping channels and their degradability region
"""

from loguru import logger

from qadd.channels.base import Channel
from qadd.channels.calculus import flagged, switch_sum
from qadd.config import settings
from qadd.middleware.error_handler import ParameterError
from qadd.models.schemas import RegionVerdict
from qadd.zoo.amplitude_damping import ad_compose_inverse, amplitude_damping
from qadd.zoo.base import ChannelFamily

HALF_TOL = 1e-12


def _check_unit(**values: float) -> None:
    for name, value in values.items():
        if not 0.0 <= value <= 1.0:
            raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def flagged_ad(p: float, gamma: float, eta: float) -> Channel:
    """(1-p)|0><0| (x) A_gamma + p|1><1| (x) A_eta"""
    _check_unit(p=p, gamma=gamma, eta=eta)
    mixture = flagged([1.0 - p, p], [amplitude_damping(gamma), amplitude_damping(eta)])
    return Channel(
        mixture.isometry,
        label=f"FAD({p:g},{gamma:g},{eta:g})",
        family=ChannelFamily.FLAGGED_AD,
        params={"p": float(p), "gamma": float(gamma), "eta": float(eta)},
        flags=mixture.flags,
    )


def _degradable_conditions(p: float, gamma: float, eta: float, tol: float) -> bool:
    if abs(p - 0.5) <= HALF_TOL:
        return gamma + eta <= 1.0 + tol
    if p > 0.5:
        return gamma + eta <= 1.0 + tol and eta <= 0.5 + tol
    return gamma + eta <= 1.0 + tol and gamma <= 0.5 + tol


def flagged_ad_region(p: float, gamma: float, eta: float) -> RegionVerdict:
    """
    Analytic degradability classification of the flagged mixture

    Anti-degradability is degradability of the complementary mixture, which
    is the same family at (1 - gamma, 1 - eta). Points within the boundary
    tolerance of a region edge carry the boundary flag and may satisfy both lists.

    Args:
        p: probability of the eta branch
        gamma: damping of the first branch
        eta: damping of the second branch

    Returns:
        RegionVerdict
    """
    _check_unit(p=p, gamma=gamma, eta=eta)
    tol = settings.BOUNDARY_TOL
    degradable = _degradable_conditions(p, gamma, eta, tol)
    anti_degradable = _degradable_conditions(p, 1.0 - gamma, 1.0 - eta, tol)

    margins = [gamma + eta - 1.0]
    if abs(p - 0.5) > HALF_TOL:
        margins.append((eta if p > 0.5 else gamma) - 0.5)
    boundary = any(abs(m) <= tol for m in margins)
    if boundary:
        logger.warning(f"Flagged AD point ({p}, {gamma}, {eta}) lies on a region boundary")
    return RegionVerdict(degradable=degradable, anti_degradable=anti_degradable, boundary=boundary)


def _branch_map(target: float, source: float) -> Channel:
    """Qubit channel taking A_source to A_target, i.e. A_target o A_source^{-1}"""
    if source >= 1.0:
        return Channel.identity(2)
    target = max(target, source) if source - target <= settings.BOUNDARY_TOL else target
    return ad_compose_inverse(target, source).to_channel(label=f"D({source:g}->{target:g})")


def flagged_ad_degrading_map(p: float, gamma: float, eta: float) -> Channel:
    """
    Switch-channel degrading map of the flagged mixture

    p = 1/2:  S10 (x) D1 + S01 (x) D2
    p > 1/2:  S10 (x) D1 + (2p-1)/p S11 (x) D2 + (1-p)/p S01 (x) D3
    p < 1/2:  p/(1-p) S10 (x) D1 + (1-2p)/(1-p) S00 (x) D2 + S01 (x) D3

    with branch maps between amplitude-damping outputs realized in closed form.
    """
    region = flagged_ad_region(p, gamma, eta)
    if not region.degradable:
        raise ParameterError(f"Flagged AD mixture ({p}, {gamma}, {eta}) is not degradable")

    if abs(p - 0.5) <= HALF_TOL:
        terms = [
            (1.0, 1, 0, _branch_map(1.0 - eta, gamma)),
            (1.0, 0, 1, _branch_map(1.0 - gamma, eta)),
        ]
    elif p > 0.5:
        terms = [
            (1.0, 1, 0, _branch_map(1.0 - eta, gamma)),
            ((2.0 * p - 1.0) / p, 1, 1, _branch_map(1.0 - eta, eta)),
            ((1.0 - p) / p, 0, 1, _branch_map(1.0 - gamma, eta)),
        ]
    else:
        terms = [
            (p / (1.0 - p), 1, 0, _branch_map(1.0 - eta, gamma)),
            ((1.0 - 2.0 * p) / (1.0 - p), 0, 0, _branch_map(1.0 - gamma, gamma)),
            (1.0, 0, 1, _branch_map(1.0 - gamma, eta)),
        ]
    terms = [term for term in terms if term[0] > 0.0]
    return switch_sum(terms, d_flag=2, label=f"degrading FAD({p:g},{gamma:g},{eta:g})")


def flagged_ad_antidegrading_map(p: float, gamma: float, eta: float) -> Channel:
    """Degrading map of the complementary mixture, which is the family at (1-gamma, 1-eta)"""
    return flagged_ad_degrading_map(p, 1.0 - gamma, 1.0 - eta)

"""
Channel factory: family spec strings to channels
"""

from loguru import logger
from pydantic import ValidationError

from qadd.channels.base import Channel
from qadd.middleware.error_handler import ParameterError
from qadd.zoo.amplitude_damping import amplitude_damping
from qadd.zoo.base import (
    AmplitudeDamping,
    ChannelFamily,
    Dephasing,
    Erasure,
    FamilyParameters,
    FlaggedADMixture,
    Gao,
    MultiLevelAmplitudeDamping,
    Platypus,
)
from qadd.zoo.dephasing import dephasing, gao_channel
from qadd.zoo.erasure import erasure
from qadd.zoo.flagged_ad import flagged_ad
from qadd.zoo.mad import mad_channel
from qadd.zoo.platypus import platypus

_PARAMETER_MODELS: dict[ChannelFamily, type[FamilyParameters]] = {
    ChannelFamily.AMPLITUDE_DAMPING: AmplitudeDamping,
    ChannelFamily.DEPHASING: Dephasing,
    ChannelFamily.GAO: Gao,
    ChannelFamily.MAD: MultiLevelAmplitudeDamping,
    ChannelFamily.FLAGGED_AD: FlaggedADMixture,
    ChannelFamily.PLATYPUS: Platypus,
    ChannelFamily.ERASURE: Erasure,
}


class ChannelFactory:
    """Factory for creating zoo channels"""

    @staticmethod
    def parse(spec: str) -> FamilyParameters:
        """
        Parse a family spec string such as "platypus:0.2,0.3"

        Args:
            spec: "<family>:<comma separated parameters>"

        Returns:
            Validated family parameters
        """
        name, _, raw = spec.strip().partition(":")
        try:
            family = ChannelFamily(name.strip().lower())
        except ValueError:
            raise ParameterError(f"Unsupported channel family: {name}")

        model = _PARAMETER_MODELS[family]
        fields = list(model.model_fields)
        values = [v.strip() for v in raw.split(",")] if raw.strip() else []
        if len(values) != len(fields):
            raise ParameterError(
                f"Family '{family.value}' expects {len(fields)} parameters ({', '.join(fields)}), "
                f"got {len(values)}"
            )
        try:
            return model(**dict(zip(fields, values)))
        except ValidationError as e:
            raise ParameterError(f"Invalid parameters for '{family.value}': {e.errors()}")

    @staticmethod
    def create_channel(params: FamilyParameters) -> Channel:
        """
        Create a channel from validated family parameters

        Args:
            params: family parameter model

        Returns:
            Channel tagged with its family and parameters
        """
        if isinstance(params, AmplitudeDamping):
            logger.debug(f"Creating amplitude damping channel: gamma={params.gamma}")
            return amplitude_damping(params.gamma)

        elif isinstance(params, Dephasing):
            logger.debug(f"Creating dephasing channel: alpha={params.alpha}")
            return dephasing(params.alpha)

        elif isinstance(params, Gao):
            logger.debug(f"Creating Gao channel: alpha={params.alpha}")
            return gao_channel(params.alpha)

        elif isinstance(params, MultiLevelAmplitudeDamping):
            logger.debug(f"Creating MAD channel: gamma0={params.gamma0}, gamma1={params.gamma1}")
            return mad_channel(params.gamma0, params.gamma1)

        elif isinstance(params, FlaggedADMixture):
            logger.debug(
                f"Creating flagged AD mixture: p={params.p}, gamma={params.gamma}, eta={params.eta}"
            )
            return flagged_ad(params.p, params.gamma, params.eta)

        elif isinstance(params, Platypus):
            logger.debug(f"Creating Platypus channel: s={params.s}, t={params.t}")
            return platypus(params.s, params.t)

        elif isinstance(params, Erasure):
            logger.debug(f"Creating erasure channel: d={params.d}, lam={params.lam}")
            return erasure(params.d, params.lam)

        else:
            raise ParameterError(f"Unsupported channel family: {type(params).__name__}")

    @staticmethod
    def from_spec(spec: str) -> Channel:
        """Parse and build in one step"""
        return ChannelFactory.create_channel(ChannelFactory.parse(spec))

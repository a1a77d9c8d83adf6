"""
Named channel families and their parameter models
"""

from enum import Enum
from typing import ClassVar

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ChannelFamily(str, Enum):
    """Supported channel families, keyed by their spec-string prefix"""

    AMPLITUDE_DAMPING = "ad"
    DEPHASING = "dephasing"
    GAO = "gao"
    MAD = "mad"
    FLAGGED_AD = "flagged_ad"
    PLATYPUS = "platypus"
    ERASURE = "erasure"


# Families whose coherent information is maximized by a state diagonal in the
# computational basis
DIAGONAL_OPTIMAL = frozenset(
    {
        ChannelFamily.AMPLITUDE_DAMPING,
        ChannelFamily.DEPHASING,
        ChannelFamily.FLAGGED_AD,
        ChannelFamily.PLATYPUS,
        ChannelFamily.ERASURE,
    }
)

SIMPLEX_SLACK = 1e-12


class FamilyParameters(BaseModel):
    """Validated parameters of one family member"""

    model_config = ConfigDict(frozen=True)

    family: ClassVar[ChannelFamily]


class AmplitudeDamping(FamilyParameters):
    """Qubit amplitude damping A_gamma"""

    family: ClassVar[ChannelFamily] = ChannelFamily.AMPLITUDE_DAMPING
    gamma: float = Field(ge=0.0, le=1.0)


class Dephasing(FamilyParameters):
    """Qubit dephasing D_alpha"""

    family: ClassVar[ChannelFamily] = ChannelFamily.DEPHASING
    alpha: float = Field(ge=-1.0, le=1.0)


class Gao(FamilyParameters):
    """Ququart-to-qutrit dephasing-type channel Phi_alpha"""

    family: ClassVar[ChannelFamily] = ChannelFamily.GAO
    alpha: float = Field(ge=-1.0, le=1.0)


class MultiLevelAmplitudeDamping(FamilyParameters):
    """Qutrit amplitude damping with decay rates gamma0, gamma1 from level 2"""

    family: ClassVar[ChannelFamily] = ChannelFamily.MAD
    gamma0: float = Field(ge=0.0, le=1.0)
    gamma1: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_simplex(self) -> "MultiLevelAmplitudeDamping":
        if self.gamma0 + self.gamma1 > 1.0 + SIMPLEX_SLACK:
            raise ValueError("gamma0 + gamma1 must not exceed 1")
        return self


class FlaggedADMixture(FamilyParameters):
    """(1-p)|0><0| (x) A_gamma + p|1><1| (x) A_eta"""

    family: ClassVar[ChannelFamily] = ChannelFamily.FLAGGED_AD
    p: float = Field(ge=0.0, le=1.0)
    gamma: float = Field(ge=0.0, le=1.0)
    eta: float = Field(ge=0.0, le=1.0)


class Platypus(FamilyParameters):
    """Qutrit Platypus channel N_{s,t}"""

    family: ClassVar[ChannelFamily] = ChannelFamily.PLATYPUS
    s: float = Field(ge=0.0, le=1.0)
    t: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_simplex(self) -> "Platypus":
        if self.s + self.t > 1.0 + SIMPLEX_SLACK:
            raise ValueError("s + t must not exceed 1")
        return self


class Erasure(FamilyParameters):
    """Erasure channel E_{d,lambda}"""

    family: ClassVar[ChannelFamily] = ChannelFamily.ERASURE
    d: int = Field(ge=2)
    lam: float = Field(ge=0.0, le=1.0)

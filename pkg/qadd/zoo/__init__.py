"""
Named channel families
"""

from qadd.zoo.base import ChannelFamily, FamilyParameters
from qadd.zoo.factory import ChannelFactory

__all__ = ["ChannelFamily", "FamilyParameters", "ChannelFactory"]

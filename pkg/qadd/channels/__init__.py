"""
Channel representations and calculus
"""

from qadd.channels.base import Channel, FlagStructure, Isometry, SuperOperator

__all__ = ["Channel", "FlagStructure", "Isometry", "SuperOperator"]

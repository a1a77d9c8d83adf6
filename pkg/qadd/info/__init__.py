"""
States and entropic functionals
"""

from qadd.info.states import Ensemble, validate_state

__all__ = ["Ensemble", "validate_state"]

"""
qadd - additivity toolkit for finite-dimensional quantum channels
"""

__version__ = "1.0.0"

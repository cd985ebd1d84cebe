"""
Entropy conserving and entropy stable finite volume schemes for ideal MHD.
"""

__version__ = "1.0.0"

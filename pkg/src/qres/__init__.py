"""Embedded Q-resolutions of plane curve germs and of superisolated and
Yomdin-Le surface singularities, with the monodromy zeta function."""

__version__ = "0.1.0"

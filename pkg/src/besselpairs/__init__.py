"""Bessel pairs: Hardy and Hardy-Rellich constants by shooting, closed forms and a discrete oracle."""

__version__ = "1.0.1"

"""Exact generating series for labelled partitions, type D Young walls and coin fountains."""

from .series import TruncatedSeries
from .cyclotomic import CyclotomicInt

__all__ = ["TruncatedSeries", "CyclotomicInt"]
__version__ = "0.1.0"

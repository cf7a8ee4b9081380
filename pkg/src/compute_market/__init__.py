"""compute-market: simulator and game analysis for a mediated computation-outsourcing market."""

__version__ = "0.1.0"

"""Online prediction for streaming tensor time series via joint Tucker factorization."""

__version__ = "0.1.0"

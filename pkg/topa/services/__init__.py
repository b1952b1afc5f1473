"""Numerical services: kernels, regression, predictor engine, I/O."""

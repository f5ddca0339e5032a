"""Weighted-disk solvers: per-mode Green's functions, weighted norms,
weight-regime Fredholm classification, and near-kernel sequence diagnostics
for the operators lap - 1, lap - 1/r^2 - 1 and lap - 1/r^2 on the plane."""

__version__ = "0.1.0"

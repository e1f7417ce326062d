"""Quadrature grids for verification integrals.

Gauss-Hermite nodes serve the Gaussian-enveloped integrands (thermal
convolutions, full-space normalizations); Gauss-Legendre tensor grids are
used for the lower-dimensional marginal-consistency checks.
"""

from __future__ import annotations

import numpy as np


def hermite_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals of the form int e^{-x^2} f(x) dx."""
    return np.polynomial.hermite.hermgauss(n)


def legendre_grid(half_width: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-half_width, half_width]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x * half_width, w * half_width


def tensor_grid(axes: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    """Tensor product of per-axis (nodes, weights); returns points of shape
    (N, len(axes)) and combined weights of shape (N,)."""
    node_list = [a[0] for a in axes]
    weight_list = [a[1] for a in axes]
    mesh = np.meshgrid(*node_list, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    wmesh = np.meshgrid(*weight_list, indexing="ij")
    wts = np.prod(np.stack([m.reshape(-1) for m in wmesh], axis=-1), axis=1)
    return pts, wts

"""Finite-difference calculus and quadrature on Grid1D samples.

Second-order stencils throughout: central differences in the interior,
wraparound on periodic grids, one-sided second-order stencils at
reflecting boundaries.  Quadrature is the plain Riemann sum on rings and
the trapezoid rule on lines, matching ``Grid1D.quadrature_weights``.
"""
from __future__ import annotations

import numpy as np

from .errors import StructuralError
from .grid import Grid1D


def _check_length(values: np.ndarray, grid: Grid1D) -> None:
    if values.shape != (grid.n_points,):
        raise StructuralError(
            f"field length {values.shape} does not match grid ({grid.n_points},)"
        )


def gradient_values(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """First derivative of raw samples."""
    _check_length(values, grid)
    f = values
    dx = grid.dx
    if grid.periodic:
        return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * dx)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
    g[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
    return g


def laplacian_values(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Second derivative of raw samples, 3-point stencil."""
    _check_length(values, grid)
    f = values
    inv = 1.0 / (grid.dx * grid.dx)
    if grid.periodic:
        return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) * inv
    lap = np.empty_like(f)
    lap[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) * inv
    lap[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv
    lap[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) * inv
    return lap


def integrate_values(values: np.ndarray, grid: Grid1D) -> float:
    _check_length(values, grid)
    return float(np.dot(grid.quadrature_weights, values))


def wrap_steps(steps: np.ndarray, period: float) -> np.ndarray:
    """Reduce increments modulo ``period`` into ``(-period/2, period/2]``."""
    half = 0.5 * period
    return steps - period * np.ceil((steps - half) / period)


def phase_gradient_values(values: np.ndarray, grid: Grid1D, period: float) -> np.ndarray:
    """Gradient of a field defined modulo ``period`` (e.g. S modulo 2*pi*hbar).

    Neighbour increments are wrapped into ``(-period/2, period/2]`` before
    the usual second-order stencils are applied, so fields that wind around
    a ring (plane-wave phases) differentiate cleanly across the seam.  On
    smooth data with increments below half a period this is identical to
    ``gradient_values``.
    """
    _check_length(values, grid)
    f = values
    dx = grid.dx
    if grid.periodic:
        steps = wrap_steps(np.roll(f, -1) - f, period)  # steps[i] = f[i+1] - f[i]
        return (steps + np.roll(steps, 1)) / (2.0 * dx)
    steps = wrap_steps(np.diff(f), period)
    g = np.empty_like(f)
    g[1:-1] = (steps[1:] + steps[:-1]) / (2.0 * dx)
    g[0] = (3.0 * steps[0] - steps[1]) / (2.0 * dx)
    g[-1] = (3.0 * steps[-1] - steps[-2]) / (2.0 * dx)
    return g

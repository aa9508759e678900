"""Primitives on the unit circle and disk.

Points of the open disk and the circle, the Möbius involutions
``lambda_a(z) = (a - z)/(1 - conj(a) z)``, and the equispaced quadrature
grid that discretizes the normalized arc-length measure ``dm``.  The grid
rule is the periodic trapezoid rule, which is spectrally accurate for
integrands analytic in an annulus around the circle, so grids are doubled
until two successive values agree.

Everything in this module is an immutable value or a pure function; all
objects are safe to share between threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi

# Strict interiority: |z| >= 1 - DISK_EDGE_TOL is rejected as a disk point.
DISK_EDGE_TOL = 1e-15

# Closed-disk membership checks allow this much rounding slop.
CLOSED_DISK_TOL = 1e-12

DEFAULT_GRID_SIZE = 512
MAX_GRID_SIZE = 1 << 16
GRID_STABILITY_TOL = 1e-12


class NonConvergenceError(RuntimeError):
    """A grid refinement or radial limit failed to stabilize within budget."""


@dataclass(frozen=True)
class DiskPoint:
    """A point strictly inside the open unit disk."""

    value: complex

    def __post_init__(self) -> None:
        v = complex(self.value)
        object.__setattr__(self, "value", v)
        if abs(v) >= 1.0 - DISK_EDGE_TOL:
            raise ValueError(f"not strictly inside the unit disk: {v!r}")


@dataclass(frozen=True)
class CirclePoint:
    """The point exp(i*angle) on the unit circle, angle normalized to [0, 2pi)."""

    angle: float

    def __post_init__(self) -> None:
        a = math.fmod(float(self.angle), TWO_PI)
        if a < 0.0:
            a += TWO_PI
        if a >= TWO_PI:  # fmod can land exactly on 2pi after the shift
            a = 0.0
        object.__setattr__(self, "angle", a)

    @cached_property
    def value(self) -> complex:
        return cmath.exp(1j * self.angle)

    @classmethod
    def from_complex(cls, z: complex, tol: float = 1e-9) -> "CirclePoint":
        """Project a (numerically) unimodular number onto the circle."""
        if abs(abs(z) - 1.0) > tol:
            raise ValueError(f"not on the unit circle: {z!r}")
        return cls(cmath.phase(z))


@dataclass(frozen=True)
class MobiusMap:
    """The disk involution lambda_a(z) = (a - z)/(1 - conj(a) z)."""

    a: DiskPoint


def _require_closed_disk(z, tol: float = CLOSED_DISK_TOL) -> None:
    if np.max(np.abs(z)) > 1.0 + tol:
        raise ValueError("argument lies outside the closed unit disk")


def mobius_eval(m: MobiusMap, z):
    """Evaluate lambda_a at ``z`` (scalar or array) with |z| <= 1.

    Maps the open disk onto itself and the circle onto itself; the
    denominator cannot vanish for |a| < 1, |z| <= 1, so a vanishing
    denominator signals corrupted inputs rather than a user error.
    """
    _require_closed_disk(z)
    a = m.a.value
    denom = 1.0 - np.conjugate(a) * z
    if np.min(np.abs(denom)) < 1e-15:
        raise ArithmeticError("Möbius denominator vanished on the closed disk")
    return (a - z) / denom


def mobius_compose_self(m: MobiusMap, z):
    """lambda_a(lambda_a(z)); equals z up to rounding since lambda_a is an involution."""
    return mobius_eval(m, mobius_eval(m, z))


@dataclass(frozen=True)
class QuadratureGrid:
    """N equispaced circle nodes t_k = exp(2 pi i k / N), each with weight 1/N."""

    node_count: int

    def __post_init__(self) -> None:
        n = int(self.node_count)
        object.__setattr__(self, "node_count", n)
        if n < 1:
            raise ValueError("node_count must be a positive integer")

    @cached_property
    def nodes(self) -> np.ndarray:
        k = np.arange(self.node_count)
        return np.exp(2j * np.pi * k / self.node_count)

    @property
    def weight(self) -> float:
        return 1.0 / self.node_count


def grid_integrate(grid: QuadratureGrid, samples) -> complex:
    """Mean of the samples: the trapezoid rule for integrals against dm."""
    samples = np.asarray(samples)
    if samples.shape != (grid.node_count,):
        raise ValueError(
            f"expected {grid.node_count} samples, got shape {samples.shape}"
        )
    return complex(np.mean(samples))


def refine_until_stable(
    evaluate: Callable[[QuadratureGrid], complex],
    start: int = DEFAULT_GRID_SIZE,
    tol: float = GRID_STABILITY_TOL,
    cap: int = MAX_GRID_SIZE,
) -> tuple[complex, int]:
    """Double the grid until two successive values differ by less than ``tol``.

    Returns the stabilized value and the node count that achieved it.
    Raises NonConvergenceError when the cap is reached, which happens for
    integrands whose analyticity annulus is too thin for the cap.
    """
    n = start
    prev = evaluate(QuadratureGrid(n))
    while n <= cap // 2:
        n *= 2
        cur = evaluate(QuadratureGrid(n))
        if abs(cur - prev) < tol:
            return cur, n
        prev = cur
    raise NonConvergenceError(
        f"quadrature did not stabilize to {tol:g} within {cap} nodes"
    )


def circle_angles(count: int) -> np.ndarray:
    """``count`` equispaced angles in [0, 2pi), starting at 0."""
    if count < 1:
        raise ValueError("count must be positive")
    return TWO_PI * np.arange(count) / count


def disk_grid(radial: int = 16, angular: int = 16, max_radius: float = 0.999) -> np.ndarray:
    """A polar test grid in the open disk, radii up to ``max_radius``."""
    radii = np.linspace(max_radius / radial, max_radius, radial)
    angles = circle_angles(angular)
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()

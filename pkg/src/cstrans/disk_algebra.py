"""Polynomial test functions with certified boundary sup-norms.

The dual pairing in ``norm_engine`` ranges over the unit ball of the disk
algebra; polynomials are dense there and admit a cheap rigorous sup-norm
certificate.  Sampling |h| at N equispaced circle points and dividing the
maximum by (1 - d*pi/N) gives a guaranteed upper bound, because the
derivative bound |h'| <= d * sup|h| on the circle limits how much |h| can
grow between adjacent samples (inter-sample half-gap pi/N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circle import circle_angles

# Automated searches never go past this degree; certification cost grows
# linearly while pairing suprema against smooth kernels gain little.
SEARCH_DEGREE_CAP = 64


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.asarray(list(coeffs), dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coeffs must be a nonempty 1-d sequence")
    return arr


def poly_degree(coeffs) -> int:
    """Degree after trimming trailing zero coefficients (0 for the zero poly)."""
    arr = _as_coeff_array(coeffs)
    nz = np.nonzero(arr)[0]
    return int(nz[-1]) if nz.size else 0


def default_sample_count(degree: int) -> int:
    return max(256, 64 * degree)


def coefficient_sum_bound(coeffs) -> float:
    """Crude but exact upper bound sum |c_k| >= sup |h| on the circle."""
    return float(np.sum(np.abs(_as_coeff_array(coeffs))))


def poly_eval(coeffs_or_poly, z):
    """Horner evaluation on the closed disk (scalar or array argument)."""
    coeffs = (
        coeffs_or_poly.coeffs
        if isinstance(coeffs_or_poly, DiskAlgebraPoly)
        else coeffs_or_poly
    )
    arr = _as_coeff_array(coeffs)
    if np.max(np.abs(z)) > 1.0 + 1e-12:
        raise ValueError("polynomial test functions live on the closed unit disk")
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in arr[::-1]:
        acc = acc * z + c
    return complex(acc) if np.ndim(z) == 0 else acc


@lru_cache(maxsize=16)
def _circle_nodes(sample_count: int) -> np.ndarray:
    nodes = np.exp(1j * circle_angles(sample_count))
    nodes.setflags(write=False)
    return nodes


def boundary_samples(coeffs, sample_count: int) -> np.ndarray:
    nodes = _circle_nodes(sample_count)
    arr = _as_coeff_array(coeffs)
    acc = np.zeros_like(nodes)
    for c in arr[::-1]:
        acc = acc * nodes + c
    return acc


def certify_sup_norm(coeffs, sample_count: int) -> float:
    """Certified upper bound for sup |h| on the circle from equispaced samples.

    Returns max_k |h(t_k)| / (1 - d*pi/N).  Requires N > pi*d so the
    correction factor is positive.
    """
    arr = _as_coeff_array(coeffs)
    d = poly_degree(arr)
    if sample_count <= math.pi * d:
        raise ValueError(f"sample_count {sample_count} too small for degree {d}")
    if not np.any(arr):
        return 0.0
    peak = float(np.max(np.abs(boundary_samples(arr, sample_count))))
    return peak / (1.0 - d * math.pi / sample_count)


@dataclass(frozen=True)
class DiskAlgebraPoly:
    """A polynomial together with a certified upper bound for its sup-norm.

    ``certified_sup`` always dominates the true boundary sup-norm and never
    exceeds the coefficient-sum bound (the constructor's certificate is the
    smaller of the Bernstein-corrected sample maximum and the coefficient
    sum, both of which are sound).
    """

    coeffs: tuple[complex, ...]
    certified_sup: float

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "certified_sup", float(self.certified_sup))
        if not coeffs:
            raise ValueError("empty coefficient list")
        if self.certified_sup < 0:
            raise ValueError("certified_sup must be nonnegative")
        if self.certified_sup > coefficient_sum_bound(coeffs) * (1 + 1e-12):
            raise ValueError("certified_sup exceeds the coefficient-sum bound")

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)

    def __call__(self, z):
        return poly_eval(self.coeffs, z)


def make_poly(coeffs, sample_count: int | None = None) -> DiskAlgebraPoly:
    """Certify and wrap raw coefficients."""
    arr = _as_coeff_array(coeffs)
    n = sample_count if sample_count is not None else default_sample_count(poly_degree(arr))
    cert = min(certify_sup_norm(arr, n), coefficient_sum_bound(arr))
    return DiskAlgebraPoly(tuple(arr), cert)


def sample_unit_ball(degree: int, seed: int) -> DiskAlgebraPoly:
    """A random polynomial scaled into the certified unit ball.

    Coefficients are drawn uniformly from the complex square
    [-1,1] x [-1,1] (deterministically in ``seed``) and divided by the
    certified sup-norm of the draw, so the result's certificate is <= 1.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, degree + 1) + 1j * rng.uniform(-1.0, 1.0, degree + 1)
    n = default_sample_count(degree)
    scale = min(certify_sup_norm(coeffs, n), coefficient_sum_bound(coeffs))
    if scale == 0.0:  # zero draw has probability zero but stay defensive
        coeffs[0] = 1.0
        scale = 1.0
    scaled = coeffs / scale
    # Rescaling by a sound certificate keeps the true sup <= 1, so 1.0 is
    # itself a sound certificate; take the smaller of the two.
    cert = min(certify_sup_norm(scaled, n), coefficient_sum_bound(scaled), 1.0)
    return DiskAlgebraPoly(tuple(scaled), cert)


def monomial(m: int) -> DiskAlgebraPoly:
    """z^m with exact certificate 1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    coeffs = (0.0 + 0.0j,) * m + (1.0 + 0.0j,)
    return DiskAlgebraPoly(coeffs, 1.0)


def poly_to_obj(h: DiskAlgebraPoly) -> dict:
    return {
        "coeffs": [[float(c.real), float(c.imag)] for c in h.coeffs],
        "certified_sup": float(h.certified_sup),
    }

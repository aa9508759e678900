"""Analytic self-maps of the disk and their base-point factorization.

Supported shapes: polynomials (validated at construction by a certified
boundary sup-norm <= 1), finite Blaschke products, Möbius involutions,
and Möbius-precomposed compositions.  Every map phi with |phi(0)| < 1
factors as phi = lambda_a o psi with a = phi(0) and psi(0) = 0; psi is
kept as the symbolic composition lambda_a o phi (re-expanding a Möbius of
a polynomial would leave the polynomial class), and the involution
property makes the reconstruction exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import DiskPoint, MobiusMap, disk_grid, mobius_eval
from .disk_algebra import certify_sup_norm, coefficient_sum_bound, default_sample_count, poly_degree

# Construction accepts certificates this far above 1 (pure rounding slop).
SUP_BOUND_SLACK = 1e-12


class DiskSelfMap:
    """Base for analytic maps of the closed disk into itself."""

    kind: str = ""
    sup_bound: float = 1.0

    def eval_inner(self, z):
        raise NotImplementedError

    def at_zero(self) -> complex:
        return complex(self.eval_inner(0j))


def self_map_eval(phi: DiskSelfMap, z):
    """Evaluate phi on the closed disk (scalar or array)."""
    if np.max(np.abs(z)) > 1.0 + 1e-12:
        raise ValueError("self-maps are evaluated on the closed unit disk")
    return phi.eval_inner(z)


@dataclass(frozen=True)
class PolynomialMap(DiskSelfMap):
    """A polynomial self-map; construction certifies sup |p| <= 1 on the circle."""

    coeffs: tuple[complex, ...]
    sup_bound: float = field(init=False)

    kind = "polynomial"

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise ValueError("empty coefficient list")
        n = default_sample_count(poly_degree(coeffs))
        cert = min(certify_sup_norm(coeffs, n), coefficient_sum_bound(coeffs))
        if cert > 1.0 + SUP_BOUND_SLACK:
            raise ValueError(
                f"polynomial is not certified as a self-map: sup bound {cert:.6g} > 1"
            )
        object.__setattr__(self, "sup_bound", min(cert, 1.0))

    def eval_inner(self, z):
        acc = np.zeros_like(np.asarray(z, dtype=complex))
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return complex(acc) if np.ndim(z) == 0 else acc


@dataclass(frozen=True)
class BlaschkeMap(DiskSelfMap):
    """rotation * prod_i lambda_{z_i}(z): a finite Blaschke product, |B| = 1 on the circle."""

    zeros: tuple[DiskPoint, ...]
    rotation: complex = 1.0 + 0.0j

    kind = "blaschke"
    sup_bound = 1.0

    def __post_init__(self) -> None:
        if not self.zeros:
            raise ValueError("a Blaschke product needs at least one zero")
        rot = complex(self.rotation)
        if abs(abs(rot) - 1.0) > 1e-12:
            raise ValueError("rotation must be unimodular")
        object.__setattr__(self, "rotation", rot / abs(rot))

    def eval_inner(self, z):
        acc = np.full_like(np.asarray(z, dtype=complex), self.rotation)
        for zero in self.zeros:
            a = zero.value
            acc = acc * (a - z) / (1.0 - np.conjugate(a) * z)
        return complex(acc) if np.ndim(z) == 0 else acc


@dataclass(frozen=True)
class MobiusSelfMap(DiskSelfMap):
    """The involution lambda_a viewed as a self-map."""

    map: MobiusMap

    kind = "mobius"
    sup_bound = 1.0

    def eval_inner(self, z):
        return mobius_eval(self.map, z)


@dataclass(frozen=True)
class ComposedMap(DiskSelfMap):
    """outer Möbius applied after an inner self-map: z -> lambda_a(inner(z))."""

    outer: MobiusMap
    inner: DiskSelfMap
    sup_bound: float = field(init=False)

    kind = "composed"

    def __post_init__(self) -> None:
        # Möbius maps pull |w| <= s to at most (|a| + s)/(1 + |a| s).
        a = abs(self.outer.a.value)
        s = self.inner.sup_bound
        object.__setattr__(self, "sup_bound", (a + s) / (1.0 + a * s))

    def eval_inner(self, z):
        return mobius_eval(self.outer, self.inner.eval_inner(z))


def schwarz_factorize(phi: DiskSelfMap) -> tuple[DiskPoint, ComposedMap]:
    """Split phi = lambda_a o psi with a = phi(0) and psi(0) = 0.

    psi = lambda_a o phi, which fixes 0 because lambda_a(a) = 0; applying
    lambda_a again reconstructs phi since lambda_a is an involution.
    Degenerate maps with |phi(0)| essentially on the circle are rejected
    (the norm bound diverges there).
    """
    a = phi.at_zero()
    if abs(a) >= 1.0 - 1e-15:
        raise ValueError(f"|phi(0)| = {abs(a):.17g} is too close to the circle")
    base = DiskPoint(a)
    psi = ComposedMap(MobiusMap(base), phi)
    return base, psi


def factorization_residual(
    phi: DiskSelfMap, a: DiskPoint, psi: DiskSelfMap, points: np.ndarray | None = None
) -> float:
    """max |phi(z) - lambda_a(psi(z))| over a disk grid (16 radii x 16 angles)."""
    pts = disk_grid() if points is None else points
    lam = MobiusMap(a)
    recon = mobius_eval(lam, self_map_eval(psi, pts))
    return float(np.max(np.abs(self_map_eval(phi, pts) - recon)))


# JSON literals, discriminated by "kind".

def _c(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {pair!r}")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def self_map_to_obj(phi: DiskSelfMap) -> dict:
    if isinstance(phi, PolynomialMap):
        return {"kind": "polynomial", "coeffs": [_pair(c) for c in phi.coeffs]}
    if isinstance(phi, BlaschkeMap):
        return {
            "kind": "blaschke",
            "zeros": [_pair(z.value) for z in phi.zeros],
            "rotation": _pair(phi.rotation),
        }
    if isinstance(phi, MobiusSelfMap):
        return {"kind": "mobius", "a": _pair(phi.map.a.value)}
    if isinstance(phi, ComposedMap):
        return {
            "kind": "composed",
            "outer_a": _pair(phi.outer.a.value),
            "inner": self_map_to_obj(phi.inner),
        }
    raise TypeError(f"unknown self-map type: {type(phi)!r}")


def self_map_from_obj(obj: dict, where: str = "self_map") -> DiskSelfMap:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"{where}: expected an object with a 'kind' discriminator")
    kind = obj["kind"]
    try:
        if kind == "polynomial":
            return PolynomialMap(tuple(_c(c) for c in obj["coeffs"]))
        if kind == "blaschke":
            zeros = tuple(DiskPoint(_c(z)) for z in obj["zeros"])
            return BlaschkeMap(zeros, _c(obj.get("rotation", 1.0)))
        if kind == "mobius":
            return MobiusSelfMap(MobiusMap(DiskPoint(_c(obj["a"]))))
        if kind == "composed":
            inner = self_map_from_obj(obj["inner"], where=f"{where}.inner")
            return ComposedMap(MobiusMap(DiskPoint(_c(obj["outer_a"]))), inner)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{where}: bad '{kind}' literal ({exc})") from exc
    raise ValueError(f"{where}: unknown kind {kind!r}")

"""The kernel operator h -> lim_{r->1} integral of h(t) / (1 - zeta * conj(phi(r t))) dm(t).

Three evaluation routes, cross-checked against each other in the tests:

* quadrature (``p_phi_at``): sample the integrand on an equispaced grid and
  average, doubling the grid until stable.  Valid for any map at r < 1.
* residue closed form (``p_lambda_closed_form``): for phi = lambda_a the
  integrand is rational in t with one pole at 0 and one at
  r (a - zeta)/(1 - zeta conj(a)) inside the circle, giving

      -a h(0)/(zeta - a) + h(r lambda_a(zeta)) (1 - |a|^2)/|1 - zeta conj(a)|^2,

  exact for every r and continuous at r = 1.
* geometric-moment series (``p_phi_exact_at``): for a polynomial core p,
  expanding the kernel in powers of conj(p(r t)) turns the integral into
  sum_k zeta^k T_k(r) with T_k(r) = integral of h(t) conj(p(r t)^k) dm(t),
  computable exactly from truncated coefficient convolutions.  Cauchy
  estimates on a circle of radius rho < 1 give |T_k| <= C(rho) s(rho)^k
  with a certifiable s(rho) < 1, so the truncation error is rigorously
  bounded and the series remains valid at r = 1 even for maps whose
  boundary modulus reaches 1 (e.g. z^2).

Maps built from Möbius pieces and polynomials are normalized to the form
rot * lambda_c o core, which routes every such map to an exact evaluation.
Radial limits of anything else (multi-zero Blaschke products and other
boundary-contact maps) are chased by a radial sweep that reports
non-convergence rather than extrapolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .circle import (
    DEFAULT_GRID_SIZE,
    GRID_STABILITY_TOL,
    MAX_GRID_SIZE,
    CirclePoint,
    DiskPoint,
    NonConvergenceError,
    QuadratureGrid,
    circle_angles,
    grid_integrate,
    refine_until_stable,
)
from .disk_algebra import (
    DiskAlgebraPoly,
    certify_sup_norm,
    default_sample_count,
    monomial,
    poly_degree,
    poly_eval,
)
from .self_maps import (
    BlaschkeMap,
    ComposedMap,
    DiskSelfMap,
    MobiusSelfMap,
    PolynomialMap,
    self_map_eval,
)

SERIES_TAIL_TOL = 1e-12
SERIES_ORDER_CAP = 8192
_RHO_LADDER = (0.9, 0.85, 0.8, 0.7, 0.6, 0.5, 0.35)


@dataclass(frozen=True)
class RadialScheme:
    """Radii 1 - 2^-k for k = k_min..k_max, with a stabilization tolerance."""

    k_min: int = 4
    k_max: int = 24
    convergence_tol: float = 1e-9

    def __post_init__(self) -> None:
        if not (0 < self.k_min <= self.k_max):
            raise ValueError("need 0 < k_min <= k_max")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")

    @property
    def radii(self) -> list[float]:
        return [1.0 - 2.0 ** (-k) for k in range(self.k_min, self.k_max + 1)]


DEFAULT_SCHEME = RadialScheme()


def _as_unimodular(zeta) -> complex:
    z = zeta.value if isinstance(zeta, CirclePoint) else complex(zeta)
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"zeta must lie on the unit circle, got {z!r}")
    return z


def _as_disk_value(a) -> complex:
    v = a.value if isinstance(a, DiskPoint) else complex(a)
    if abs(v) >= 1.0:
        raise ValueError(f"a must lie in the open unit disk, got {v!r}")
    return v


def p_lambda_closed_form(a, h: DiskAlgebraPoly, zeta, r: float = 1.0) -> complex:
    """Residue evaluation of the kernel integral for phi = lambda_a.

    Exact for each 0 < r <= 1; the two terms are the residues at t = 0 and
    at the interior pole t = r lambda_a(zeta).
    """
    av = _as_disk_value(a)
    zv = _as_unimodular(zeta)
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    denom = 1.0 - zv * np.conjugate(av)
    pole_term = poly_eval(h, r * (av - zv) / denom) * (1.0 - abs(av) ** 2) / abs(denom) ** 2
    return complex(-av * h.coeffs[0] / (zv - av) + pole_term)


def p_phi_at(
    phi: DiskSelfMap, h: DiskAlgebraPoly, zeta, r: float, grid: QuadratureGrid
) -> complex:
    """Single-grid quadrature of h(t) / (1 - zeta conj(phi(r t))) against dm."""
    zv = _as_unimodular(zeta)
    if not 0.0 < r < 1.0:
        raise ValueError("quadrature of the kernel requires 0 < r < 1")
    t = grid.nodes
    samples = poly_eval(h, t) / (1.0 - zv * np.conjugate(self_map_eval(phi, r * t)))
    return grid_integrate(grid, samples)


def p_phi_at_stable(
    phi: DiskSelfMap,
    h: DiskAlgebraPoly,
    zeta,
    r: float,
    start: int = DEFAULT_GRID_SIZE,
    tol: float = GRID_STABILITY_TOL,
    cap: int = MAX_GRID_SIZE,
) -> complex:
    """Quadrature with the grid-doubling policy; raises on non-convergence."""
    value, _ = refine_until_stable(
        partial(p_phi_at, phi, h, zeta, r), start=start, tol=tol, cap=cap
    )
    return value


# ---------------------------------------------------------------------------
# Normal form rot * lambda_c o core for maps built from Möbius pieces and
# polynomials.  core=None means the identity; c=None means no Möbius layer.

@dataclass(frozen=True)
class _ChainForm:
    rot: complex
    c: complex | None
    core: tuple[complex, ...] | None


def _combine_automorphisms(a: complex, rot_i: complex, c_i: complex) -> tuple[complex, complex]:
    """lambda_a o (rot_i * lambda_{c_i}) as a rotated involution (rot, c)."""

    def lam(p, z):
        return (p - z) / (1.0 - np.conjugate(p) * z)

    c = lam(c_i, a * np.conjugate(rot_i))
    z0 = 0.0 if abs(c) > 0.25 else 0.5
    num = lam(a, rot_i * lam(c_i, z0))
    rot = num / lam(c, z0)
    return complex(rot / abs(rot)), complex(c)


def _normalize(phi: DiskSelfMap) -> _ChainForm | None:
    if isinstance(phi, MobiusSelfMap):
        return _ChainForm(1.0 + 0.0j, phi.map.a.value, None)
    if isinstance(phi, PolynomialMap):
        return _ChainForm(1.0 + 0.0j, None, phi.coeffs)
    if isinstance(phi, BlaschkeMap):
        if len(phi.zeros) == 1:
            return _ChainForm(phi.rotation, phi.zeros[0].value, None)
        return None
    if isinstance(phi, ComposedMap):
        inner = _normalize(phi.inner)
        if inner is None:
            return None
        a = phi.outer.a.value
        if inner.core is not None and inner.c is None:
            # lambda_a o (rot * poly): fold the rotation into the polynomial.
            core = tuple(inner.rot * c for c in inner.core)
            return _ChainForm(1.0 + 0.0j, a, core)
        if inner.c is not None:
            rot, c = _combine_automorphisms(a, inner.rot, inner.c)
            return _ChainForm(rot, c, inner.core)
        return None
    return None


def limit_route(phi: DiskSelfMap) -> str:
    """Which radial-limit route a map gets: closed-form, series, or sweep."""
    nf = _normalize(phi)
    if nf is None:
        return "quadrature-sweep"
    return "closed-form" if nf.core is None else "series"


def _series_order(
    core: np.ndarray, r: float, b_abs: np.ndarray, mob_abs: float, tol: float
) -> tuple[int, float] | None:
    """Truncation order with a certified geometric tail bound.

    Picks rho < 1 with a certified s = sup_{|w| = rho} |core(r w)| < 1 and
    returns the smallest k with (prefactor) * C(rho) * s^(k+1)/(1-s) < tol,
    where C(rho) = sum_m |b_m| rho^-m dominates the Cauchy coefficient
    weights.  Returns None when no ladder radius certifies convergence.
    """
    degs = np.arange(core.size)
    best: tuple[int, float] | None = None
    prefactor = (1.0 + mob_abs) / (1.0 - mob_abs) if mob_abs > 0 else 1.0
    for rho in _RHO_LADDER:
        scaled = core * (r * rho) ** degs
        coefsum = float(np.sum(np.abs(scaled)))
        d = poly_degree(scaled) if np.any(scaled) else 0
        bern = certify_sup_norm(scaled, default_sample_count(d)) if np.any(scaled) else 0.0
        s = min(coefsum, bern) if np.any(scaled) else 0.0
        if s >= 0.999:
            continue
        big_c = float(np.sum(b_abs * rho ** (-np.arange(b_abs.size))))
        if s == 0.0:
            return 1, rho
        k = math.ceil(math.log(tol * (1.0 - s) / (prefactor * big_c)) / math.log(s))
        k = max(k, 1)
        if k <= SERIES_ORDER_CAP and (best is None or k < best[0]):
            best = (k, rho)
    return best


def _power_moment_table(core_r: np.ndarray, m_cap: int, k_max: int) -> np.ndarray:
    """Rows k = 0..k_max: coefficients of core_r(z)^k, truncated to degree m_cap."""
    width = m_cap + 1
    table = np.zeros((k_max + 1, width), dtype=complex)
    table[0, 0] = 1.0
    cur = np.array([1.0 + 0.0j])
    base = core_r[:width]
    for k in range(1, k_max + 1):
        cur = np.convolve(cur, base)[:width]
        table[k, : cur.size] = cur
    return table


def _chain_series(
    nf: _ChainForm, b: np.ndarray, zeta: complex, r: float, tail_tol: float
) -> complex:
    """Exact kernel value for a normalized map with a polynomial core."""
    core = np.asarray(nf.core, dtype=complex)
    zeta_eff = zeta * np.conjugate(nf.rot)
    mob_abs = abs(nf.c) if nf.c is not None else 0.0
    order = _series_order(core, r, np.abs(b), mob_abs, tail_tol)
    if order is None:
        raise NonConvergenceError(
            "could not certify geometric decay for the moment series"
        )
    k_max, _ = order
    table = _power_moment_table(core * r ** np.arange(core.size), b.size - 1, k_max + 1)
    t_moments = np.conjugate(table) @ b
    if nf.c is None:
        ratios = np.concatenate(([1.0], np.cumprod(np.full(k_max, zeta_eff))))
        return complex(ratios @ t_moments[: k_max + 1])
    c = nf.c
    lam = (c - zeta_eff) / (1.0 - np.conjugate(c) * zeta_eff)
    ratios = np.concatenate(([1.0], np.cumprod(np.full(k_max, lam))))
    terms = t_moments[: k_max + 1] - c * t_moments[1 : k_max + 2]
    return complex((ratios @ terms) / (1.0 - zeta_eff * np.conjugate(c)))


def p_phi_exact_at(
    phi: DiskSelfMap, h: DiskAlgebraPoly, zeta, r: float = 1.0,
    tail_tol: float = SERIES_TAIL_TOL,
) -> complex:
    """Exact kernel value at radius r (including r = 1) for normalizable maps.

    Raises ValueError for maps with no closed-form or series route.
    """
    nf = _normalize(phi)
    if nf is None:
        raise ValueError("map has no exact evaluation route")
    zv = _as_unimodular(zeta)
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    if nf.core is None:
        return p_lambda_closed_form(nf.c, h, zv * np.conjugate(nf.rot), r)
    b = np.asarray(h.coeffs, dtype=complex)
    return _chain_series(nf, b, zv, r, tail_tol)


def _radial_sweep(phi, h, zeta, scheme: RadialScheme) -> complex:
    prev = None
    for r in scheme.radii:
        value = p_phi_at_stable(phi, h, zeta, r)
        if prev is not None and abs(value - prev) < scheme.convergence_tol:
            return value
        prev = value
    raise NonConvergenceError(
        f"radial sweep did not stabilize to {scheme.convergence_tol:g} "
        f"by r = 1 - 2^-{scheme.k_max}"
        + (" (boundary-contact map: limit not guaranteed)" if phi.sup_bound >= 1.0 - 1e-12 else "")
    )


def p_phi_radial_limit(
    phi: DiskSelfMap, h: DiskAlgebraPoly, zeta, scheme: RadialScheme | None = None
) -> complex:
    """The r -> 1 limit of the kernel integral at a boundary point zeta.

    Maps in the Möbius orbit use the residue closed form at r = 1;
    polynomial-core maps use the certified moment series at r = 1 (the
    limit exists there with a provable geometric tail).  Everything else
    is chased by a radial sweep and reported honestly as non-convergent
    when stabilization fails.
    """
    scheme = scheme or DEFAULT_SCHEME
    nf = _normalize(phi)
    if nf is not None:
        return p_phi_exact_at(phi, h, zeta, 1.0)
    return _radial_sweep(phi, h, zeta, scheme)


def monomial_radial_limits(
    phi: DiskSelfMap, count: int, zeta, scheme: RadialScheme | None = None,
    tail_tol: float = SERIES_TAIL_TOL,
) -> np.ndarray:
    """Radial-limit kernel values for the monomials 1, z, ..., z^(count-1).

    One shared coefficient table serves all monomials, which keeps dual
    moment vectors cheap.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    zv = _as_unimodular(zeta)
    nf = _normalize(phi)
    if nf is None:
        scheme = scheme or DEFAULT_SCHEME
        return np.array(
            [p_phi_radial_limit(phi, monomial(m), zv, scheme) for m in range(count)]
        )
    zeta_eff = zv * np.conjugate(nf.rot)
    if nf.core is None:
        c = nf.c
        denom = 1.0 - zeta_eff * np.conjugate(c)
        w = (c - zeta_eff) / denom
        base = (1.0 - abs(c) ** 2) / abs(denom) ** 2
        vals = base * np.concatenate(([1.0], np.cumprod(np.full(count - 1, w))))
        vals = vals.astype(complex)
        vals[0] += -c / (zeta_eff - c)
        return vals
    core = np.asarray(nf.core, dtype=complex)
    b_abs = np.zeros(count)
    b_abs[-1] = 1.0  # worst Cauchy weight among the monomials
    mob_abs = abs(nf.c) if nf.c is not None else 0.0
    order = _series_order(core, 1.0, b_abs, mob_abs, tail_tol)
    if order is None:
        raise NonConvergenceError(
            "could not certify geometric decay for the moment series"
        )
    k_max, _ = order
    table = _power_moment_table(core, count - 1, k_max + 1)
    if nf.c is None:
        ratios = np.concatenate(([1.0], np.cumprod(np.full(k_max, zeta_eff))))
        return ratios @ np.conjugate(table[: k_max + 1])
    c = nf.c
    lam = (c - zeta_eff) / (1.0 - np.conjugate(c) * zeta_eff)
    ratios = np.concatenate(([1.0], np.cumprod(np.full(k_max, lam))))
    terms = np.conjugate(table[: k_max + 1]) - c * np.conjugate(table[1 : k_max + 2])
    return (ratios @ terms) / (1.0 - zeta_eff * np.conjugate(c))


@dataclass(frozen=True)
class SupNormScan:
    """Grid maximum of |P_phi h| over the circle, plus one Newton polish."""

    grid_max: float
    grid_angle: float
    refined_max: float
    refined_angle: float


def p_phi_sup_scan(
    phi: DiskSelfMap,
    h: DiskAlgebraPoly,
    zeta_grid_size: int = 256,
    scheme: RadialScheme | None = None,
) -> SupNormScan:
    if h.certified_sup > 1.0 + 1e-12:
        raise ValueError("h must be certified inside the unit ball")
    angles = circle_angles(zeta_grid_size)
    values = np.array(
        [abs(p_phi_radial_limit(phi, h, CirclePoint(a), scheme)) for a in angles]
    )
    best = int(np.argmax(values))  # first index wins ties
    grid_max = float(values[best])
    theta = float(angles[best])

    def mag2(t: float) -> float:
        return abs(p_phi_radial_limit(phi, h, CirclePoint(t), scheme)) ** 2

    delta = 1e-4
    g_minus, g_0, g_plus = mag2(theta - delta), grid_max**2, mag2(theta + delta)
    d1 = (g_plus - g_minus) / (2 * delta)
    d2 = (g_plus - 2 * g_0 + g_minus) / delta**2
    refined_angle = theta
    if d2 < 0:
        step = -d1 / d2
        spacing = 2 * math.pi / zeta_grid_size
        refined_angle = theta + float(np.clip(step, -spacing, spacing))
    refined = math.sqrt(mag2(refined_angle))
    if refined < grid_max:
        refined, refined_angle = grid_max, theta
    return SupNormScan(grid_max, theta, refined, refined_angle)


def p_phi_sup_norm(
    phi: DiskSelfMap,
    h: DiskAlgebraPoly,
    zeta_grid_size: int = 256,
    scheme: RadialScheme | None = None,
) -> float:
    """max |P_phi h| over a zeta grid: a sound lower estimate of the sup-norm."""
    return p_phi_sup_scan(phi, h, zeta_grid_size, scheme).grid_max

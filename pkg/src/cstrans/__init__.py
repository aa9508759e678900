"""Cauchy transforms of atomic circle measures, disk-algebra duality, and
composition-operator norm bounds, all at desk scale with certified
numerics."""

from .circle import (
    CirclePoint,
    DiskPoint,
    MobiusMap,
    NonConvergenceError,
    QuadratureGrid,
    grid_integrate,
    mobius_compose_self,
    mobius_eval,
    refine_until_stable,
)
from .disk_algebra import (
    DiskAlgebraPoly,
    certify_sup_norm,
    make_poly,
    monomial,
    poly_eval,
    sample_unit_ball,
)
from .kernel_op import (
    RadialScheme,
    SupNormScan,
    monomial_radial_limits,
    p_lambda_closed_form,
    p_phi_at,
    p_phi_at_stable,
    p_phi_exact_at,
    p_phi_radial_limit,
    p_phi_sup_norm,
    p_phi_sup_scan,
)
from .measures import (
    AtomicMeasure,
    CauchyTransform,
    atomic_measure,
    cauchy_eval,
    monomial_pushforward,
    point_mass,
    taylor_coeffs,
    tv_norm,
)
from .norm_engine import (
    NormBracket,
    PreconditionError,
    ScanRow,
    VerificationReport,
    bound_bourdon_cima,
    bound_cima_matheson,
    composition_knorm_lower,
    composition_moments,
    knorm_bracket,
    knorm_lower,
    pairing,
    pairing_quadrature,
    pairing_quadrature_stable,
    pairing_radial,
    sharpness_scan,
    verify_eq1,
    verify_lemma1,
    verify_lemma2,
)
from .self_maps import (
    BlaschkeMap,
    ComposedMap,
    DiskSelfMap,
    MobiusSelfMap,
    PolynomialMap,
    factorization_residual,
    schwarz_factorize,
    self_map_eval,
)

__all__ = [name for name in dir() if not name.startswith("_")]

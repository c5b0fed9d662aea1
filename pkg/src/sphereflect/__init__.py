"""Reflection of free-boundary minimal surfaces across spheres.

The package builds analytic continuations of minimal surfaces that meet a
sphere orthogonally along boundary circles: harmonic Cauchy solvers on a
periodic strip, conformal boundary normalization, the sphere-reflection
step itself, an iterated extension driver, and a geometry lab (curvature,
flux, convexity, superharmonic radius checks) with CLI reporting.
"""

__version__ = "0.1.0"

from .harmonic import (  # noqa: F401
    CauchyData,
    HarmonicStripFunction,
    TrigPolynomial,
    conjugate_harmonic,
    fourier_analyze,
    solve_cauchy,
    solve_cauchy_dirichlet,
    solve_cauchy_neumann,
)
from .holomorphic import (  # noqa: F401
    HolomorphicModel,
    holomorphic_completion,
    lambda_field,
)
from .surfaces import (  # noqa: F401
    AnalyticSurface,
    CatenoidBand,
    CauchySurface,
    EdgeChart,
    EquatorialDisk,
    SpherePatch,
    SteklovReport,
    catenoid_band,
    catenoid_constants,
    critical_catenoid,
    encode_surface,
    equatorial_disk,
    load_surface,
    noncritical_catenoid,
    sphere_patch,
    verify_steklov,
)
from .normalization import (  # noqa: F401
    NormalizationMap,
    NormalizedSurface,
    PunctureSet,
    boundary_conformal_factor,
    build_normalization,
    find_branch_points,
    push_forward,
)
from .reflection import (  # noqa: F401
    PatchSurface,
    ReflectedPatch,
    reflect_patch,
    rk4_disagreement,
    schwarz_extend,
    solve_reflection_ode,
    verify_schwarz_condition,
)
from .geometry import (  # noqa: F401
    CurvatureReport,
    FundamentalForms,
    boundary_convexity,
    boundary_curvature_relations,
    boundary_integral,
    curvature_line_forms_check,
    curvature_report,
    fd_surface_derivative,
    flux,
    fundamental_forms,
    gauss_map_samples,
    gaussian_curvature_identity,
    hopf_quantities,
    injectivity_scan,
    strip_curvature_integral,
    superharmonic_checks,
    total_curvature,
)
from .extension import (  # noqa: F401
    ExtendedSurface,
    PlaneChart,
    StepRecord,
    coverage_monitor,
    extend,
    to_punctured_plane,
)
from .export import (  # noqa: F401
    evaluate_grid,
    export_csv,
    export_obj,
)
from .reports import (  # noqa: F401
    RunConfig,
    VerificationReport,
    render_report,
    resolve_surface,
    run_checks,
)

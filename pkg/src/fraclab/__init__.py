"""fraclab: a numerical laboratory for dispersive evolution along tangential curves.

The package provides, as composable numpy-based pieces:

* band-limited signals with Riemann-sum transforms and Sobolev norms
  (:mod:`fraclab.spectral`),
* power-law and general dispersion symbols with the evolution operator
  (:mod:`fraclab.dispersion`),
* curve families gamma(x, t) with certified Holder/bilipschitz constants
  (:mod:`fraclab.curves`),
* fractal-dimension-controlled measures as exact-mass atom lists
  (:mod:`fraclab.measures`),
* curve-restricted maximal functions, scaling regression and the discrete
  bilinear form check (:mod:`fraclab.maximal`),
* oscillatory pair kernels, region classification, decay envelopes and an
  oscillatory-decay oracle (:mod:`fraclab.kernels`),
* counterexample data families with lower-bound verification and the
  closed-form threshold calculators (:mod:`fraclab.sharpness`),
* a deterministic CLI emitting CSV/JSON artifacts (:mod:`fraclab.cli`).
"""

from .errors import ParameterError, ResolutionError
from .spectral import (
    FrequencyGrid,
    FrequencySignal,
    BumpProfile,
    origin_bump,
    annular_bump,
    forward_transform,
    inverse_transform,
    sobolev_norm,
    gaussian_signal,
    save_signal,
    load_signal,
)
from .dispersion import (
    DispersionSymbol,
    SpaceTimePoint,
    validate_symbol,
    propagate_grid,
    evaluate_field,
    field_at_points,
    unitarity_deviation,
)
from .curves import (
    CurveFamily,
    vertical_curve,
    power_curve,
    shifted_power_curve,
    user_curve,
    curve_eval,
    verify_curve_class,
)
from .measures import (
    FrostmanMeasure,
    build_power_measure,
    build_lebesgue_measure,
    build_power_measure_graded,
    build_power_measure_windowed,
    build_cantor_measure,
    ball_mass,
    frostman_constant,
    integrate_l2_mu,
)
from .maximal import (
    TimeGrid,
    MaximalProfile,
    ScalingFit,
    experiment_time_nodes,
    maximal_function,
    maximal_ratio,
    scaling_regression,
    hls_check,
    random_band_signal,
    band_scaling_experiment,
)
from .kernels import (
    KernelParams,
    PairRegion,
    PairClassification,
    band_gain_exponent,
    make_kernel_params,
    phase_eval,
    kernel_eval,
    kernel_eval_pairs,
    classify_pair,
    kernel_envelope_fit,
    vdc_oracle,
)
from .sharpness import (
    CounterexampleSpec,
    make_f1,
    make_f2,
    solve_t_of_x,
    verify_lower_bound_f1,
    verify_lower_bound_f2,
    windowed_maximal_norm_f1,
    regularity_threshold,
    divergence_dimension_bound,
    predicted_f1_exponent,
    f1_scaling_experiment,
    f2_necessity_experiment,
)

__version__ = "0.1.0"

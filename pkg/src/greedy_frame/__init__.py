"""Classical, greedy and saturated frame algorithms for finite real frames."""
from .algorithms import (
    Converged,
    IterationTrace,
    Measurements,
    NumericalError,
    StoppingRule,
    classical_run,
    greedy_s_run,
    greedy_s_step,
    greedy_std_run,
    neumann_partial,
    project_onto_range,
    remark_identity_check,
)
from .frame_core import (
    Frame,
    FrameBounds,
    NotAFrame,
    OperatorPolynomial,
    analyze,
    apply_frame_operator,
    contraction_constant,
    frame_operator_matrix,
    optimal_frame_bounds,
    optimal_relaxation,
    polynomial_operator_norms,
    s_inner,
    s_norm,
    synthesize,
)
from .generators import (
    apply_erasures,
    dct_basis,
    gaussian_noise,
    make_rng,
    mix_seed,
    random_parseval_frame,
    random_unit_vector,
)
from .saturation import (
    ActiveIndexSet,
    SaturatedMeasurements,
    StalledActiveSet,
    active_index_set,
    clip,
    saturate,
    saturated_run,
)

__version__ = "0.1.0"

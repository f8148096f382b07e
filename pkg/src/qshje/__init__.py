"""Separable quantum stationary Hamilton-Jacobi actions in three dimensions.

Builds the two-solution Schrodinger basis per axis, the arctan-form reduced
action with its non-vanishing conjugate momentum, the 16-coefficient tensor
generalization and its separability fit, polar-form wavefunctions with a
factorized amplitude, and quantum trajectories with turning-point events.
"""

from .amplitude import (
    Amplitude3D,
    WavefunctionProduct,
    amplitude_at,
    build_wavefunction,
    compare_to_product,
    current_residual,
    export_wavefunction_rows,
    schrodinger_residual,
)
from .dynamics import (
    IntegratorKind,
    MotionConfig,
    Region,
    Trajectory,
    TrajectoryState,
    TurningPointPolicy,
    integrate,
    metric_g,
    total_energy_check,
    velocity,
    velocity_alt,
)
from .errors import (
    ConfigError,
    DegenerateGammas,
    DegeneratePoint,
    DegenerateTensor,
    DenominatorZero,
    DuplicateAxis,
    EmptyDomain,
    IllConditionedFit,
    LeftDomain,
    NonFiniteSolution,
    OutOfDomain,
    QshjeError,
    StencilOutOfDomain,
    StepUnderflow,
)
from .reduced_action import (
    RecoveryConstants,
    ReducedAction1D,
    SeparableAction3D,
    WaveParameters,
    action_1d,
    assemble_separable,
    fm_wavefunctions,
    momentum_1d,
    momentum_lower_bound,
    qshje_residual_1d,
    recover_action,
    schwarzian,
)
from .scenario import Scenario, load_scenario
from .schrodinger1d import (
    EnergySplit,
    PhysicalConstants,
    Potential1D,
    PotentialKind,
    SolutionPair,
    pair_from_callables,
    solve_pair,
    wronskian,
)
from .tensor_reduction import (
    GammaExpansion,
    GammaFit,
    TensorAction,
    count_monomials,
    eval_tensor_action,
    expand_gammas,
    fit_gammas,
    tensor_from_gammas,
    tensor_gradient_component,
)

__all__ = [name for name in dir() if not name.startswith("_")]

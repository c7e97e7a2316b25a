"""Sequential unsupervised classification of qubits: measurement disturbance tradeoff."""
from .measure import (
    DisturbedEnsemble,
    MirrorGeometry,
    Outcome,
    Povm,
    WeakParams,
    disturbed_ensemble,
    grid_search_a,
    luders_update,
    mirror_geometry,
    optimal_three_qubit_povm,
    optimal_two_qubit_povm,
    second_povm,
    success_probability,
    validate_povm,
    weak_two_qubit_povm,
)
from .schur import SchurLabel, clebsch_lift, permutation_operator, schur_transform
from .simulate import RunSummary, estimate_curve, run_trajectories
from .states import (
    Basis,
    DensityOperator,
    HypothesisLabel,
    PureQubit,
    analytic_state,
    haar_sample_qubit,
    monte_carlo_state,
)
from .tradeoff import (
    optimize_beta,
    p_first,
    p_second_closed,
    p_second_general,
    path_components,
    sweep,
    tradeoff_curve,
)

__version__ = "0.1.0"

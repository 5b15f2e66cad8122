"""Observability analysis for quantized-output LTI systems over finite
input alphabets.

The package models plants x_{t+1} = A x_t + B u_t whose only measurable
signal is a quantized label y_t = Q(C x_t + D u_t), with inputs drawn
from a finite list. It provides simulation, window observers driven by
inputs alone, certified checkers deciding whether such an observer can
eventually predict every label, constructive counterexample families
for plants where none can, and a Monte-Carlo interconnection harness.
"""

__version__ = "1.0.0"

from ._kernels import available_backends, backend
from .errors import (
    BudgetError,
    DimensionError,
    DomainError,
    FamilyContradictionError,
    HorizonSearchError,
    InapplicableError,
    InputFormatError,
    InstabilityError,
    PlantOverflowError,
    PreconditionError,
    QuantobsError,
)
from .quantizer import IntervalQuantizer, ProductQuantizer, unit_grid_quantizer
from .plant import (
    ForcedResponseSet,
    QuantizedLtiSystem,
    Trajectory,
    forced_response,
    forced_response_set,
    markov_parameters,
    simulate,
)
from .observer import (
    ConstantObserver,
    FiniteInputObserver,
    Observer,
    build_finite_input_observer,
)
from .analysis import (
    AdversarialCertificate,
    DistanceResult,
    Inconclusive,
    LowerBound,
    ObservabilityReport,
    ObstructionCheck,
    OutputNilpotency,
    Witness,
    check_nilpotent_output,
    check_stable_obstruction,
    check_unstable_obstruction,
    choose_horizon_general,
    choose_horizon_stable,
    find_adversarial_certificate,
    forced_response_distance,
    full_report,
    stable_part_system,
)
from .family import (
    AdversarialFamily,
    AttackResult,
    FamilyNode,
    FamilyParams,
    FamilyVerification,
    adversarial_walk,
    build_family,
    branch_bits,
    branch_index,
    choose_stage_length,
    family_parameters,
    initial_state,
    input_segment,
    verify_family,
)
from .harness import (
    GainEstimate,
    MonteCarloSummary,
    RunRecord,
    TrialResult,
    gain_functional,
    interconnect,
    monte_carlo_settling,
    record_to_csv,
)
from .fileio import (
    SystemDescription,
    load_system,
    parse_system_payload,
    system_hash,
    system_to_payload,
)

__all__ = [name for name in dir() if not name.startswith("_")]

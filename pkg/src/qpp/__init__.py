"""Mechanical verification of pre/postselection contextuality arguments.

The package builds finite quantum scenarios (a preselected state, a
postselected state, labeled rank-1 projectors, and the contexts they
form), derives the values the selections force on those projectors, and
decides by exhaustive enumeration whether any noncontextual 0/1
assignment survives.  Optimizers locate the parameter choices that
maximize the selection probabilities of the built-in constructions.
"""

from .hilbert import (
    TOL_CHECK,
    TOL_NORM,
    DegenerateSpanError,
    Operator,
    StateVector,
    apply,
    are_exclusive,
    certain_value,
    exclusivity_deviation,
    identity,
    identity_deviation,
    inner,
    is_resolution_of_identity,
    orthocomplement_state,
    projector,
    tensor,
)
from .scenario import (
    PREDICTION,
    RETRODICTION,
    CheckResult,
    Context,
    ForcedValue,
    LabeledProjector,
    PrePostScenario,
    ScenarioParseError,
    ValidationReport,
    ValueAssignment,
    load,
    save,
    validate,
)
from .constructions import (
    CONTEXT_MINUS,
    CONTEXT_PLUS,
    DELTA_PAIR,
    CandidateConstruction,
    DegenerateConfigurationError,
    cabello_family,
    cabello_scenario,
    family_delta_overlap,
    hardy_scenario,
    single_qubit_scenario,
)
from .prepost import (
    ABLUndefinedError,
    SelectionInconsistencyError,
    abl_probability,
    forced_values,
    selection_probability,
)
from .nchv import (
    CONFLICT,
    EXCLUSIVITY,
    MAX_EXHAUSTIVE_PROJECTORS,
    SAT,
    SUM_RULE,
    UNSAT,
    ContradictionTrace,
    EnumerationLimitError,
    NoContradictionError,
    PropagationIncompleteError,
    SatisfiabilityReport,
    TraceStep,
    contradiction_trace,
    enumerate_assignments,
)
from .optimizer import (
    ConvergenceError,
    OptimizationResult,
    feasibility_root,
    maximize_cabello_family,
    maximize_hardy,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TOL_NORM",
    "TOL_CHECK",
    "StateVector",
    "Operator",
    "DegenerateSpanError",
    "identity",
    "tensor",
    "inner",
    "projector",
    "apply",
    "certain_value",
    "are_exclusive",
    "exclusivity_deviation",
    "identity_deviation",
    "is_resolution_of_identity",
    "orthocomplement_state",
    "PREDICTION",
    "RETRODICTION",
    "ScenarioParseError",
    "LabeledProjector",
    "Context",
    "PrePostScenario",
    "ForcedValue",
    "ValueAssignment",
    "CheckResult",
    "ValidationReport",
    "validate",
    "save",
    "load",
    "CONTEXT_PLUS",
    "CONTEXT_MINUS",
    "DELTA_PAIR",
    "CandidateConstruction",
    "DegenerateConfigurationError",
    "cabello_scenario",
    "cabello_family",
    "family_delta_overlap",
    "hardy_scenario",
    "single_qubit_scenario",
    "SelectionInconsistencyError",
    "ABLUndefinedError",
    "selection_probability",
    "forced_values",
    "abl_probability",
    "SAT",
    "UNSAT",
    "SUM_RULE",
    "EXCLUSIVITY",
    "CONFLICT",
    "MAX_EXHAUSTIVE_PROJECTORS",
    "EnumerationLimitError",
    "NoContradictionError",
    "PropagationIncompleteError",
    "TraceStep",
    "ContradictionTrace",
    "SatisfiabilityReport",
    "enumerate_assignments",
    "contradiction_trace",
    "ConvergenceError",
    "OptimizationResult",
    "maximize_hardy",
    "feasibility_root",
    "maximize_cabello_family",
]

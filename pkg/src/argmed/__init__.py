"""Typed argumentation frameworks, extension solvers and a generator/verifier
dialogue for explainable clinical decision reasoning."""

from .aaf import (
    Argument,
    ArgumentationFramework,
    ArgumentKind,
    ValidationReport,
    belief,
    decision,
    new_framework,
    validate,
)
from .decision import (
    DecisionReport,
    ExplanationSet,
    detect_reasoning_error,
    exclusivity_filter,
    explanation_sets,
    optional_decisions,
)
from .semantics import (
    Extension,
    brute_force_preferred,
    grounded_extension,
    is_acceptable_credulous,
    is_admissible,
    is_conflict_free,
    defends,
    preferred_extensions,
)

__version__ = "0.1.0"

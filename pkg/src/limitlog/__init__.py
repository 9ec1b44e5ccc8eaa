"""Limit Datalog: Datalog over integers where numeric predicates keep only
their min or max bound, with an exact fixpoint entailment procedure for
stable limit-linear programs."""

from .analysis import (AnalysisReport, analyze, check_limit_linear,
                       check_type_consistent)
from .core import (INF, Fact, Kind, PredicateDecl, Program,
                   PseudoInterpretation, Sort, preceq, satisfies)
from .engine import (EngineConfig, build_vpg, entails, is_pseudo_model,
                     positive_cycle_nodes, prepare_and_run, run, saturate,
                     tp_step)
from .errors import (AnalysisError, ContractError, DivergenceError,
                     LimitLogError, NotLimitLinearError, ParseError,
                     SortError, StabilityGateError, ValidationError)
from .frontend import (format_fact, format_program, homogenise, normalize,
                       parse_fact, parse_program, semi_ground)

__version__ = "0.1.0"

__all__ = [
    "INF", "Fact", "Kind", "PredicateDecl", "Program", "PseudoInterpretation",
    "Sort", "preceq", "satisfies", "parse_program", "parse_fact",
    "format_program", "format_fact", "normalize", "homogenise", "semi_ground",
    "EngineConfig", "tp_step", "build_vpg", "positive_cycle_nodes", "run",
    "saturate", "entails", "prepare_and_run", "is_pseudo_model", "analyze",
    "AnalysisReport", "check_limit_linear", "check_type_consistent",
    "LimitLogError", "ParseError", "SortError", "ValidationError",
    "AnalysisError", "NotLimitLinearError", "StabilityGateError",
    "ContractError", "DivergenceError",
]

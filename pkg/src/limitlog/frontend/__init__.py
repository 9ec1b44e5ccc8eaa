from .parser import parse_fact, parse_program, tokenize
from .printer import format_fact, format_program, format_rule, format_term
from .transforms import (INT_PRED, SemiGroundProgram, constants_of,
                         flipped_decls, homogenise, is_normal, is_semi_ground,
                         limit_vars, normalize, semi_ground, validate)

__all__ = [
    "parse_program", "parse_fact", "tokenize", "format_program", "format_rule",
    "format_fact", "format_term", "validate", "normalize", "homogenise",
    "semi_ground", "SemiGroundProgram", "is_semi_ground", "is_normal",
    "limit_vars", "constants_of", "flipped_decls", "INT_PRED",
]

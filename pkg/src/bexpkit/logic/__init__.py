"""First-order syntax, structures, and the quantifier-elimination
pipeline over labeled forests and skeletons."""

from .lcd import (FOREST_REL, LabeledForest, LcdType, eval_lcd_formula,
                  is_lcd_formula, lcd_normalize, lcd_types_enum,
                  shape_from_delta)
from .qe import INFINITY, QeRelabeling, qe_trees_step, qe_type_relabeling
from .reduce import (ReductionLimits, ReductionOverflow, model_check,
                     reduce_existential, reduce_formula)
from .skeleton import (NON_NODE, PARENT_ROOT, Skeleton, depth_label,
                       encode_substructure, eval_lcd, lcd_to_existential)
from .structures import (Structure, gaifman_graph, naive_eval,
                         parse_structure, serialize_structure)
from .syntax import (FALSE, TRUE, Atom, Eq, Exists, Forall, Formula,
                     FormulaParseError, LcdAtom, Not, And, Or, Vocabulary,
                     atom, eq, exists, forall, free_vars, land, lcd, lnot,
                     lor, parse_formula, prenex_decompose, prenexify,
                     serialize_formula, subformulas, substitute)

__all__ = [
    "FOREST_REL", "LabeledForest", "LcdType", "eval_lcd_formula",
    "is_lcd_formula", "lcd_normalize", "lcd_types_enum", "shape_from_delta",
    "INFINITY", "QeRelabeling", "qe_trees_step", "qe_type_relabeling",
    "ReductionLimits", "ReductionOverflow", "model_check",
    "reduce_existential", "reduce_formula",
    "NON_NODE", "PARENT_ROOT", "Skeleton", "depth_label",
    "encode_substructure", "eval_lcd", "lcd_to_existential",
    "Structure", "gaifman_graph", "naive_eval", "parse_structure",
    "serialize_structure",
    "FALSE", "TRUE", "Atom", "Eq", "Exists", "Forall", "Formula",
    "FormulaParseError", "LcdAtom", "Not", "And", "Or", "Vocabulary",
    "atom", "eq", "exists", "forall", "free_vars", "land", "lcd", "lnot",
    "lor", "parse_formula", "prenex_decompose", "prenexify",
    "serialize_formula", "subformulas", "substitute",
]

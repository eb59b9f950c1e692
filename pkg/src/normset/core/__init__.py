from .spaces import ANY, DEFAULT_SPACE, INF, AnyClass, AvgClass, NodeClass, SchClass, SpaceSpec
from .textio import (
    ParseError,
    format_tree,
    format_vector,
    format_vectors,
    parse_tree,
    parse_vector,
    parse_vectors,
    read_vectors,
)
from .trees import (
    EMPTY,
    Avg,
    InvalidTree,
    Leaf,
    Sch,
    Tree,
    ValidationReport,
    coefficients,
    evaluate,
    flip_signs,
    in_class,
    node_count,
    restrict,
    stratum,
    support,
    validate,
)
from .vectors import FinVec, as_rat, combine, format_rat

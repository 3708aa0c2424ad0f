"""First-Fit chain partitions of finite posets: simulation, walls, lower-bound
constructions and the width-2 dichotomy classifier."""

from .errors import (
    BudgetExceeded,
    CapExceeded,
    CycleError,
    HypothesisFailed,
    NotAWall,
    NotBFree,
    NotLadderLike,
    NotPrime,
    WidthOutOfScope,
)
from .kernels import BACKEND
from .poset import (
    ChainPartition,
    Embedding,
    Poset,
    above_set,
    below_set,
    contains_subposet,
    cover_relations,
    dilworth_partition,
    disjoint_union,
    enumerate_posets,
    height,
    induced,
    series_compose,
    transitive_closure,
    width,
)

__version__ = "0.1.0"

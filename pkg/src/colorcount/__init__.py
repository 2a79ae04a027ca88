"""Exact colored orthogonal range counting in the plane.

Count the distinct colors among points inside an axis-aligned rectangle,
using a range tree over y whose nodes combine 3D stabbing structures,
per-color emptiness indexes and precomputed block intersection matrices.
"""

from .bench import SweepConfig, gen_dataset, gen_queries, sweep, verify
from .boxes import (ColoredBoxSet, LiftedPoint, build_colored_boxes, decompose_union,
                    lift_bottom_open, lift_top_open)
from .emptiness import EmptinessIndex, build_emptiness, is_nonempty
from .framework import (BlockMatrix, FrameworkConfig, FrameworkIndex, build_framework,
                        build_matrix, intersection_count, query, three_sided_count)
from .lambdatree import LambdaTree, build_lambda
from .model import (INF, CanonicalBox, ColoredPoint, DatasetError, ParameterError, QueryRect,
                    RankSpaceMap, map_query, to_rank_space)
from .oracle import (oracle_distinct_count, oracle_dominance_count, oracle_emptiness,
                     oracle_stab)
from .ranktree import PrefixRef, RankTree, build_ranktree
from .stab_int2 import Int2Index, build_int2
from .stab_segint import SegIntIndex, build_segint
from .stab_segseg import SegSegIndex, build_segseg
from .stabbing import BACKENDS, StabbingIndex, make_backend

__version__ = "0.1.0"

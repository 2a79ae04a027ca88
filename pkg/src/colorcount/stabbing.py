"""Common surface of the 3D stabbing backends.

Every backend answers a stabbing query with a list of PrefixRef: disjoint
nonempty prefixes of its bottom lists whose union is exactly the set of
boxes containing the query point.  Entries of a bottom list are box ids
into ``self.boxes``; positions are 1-based in ``box_at``/``box_id_at``.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from typing import Dict, Iterable, List, Sequence, Tuple

from .model import CanonicalBox, ParameterError
from .ranktree import PrefixRef, RankTree

BACKENDS = ("segseg", "segint", "int2")


class StabbingIndex:
    boxes: List[CanonicalBox]

    def stab_prefixes(self, q: Sequence[int]) -> List[PrefixRef]:
        raise NotImplementedError

    def stab_count(self, q: Sequence[int]) -> int:
        return sum(r.length for r in self.stab_prefixes(q))

    def stab_ids(self, q: Sequence[int]) -> List[int]:
        out = []
        for r in self.stab_prefixes(q):
            out.extend(self.prefix_box_ids(r.list_id, r.length, 0))
        return out

    def list_length(self, list_id: int) -> int:
        raise NotImplementedError

    def box_id_at(self, list_id: int, i: int) -> int:
        raise NotImplementedError

    def box_at(self, list_id: int, i: int) -> CanonicalBox:
        return self.boxes[self.box_id_at(list_id, i)]

    def prefix_box_ids(self, list_id: int, length: int, skip: int) -> List[int]:
        """Box ids at positions skip+1..length of a list."""
        return [self.box_id_at(list_id, i) for i in range(skip + 1, length + 1)]

    def list_ids(self) -> Iterable[int]:
        raise NotImplementedError

    def lists_at_least(self, min_length: int) -> Dict[int, List[int]]:
        """Explicit box-id lists for every bottom list of length >= min_length."""
        raise NotImplementedError

    def memberships(self) -> List[int]:
        """Per box, the number of bottom lists holding it."""
        raise NotImplementedError

    def duplication_factor(self) -> int:
        """Max number of bottom lists of one corner family holding a single box.

        Backends that index several corner point sets of each box (lower/upper,
        or the four yz corners) count each family separately; ``memberships``
        gives the combined count.
        """
        return max(self.memberships(), default=0)

    def words(self) -> float:
        raise NotImplementedError


class TreeRegistry:
    """Gives each RankTree a disjoint block of global list ids."""

    def __init__(self):
        self.trees: List[RankTree] = []
        self.families: List[str] = []
        self._bases: List[int] = []
        self._next = 1

    def add(self, tree: RankTree, family: str = "") -> RankTree:
        tree.base = self._next
        self._bases.append(self._next)
        self.trees.append(tree)
        self.families.append(family)
        self._next += tree.id_span
        return tree

    def locate(self, list_id: int) -> Tuple[RankTree, int]:
        k = bisect_right(self._bases, list_id) - 1
        if k < 0:
            raise IndexError(f"unknown list id {list_id}")
        tree = self.trees[k]
        return tree, list_id - tree.base


class RankTreeBackedIndex(StabbingIndex):
    """Shared plumbing for backends whose bottom lists are RankTree nodes."""

    registry: TreeRegistry

    def list_length(self, list_id: int) -> int:
        tree, node = self.registry.locate(list_id)
        return tree.list_length(node)

    def box_id_at(self, list_id: int, i: int) -> int:
        tree, node = self.registry.locate(list_id)
        return tree.item_at(node, i)

    def prefix_box_ids(self, list_id: int, length: int, skip: int) -> List[int]:
        tree, node = self.registry.locate(list_id)
        item_at = tree.item_at
        return [item_at(node, i) for i in range(skip + 1, length + 1)]

    def list_ids(self) -> Iterable[int]:
        for tree in self.registry.trees:
            for node in tree.nodes():
                yield tree.base + node

    def lists_at_least(self, min_length: int) -> Dict[int, List[int]]:
        # materialized once and reused: matrices are rebuilt for several block sizes
        every = getattr(self, "_materialized", None)
        if every is None:
            every = {}
            for tree in self.registry.trees:
                for node, ids in tree.materialize(1).items():
                    every[tree.base + node] = ids
            self._materialized = every
        return {lid: ids for lid, ids in every.items() if len(ids) >= min_length}

    def memberships(self, family=None) -> List[int]:
        counts = Counter()
        for tree, fam in zip(self.registry.trees, self.registry.families):
            if family is not None and fam != family:
                continue
            k = tree.height + 1
            for item in tree.items:
                counts[item] += k
        return [counts[i] for i in range(len(self.boxes))]

    def duplication_factor(self) -> int:
        fams = set(self.registry.families)
        return max((max(self.memberships(f), default=0) for f in fams), default=0)

    def words(self) -> float:
        return sum(t.words() for t in self.registry.trees)


def make_backend(name: str, boxes: Sequence[CanonicalBox], arity: int = 2,
                 stride=None) -> StabbingIndex:
    if name == "segseg":
        from .stab_segseg import SegSegIndex
        return SegSegIndex(boxes)
    if name == "segint":
        from .stab_segint import SegIntIndex
        return SegIntIndex(boxes, stride=stride)
    if name == "int2":
        from .stab_int2 import Int2Index
        return Int2Index(boxes, arity, stride=stride)
    raise ParameterError(f"unknown backend {name!r}; expected one of {', '.join(BACKENDS)}")

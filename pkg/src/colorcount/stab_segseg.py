"""Two-layer segment tree stabbing structure (segment tree over z, segment
trees over y, x1-sorted box lists at the bottom).

Fractional cascading is not implemented: each bottom list is searched with
its own binary search.  All bottom lists live back to back in two flat
arrays (x1 keys and box ids) addressed through an offset table, and the
per-node y segment trees are flattened the same way, which keeps the many
short lists and small trees cheap.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right
from collections import defaultdict
from typing import Dict, List, Sequence

from .model import CanonicalBox
from .intervals import SegmentLayout
from .ranktree import PrefixRef
from .stabbing import StabbingIndex


class SegSegIndex(StabbingIndex):
    def __init__(self, boxes: Sequence[CanonicalBox]):
        self.boxes = list(boxes)
        self.top = SegmentLayout((b.z1, b.z2) for b in self.boxes)
        assigned: Dict[int, List[int]] = defaultdict(list)
        for i, b in enumerate(self.boxes):
            for v in self.top.assign(b.z1, b.z2):
                assigned[v].append(i)
        # list id -> slice [start[lid], start[lid + 1]) of the flat arrays, sorted by (x1, box id)
        keys = array("q")
        ids_flat = array("q")
        start = array("q", [0])
        # every y segment tree is flattened too: z-node v owns slot s = slot_of[v],
        # and slots[6s:6s+6] = (ends lo, ends hi, leaf count, wkeys lo, wkeys hi, first list id),
        # where ends are its sorted y endpoints and wkeys the sorted y-nodes that hold a list
        yends = array("q")
        wkeys = array("q")
        slots = array("q")
        slot_of = array("q", [-1]) * (2 * self.top.size)
        bx = self.boxes
        for v in sorted(assigned):
            ids = assigned[v]
            ylay = SegmentLayout((bx[i].y1, bx[i].y2) for i in ids)
            groups: Dict[int, List[int]] = defaultdict(list)
            for i in ids:
                for w in ylay.assign(bx[i].y1, bx[i].y2):
                    groups[w].append(i)
            slot_of[v] = len(slots) // 6
            slots.extend((len(yends), len(yends) + len(ylay.ends), ylay.size,
                          len(wkeys), len(wkeys) + len(groups), len(start) - 1))
            yends.extend(ylay.ends)
            for w in sorted(groups):
                members = sorted(groups[w], key=lambda i: (bx[i].x1, i))
                wkeys.append(w)
                ids_flat.extend(members)
                keys.extend(bx[i].x1 for i in members)
                start.append(len(ids_flat))
        self._keys = keys
        self._ids = ids_flat
        self._start = start
        self._yends = yends
        self._wkeys = wkeys
        self._slots = slots
        self._slot_of = slot_of

    def stab_prefixes(self, q: Sequence[int]) -> List[PrefixRef]:
        x, y, z = q[0], q[1], q[2]
        out = []
        keys, start = self._keys, self._start
        yends, wkeys, slots, slot_of = self._yends, self._wkeys, self._slots, self._slot_of
        for v in self.top.path(z):
            s = slot_of[v]
            if s < 0:
                continue
            e0, e1, size, w0, w1, base = slots[6 * s:6 * s + 6]
            j = bisect_right(yends, y, e0, e1) - 1 - e0
            if j < 0 or j >= e1 - e0 - 1:
                continue
            w = j + size
            while w:
                t = bisect_left(wkeys, w, w0, w1)
                if t < w1 and wkeys[t] == w:
                    lid = base + t - w0
                    lo = start[lid]
                    k = bisect_right(keys, x, lo, start[lid + 1]) - lo
                    if k:
                        out.append(PrefixRef(lid, k))
                w >>= 1
        return out

    def _span(self, list_id: int):
        if not 0 <= list_id < len(self._start) - 1:
            raise IndexError(f"unknown list id {list_id}")
        return self._start[list_id], self._start[list_id + 1]

    def list_length(self, list_id: int) -> int:
        lo, hi = self._span(list_id)
        return hi - lo

    def box_id_at(self, list_id: int, i: int) -> int:
        lo, hi = self._span(list_id)
        if not 1 <= i <= hi - lo:
            raise IndexError(i)
        return self._ids[lo + i - 1]

    def prefix_box_ids(self, list_id: int, length: int, skip: int) -> List[int]:
        lo, hi = self._span(list_id)
        return self._ids[lo + skip:min(lo + length, hi)].tolist()

    def list_ids(self):
        return range(len(self._start) - 1)

    def lists_at_least(self, min_length: int) -> Dict[int, List[int]]:
        st, ids = self._start, self._ids
        return {lid: ids[st[lid]:st[lid + 1]].tolist()
                for lid in range(len(st) - 1) if st[lid + 1] - st[lid] >= min_length}

    def memberships(self) -> List[int]:
        counts = [0] * len(self.boxes)
        for i in self._ids:
            counts[i] += 1
        return counts

    def words(self) -> float:
        w = 6 * len(self.boxes)  # box records
        w += 2 * len(self._ids) + len(self._start)
        w += len(self.top.ends) + len(self._slot_of)
        w += len(self._yends) + len(self._wkeys) + len(self._slots)
        return w


def build_segseg(boxes) -> SegSegIndex:
    """Accepts a ColoredBoxSet or a plain box sequence."""
    return SegSegIndex(getattr(boxes, "boxes", boxes))

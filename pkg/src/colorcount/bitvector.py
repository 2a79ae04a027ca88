"""Static bit vector with constant-time rank.

Two-level directory: absolute counts every 512 bits, and per 64-bit word
counts relative to the enclosing superblock.  Popcount of the final
partial word is done with int.bit_count().
"""

from __future__ import annotations

from typing import Iterable, List

_WORD = 64
_WORDS_PER_SUPER = 8


class RankBitVector:
    __slots__ = ("n", "_words", "_super", "_block", "ones")

    def __init__(self, bits: Iterable[int]):
        words: List[int] = []
        cur = 0
        n = 0
        for b in bits:
            if b:
                cur |= 1 << (n & 63)
            n += 1
            if not n & 63:
                words.append(cur)
                cur = 0
        words.append(cur)  # always one trailing word, so rank(n) never overruns
        self.n = n
        self._words = words
        sup: List[int] = []
        blk: List[int] = []
        total = 0
        rel = 0
        for w, word in enumerate(words):
            if w % _WORDS_PER_SUPER == 0:
                sup.append(total)
                rel = 0
            blk.append(rel)
            c = word.bit_count()
            rel += c
            total += c
        self._super = sup
        self._block = blk
        self.ones = total

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self._words[i >> 6] >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of set bits among positions [0, i)."""
        w = i >> 6
        return (self._super[w >> 3] + self._block[w]
                + (self._words[w] & ((1 << (i & 63)) - 1)).bit_count())

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def words(self) -> float:
        """Storage in 64-bit word equivalents (block counts are 16-bit)."""
        return len(self._words) + len(self._super) + len(self._block) / 4

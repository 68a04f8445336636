"""Pure-Python kernels; reference behaviour for the compiled versions in ``_ckernels``.

Bit sets are Python ints, so there is no width limit here.
"""

from itertools import combinations
from typing import List, Sequence

import numpy as np


def minimal_covers(target: int, masks: Sequence[int]) -> List[int]:
    """All inclusion-minimal index sets whose masks jointly cover ``target``.

    Results are bitmasks over positions in ``masks``. A set is only extended
    while every member still owns a bit no other member covers; a set with a
    redundant member cannot grow into a minimal cover.
    """
    if target == 0:
        return [0]
    cand = [k for k, m in enumerate(masks) if m & target]
    reduced = [masks[k] & target for k in cand]
    out: List[int] = []

    def dfs(start: int, chosen: List[int], union: int) -> None:
        for pos in range(start, len(cand)):
            m = reduced[pos]
            if not m & ~union:
                continue
            members = chosen + [pos]
            if not _all_private(members, reduced):
                continue
            u = union | m
            if u == target:
                sel = 0
                for p in members:
                    sel |= 1 << cand[p]
                out.append(sel)
            else:
                dfs(pos + 1, members, u)

    dfs(0, [], 0)
    return out


def _all_private(members: List[int], reduced: Sequence[int]) -> bool:
    for a in members:
        others = 0
        for b in members:
            if b != a:
                others |= reduced[b]
        if not reduced[a] & ~others:
            return False
    return True


def min_union_degree(masks: Sequence[int], need: int) -> int:
    """Smallest ``k`` such that every ``k``-subset of masks has at least ``need`` bits set.

    Returns ``len(masks) + 1`` when even the full set falls short.
    """
    n = len(masks)
    for k in range(1, n + 1):
        if all(_union(c).bit_count() >= need for c in combinations(masks, k)):
            return k
    return n + 1


def _union(ms) -> int:
    u = 0
    for m in ms:
        u |= m
    return u


def gf_matmul(a: np.ndarray, x: np.ndarray, mul_table: np.ndarray) -> np.ndarray:
    """``a @ x`` over GF(256); ``mul_table[p, q]`` is the field product."""
    a = np.asarray(a, dtype=np.uint8)
    x = np.asarray(x, dtype=np.uint8)
    out = np.zeros((a.shape[0], x.shape[1]), dtype=np.uint8)
    for i in range(a.shape[0]):
        row = out[i]
        for j in range(a.shape[1]):
            c = a[i, j]
            if c:
                row ^= mul_table[c][x[j]]
    return out

"""Two-sided doubling-strength insertion sort over bucket-ordered items.

Two sorted arrays L and R absorb items over rounds of doubling strength
delta. In a round, an ascending pass offers each uninserted item to L: the
boundary is the delta-th largest L member with smaller bucket position, one
counted comparison decides acceptance, and accepted items binary-search
into the slice between that boundary and the smallest boundary from earlier
rounds. A descending pass then offers the rest to R symmetrically. A
rejected round costs one comparison for the test plus one to fold the new
boundary into the stored bound. Boundaries come from position scans over
bucket indices and cost no key comparisons; tests against the infinite
boundaries are free. A final counted merge of L and R yields the output.

The one-sided variant keeps a single sorted array and gallops from one end,
which bounds each item's cost by one chosen one-sided error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComparisonLedger, ItemArray
from .displacement import bucket_sort_by_prediction

_CHUNK = 128


@dataclass
class InsertionAudit:
    """How one item landed: exploration counts rejected-round tests, bound
    updates, and the successful acceptance test; insertion counts the
    binary search. interval_size is the starting slice the search saw."""

    index: int
    bucket_pos: int
    side: str
    round_strength: int
    exploration_comps: int
    insertion_comps: int
    interval_size: int


def boundary_left(L, i: int, delta: int):
    """delta-th largest key among L members with bucket position < i.

    Scans the sorted array from the right using only position tests; no key
    comparison happens. Returns None for the -infinity boundary (fewer than
    delta members qualify).
    """
    seen = 0
    for q in range(len(L) - 1, -1, -1):
        if L[q][1] < i:
            seen += 1
            if seen == delta:
                return L[q]
    return None


def boundary_right(R, i: int, delta: int):
    """delta-th smallest key among R members with bucket position > i."""
    seen = 0
    for q in range(len(R)):
        if R[q][1] > i:
            seen += 1
            if seen == delta:
                return R[q]
    return None


def _nth_eligible_from_right(idx_arr: np.ndarray, size: int, limit: int, need: int) -> int:
    """Position of the need-th entry from the right with index < limit."""
    hi = size
    chunk = _CHUNK
    while hi > 0:
        lo = hi - chunk if hi > chunk else 0
        hits = np.flatnonzero(idx_arr[lo:hi] < limit)
        c = hits.size
        if c >= need:
            return lo + int(hits[c - need])
        need -= c
        hi = lo
        if chunk < 65536:
            chunk *= 8
    return -1


def _nth_eligible_from_left(idx_arr: np.ndarray, size: int, limit: int, need: int) -> int:
    """Position of the need-th entry from the left with index > limit."""
    lo = 0
    chunk = _CHUNK
    while lo < size:
        hi = lo + chunk if size - lo > chunk else size
        hits = np.flatnonzero(idx_arr[lo:hi] > limit)
        c = hits.size
        if c >= need:
            return lo + int(hits[need - 1])
        need -= c
        lo = hi
        if chunk < 65536:
            chunk *= 8
    return -1


def _merge_counted(a: list, b: list, ledger) -> list:
    out = []
    i = j = 0
    comps = 0
    while i < len(a) and j < len(b):
        comps += 1
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    if ledger is not None and comps:
        ledger.add_clean(comps)
    return out


class _Absorber:
    """One suction side: a sorted array plus the bucket-index mirror."""

    __slots__ = ("items", "idx", "size")

    def __init__(self, capacity: int):
        self.items: list = []
        self.idx = np.empty(capacity, dtype=np.int64)
        self.size = 0

    def insert(self, slot: int, item, bucket_pos: int) -> None:
        self.items.insert(slot, item)
        self.idx[slot + 1 : self.size + 1] = self.idx[slot : self.size]
        self.idx[slot] = bucket_pos
        self.size += 1


def two_sided_sort(
    items: ItemArray,
    p_hat,
    ledger: ComparisonLedger = None,
    check_invariants: bool = False,
    audit_sink: list = None,
) -> ItemArray:
    """Sort with per-item cost tied to the smaller of its one-sided errors."""
    n = len(items)
    if n == 0:
        return ItemArray.from_items([])
    order = bucket_sort_by_prediction(items, p_hat)
    by_pos = [items[k] for k in order]  # bucket positions are 1-based below

    left = _Absorber(n)
    right = _Absorber(n)
    side_of = [0] * (n + 2)  # 0 uninserted, 1 in L, 2 in R
    bound_l: list = [None] * (n + 1)  # smallest rejected L boundary (None = +inf)
    bound_r: list = [None] * (n + 1)  # largest rejected R boundary (None = -inf)
    explore = [0] * (n + 1)
    remaining = n

    def charge(item, comps):
        if ledger is not None and comps:
            ledger.record_item(item[1], comps, 0)

    delta = 1
    max_delta = 1 << (n - 1).bit_length()
    while True:
        # L-pass, ascending bucket positions.
        eligible = 0
        for pos in range(1, n + 1):
            if side_of[pos] == 0:
                item = by_pos[pos - 1]
                if eligible < delta:
                    low, low_pos, accept = None, -1, True  # -inf test is free
                else:
                    low_pos = _nth_eligible_from_right(left.idx, left.size, pos, delta)
                    low = left.items[low_pos]
                    explore[pos] += 1
                    accept = low < item
                if accept:
                    stored = bound_l[pos]
                    if stored is None:
                        hi_pos = left.size - 1
                        hi_slot = left.size
                    else:
                        hi_pos = low_pos if low_pos >= 0 else 0
                        while left.items[hi_pos] is not stored:
                            hi_pos += 1
                        hi_slot = hi_pos
                    lo_slot = low_pos + 1
                    interval_size = hi_pos - low_pos + 1 if low_pos >= 0 else hi_pos + 1
                    if check_invariants:
                        if interval_size > delta:
                            raise AssertionError("starting interval exceeds the round strength")
                        for q in range(max(low_pos, 0), hi_pos + 1):
                            if not left.idx[q] < pos:
                                raise AssertionError("starting interval leaks outside eligible members")
                        if eligible != int((left.idx[: left.size] < pos).sum()):
                            raise AssertionError("eligible counter out of sync")
                    comps = 0
                    lo_b, hi_b = lo_slot, hi_slot
                    while lo_b < hi_b:
                        mid = (lo_b + hi_b) // 2
                        comps += 1
                        if item < left.items[mid]:
                            hi_b = mid
                        else:
                            lo_b = mid + 1
                    left.insert(lo_b, item, pos)
                    side_of[pos] = 1
                    remaining -= 1
                    charge(item, comps + (1 if low_pos >= 0 else 0))
                    if check_invariants:
                        arr = left.items
                        if (lo_b > 0 and not arr[lo_b - 1] < item) or (
                            lo_b + 1 < left.size and not item < arr[lo_b + 1]
                        ):
                            raise AssertionError("insertion broke the sorted order of L")
                    if audit_sink is not None:
                        audit_sink.append(
                            InsertionAudit(item[1], pos, "L", delta, explore[pos], comps, interval_size)
                        )
                else:
                    stored = bound_l[pos]
                    if stored is None:
                        bound_l[pos] = low
                        charge(item, 1)
                    else:
                        explore[pos] += 1
                        charge(item, 2)
                        if low < stored:
                            bound_l[pos] = low
            if side_of[pos] == 1:
                eligible += 1

        # R-pass, descending bucket positions.
        eligible = 0
        for pos in range(n, 0, -1):
            if side_of[pos] == 0:
                item = by_pos[pos - 1]
                if eligible < delta:
                    high, high_pos, accept = None, -1, True  # +inf test is free
                else:
                    high_pos = _nth_eligible_from_left(right.idx, right.size, pos, delta)
                    high = right.items[high_pos]
                    explore[pos] += 1
                    accept = item < high
                if accept:
                    stored = bound_r[pos]
                    if stored is None:
                        lo_pos = 0
                        lo_slot = 0
                    else:
                        lo_pos = high_pos if high_pos >= 0 else right.size - 1
                        while right.items[lo_pos] is not stored:
                            lo_pos -= 1
                        lo_slot = lo_pos + 1
                    hi_pos = high_pos if high_pos >= 0 else right.size - 1
                    hi_slot = high_pos if high_pos >= 0 else right.size
                    interval_size = hi_pos - lo_pos + 1 if right.size else 0
                    if check_invariants:
                        if interval_size > delta:
                            raise AssertionError("starting interval exceeds the round strength")
                        for q in range(lo_pos, hi_pos + 1):
                            if not right.idx[q] > pos:
                                raise AssertionError("starting interval leaks outside eligible members")
                        if eligible != int((right.idx[: right.size] > pos).sum()):
                            raise AssertionError("eligible counter out of sync")
                    comps = 0
                    lo_b, hi_b = lo_slot, hi_slot
                    while lo_b < hi_b:
                        mid = (lo_b + hi_b) // 2
                        comps += 1
                        if item < right.items[mid]:
                            hi_b = mid
                        else:
                            lo_b = mid + 1
                    right.insert(lo_b, item, pos)
                    side_of[pos] = 2
                    remaining -= 1
                    charge(item, comps + (1 if high_pos >= 0 else 0))
                    if check_invariants:
                        arr = right.items
                        if (lo_b > 0 and not arr[lo_b - 1] < item) or (
                            lo_b + 1 < right.size and not item < arr[lo_b + 1]
                        ):
                            raise AssertionError("insertion broke the sorted order of R")
                    if audit_sink is not None:
                        audit_sink.append(
                            InsertionAudit(item[1], pos, "R", delta, explore[pos], comps, interval_size)
                        )
                else:
                    stored = bound_r[pos]
                    if stored is None:
                        bound_r[pos] = high
                        charge(item, 1)
                    else:
                        explore[pos] += 1
                        charge(item, 2)
                        if stored < high:
                            bound_r[pos] = high
            if side_of[pos] == 2:
                eligible += 1

        if remaining == 0 or delta >= max_delta:
            break
        delta *= 2

    if remaining:
        raise AssertionError("items left uninserted after the final round")
    return ItemArray.from_items(_merge_counted(left.items, right.items, ledger))


def one_sided_insertion_sort(
    items: ItemArray,
    p_hat,
    side: str = "left",
    ledger: ComparisonLedger = None,
) -> ItemArray:
    """Single sorted array, galloping from one end.

    The left variant inserts in bucket order and gallops from the right,
    so each item pays in its left error; the right variant mirrors both.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    order = bucket_sort_by_prediction(items, p_hat)
    if side == "right":
        order = order[::-1]
    arr: list = []
    for k in order:
        item = items[k]
        m = len(arr)
        comps = 0
        if m == 0:
            arr.append(item)
            continue
        lo, hi = 0, m
        step = 1
        if side == "left":
            while step <= m:
                pos = m - step
                comps += 1
                if arr[pos] < item:
                    lo = pos + 1
                    break
                hi = pos
                step *= 2
        else:
            while step <= m:
                pos = step - 1
                comps += 1
                if item < arr[pos]:
                    hi = pos
                    break
                lo = pos + 1
                step *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            comps += 1
            if item < arr[mid]:
                hi = mid
            else:
                lo = mid + 1
        arr.insert(lo, item)
        if ledger is not None:
            ledger.record_item(item[1], comps, 0)
    return ItemArray.from_items(arr)

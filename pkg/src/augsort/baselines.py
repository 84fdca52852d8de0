"""Classical reference sorters with exact comparison counting.

All take a list of items (or an ItemArray) and return a new sorted list,
adding every key comparison to the ledger's clean total. The adaptive ones
(natural merge, odd-even merge, Cook-Kim) consume the input order as given;
the harness feeds them the bucket-sorted-by-prediction order.
"""

from __future__ import annotations

from .core import ComparisonLedger, ItemArray, SeededRng

COOK_KIM_FALLBACK = 16


def _merge(a: list, b: list, count: list) -> list:
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    c = 0
    while i < la and j < lb:
        c += 1
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    count[0] += c
    return out


def quicksort(seq, rng: SeededRng, ledger: ComparisonLedger = None) -> list:
    """Random-pivot quicksort, n - 1 comparisons per partition."""
    out = list(seq)
    comps = 0
    stack = [(0, len(out) - 1)]
    while stack:
        lo, hi = stack.pop()
        if lo >= hi:
            continue
        p = rng.randint(lo, hi)
        pivot = out[p]
        out[p], out[hi] = out[hi], out[p]
        store = lo
        for k in range(lo, hi):
            comps += 1
            if out[k] < pivot:
                out[store], out[k] = out[k], out[store]
                store += 1
        out[store], out[hi] = out[hi], out[store]
        stack.append((lo, store - 1))
        stack.append((store + 1, hi))
    if ledger is not None:
        ledger.add_clean(comps)
    return out


def mergesort(seq, rng=None, ledger: ComparisonLedger = None) -> list:
    """Top-down mergesort."""
    count = [0]

    def sort(s):
        if len(s) <= 1:
            return s
        mid = len(s) // 2
        return _merge(sort(s[:mid]), sort(s[mid:]), count)

    out = sort(list(seq))
    if ledger is not None:
        ledger.add_clean(count[0])
    return out


def natural_merge_sort(seq, rng=None, ledger: ComparisonLedger = None) -> list:
    """Detect maximal ascending runs, then merge pairwise bottom-up."""
    s = list(seq)
    if len(s) <= 1:
        if ledger is not None:
            ledger.add_clean(0)
        return s
    count = [0]
    runs = []
    cur = [s[0]]
    for k in range(1, len(s)):
        count[0] += 1
        if s[k - 1] < s[k]:
            cur.append(s[k])
        else:
            runs.append(cur)
            cur = [s[k]]
    runs.append(cur)
    while len(runs) > 1:
        merged = []
        for k in range(0, len(runs) - 1, 2):
            merged.append(_merge(runs[k], runs[k + 1], count))
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged
    if ledger is not None:
        ledger.add_clean(count[0])
    return runs[0]


def odd_even_merge_sort(seq, rng=None, ledger: ComparisonLedger = None) -> list:
    """Recursively sort odd- and even-positioned subsequences, then merge."""
    count = [0]

    def sort(s):
        if len(s) <= 1:
            return s
        return _merge(sort(s[0::2]), sort(s[1::2]), count)

    out = sort(list(seq))
    if ledger is not None:
        ledger.add_clean(count[0])
    return out


def cook_kim_sort(seq, rng=None, ledger: ComparisonLedger = None) -> list:
    """Peel adjacent out-of-order pairs into a buffer, sort it, merge back.

    The buffer recurses through the same division while it stays at least
    COOK_KIM_FALLBACK long, then falls back to mergesort.
    """
    count = [0]

    def plain_mergesort(s):
        if len(s) <= 1:
            return s
        mid = len(s) // 2
        return _merge(plain_mergesort(s[:mid]), plain_mergesort(s[mid:]), count)

    def divide(s):
        if len(s) <= 1:
            return s
        core = []
        buffer = []
        for x in s:
            if core:
                count[0] += 1
                if x < core[-1]:
                    buffer.append(core.pop())
                    buffer.append(x)
                    continue
            core.append(x)
        if not buffer:
            return core
        # Recursing is only safe when the division made progress; a fully
        # alternating input reproduces itself as its own buffer.
        if len(buffer) >= COOK_KIM_FALLBACK and len(buffer) < len(s):
            sorted_buffer = divide(buffer)
        else:
            sorted_buffer = plain_mergesort(buffer)
        return _merge(core, sorted_buffer, count)

    out = divide(list(seq))
    if ledger is not None:
        ledger.add_clean(count[0])
    return out


BASELINES = {
    "quicksort": quicksort,
    "mergesort": mergesort,
    "natural_merge": natural_merge_sort,
    "odd_even_straight": odd_even_merge_sort,
    "cook_kim": cook_kim_sort,
}


def run_baseline(kind: str, items, rng: SeededRng, ledger: ComparisonLedger = None) -> ItemArray:
    """Dispatch one baseline over an ItemArray, preserving input order."""
    if kind not in BASELINES:
        raise ValueError(f"unknown baseline: {kind!r}")
    seq = items.items if isinstance(items, ItemArray) else list(items)
    return ItemArray.from_items(BASELINES[kind](seq, rng, ledger))

"""Shared vocabulary: items, permutations, comparison accounting, seeded RNG.

Items are (key, original_index) tuples. The index component makes the
comparison order strict even when raw keys collide, so every algorithm in
this package compares items simply with ``<`` on the tuple. Comparisons
against the ``NEG_INF``/``POS_INF`` sentinels are free: they carry no
information about the instance and are never counted.
"""

from __future__ import annotations

import hashlib
import random
from typing import Iterable, Optional, Sequence


class _Sentinel:
    """Unique +/- infinity marker usable next to arbitrary key types."""

    __slots__ = ("_name", "_sign")

    def __init__(self, name: str, sign: int):
        self._name = name
        self._sign = sign

    def __repr__(self) -> str:
        return self._name

    @property
    def sign(self) -> int:
        return self._sign


NEG_INF = _Sentinel("-inf", -1)
POS_INF = _Sentinel("+inf", +1)


def is_sentinel(x) -> bool:
    return x is NEG_INF or x is POS_INF


def item_less(a, b) -> bool:
    """Strict normalized order between items or sentinels (uncounted)."""
    if a is b:
        return False
    if is_sentinel(a):
        return a is NEG_INF
    if is_sentinel(b):
        return b is POS_INF
    return a < b


class ItemArray:
    """Input array of distinct-keyed items.

    ``items[k]`` is the tuple ``(key, k + 1)``; original indices are 1-based
    and cover exactly {1..n}. Raw key duplicates are legal: the index
    tie-break turns them into a strict order at construction.
    """

    __slots__ = ("items",)

    def __init__(self, keys: Iterable):
        self.items = [(key, k + 1) for k, key in enumerate(keys)]

    @classmethod
    def from_items(cls, items: Sequence[tuple]) -> "ItemArray":
        """Wrap an existing (key, original_index) sequence, validating it."""
        arr = cls.__new__(cls)
        arr.items = list(items)
        n = len(arr.items)
        if sorted(t[1] for t in arr.items) != list(range(1, n + 1)):
            raise ValueError("original indices must form exactly {1..n}")
        return arr

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, k):
        return self.items[k]

    def keys(self) -> list:
        return [t[0] for t in self.items]


class Permutation:
    """True ranks: ``ranks[k]`` is the 1-based sorted position of item k."""

    __slots__ = ("ranks",)

    def __init__(self, ranks: Sequence[int]):
        n = len(ranks)
        if sorted(ranks) != list(range(1, n + 1)):
            raise ValueError("ranks must be a bijection onto {1..n}")
        self.ranks = tuple(ranks)

    def __len__(self) -> int:
        return len(self.ranks)

    def __getitem__(self, k: int) -> int:
        return self.ranks[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.ranks == other.ranks

    def __repr__(self) -> str:
        return f"Permutation({list(self.ranks)})"

    def inverse(self) -> list:
        inv = [0] * len(self.ranks)
        for k, r in enumerate(self.ranks):
            inv[r - 1] = k
        return inv


class PositionalPrediction:
    """Predicted ranks: values in [1, n], duplicates permitted."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence[int]):
        n = len(values)
        vals = tuple(int(v) for v in values)
        for v in vals:
            if not 1 <= v <= n:
                raise ValueError(f"predicted position {v} outside [1, {n}]")
        self.values = vals

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, PositionalPrediction) and self.values == other.values

    def __repr__(self) -> str:
        return f"PositionalPrediction({list(self.values)})"


class ComparisonLedger:
    """Exact counters for clean and dirty comparisons.

    ``per_item_*`` maps original indices to the counts attributed during
    that item's insertion phase; algorithms without per-item phases (the
    baselines) add unattributed bulk counts instead. ``bookkeeping_dirty``
    holds dirty queries spent on multi-predictor loss evaluation, kept out
    of ``dirty_total`` so the single-predictor dirty budget stays checkable.
    """

    __slots__ = (
        "clean_total",
        "dirty_total",
        "bookkeeping_dirty",
        "per_item_clean",
        "per_item_dirty",
        "_unattributed_clean",
        "_unattributed_dirty",
    )

    def __init__(self):
        self.clean_total = 0
        self.dirty_total = 0
        self.bookkeeping_dirty = 0
        self.per_item_clean: dict = {}
        self.per_item_dirty: dict = {}
        self._unattributed_clean = 0
        self._unattributed_dirty = 0

    def record_item(self, index: int, clean: int, dirty: int) -> None:
        """Attribute one insertion phase's counts to original index."""
        self.per_item_clean[index] = self.per_item_clean.get(index, 0) + clean
        self.per_item_dirty[index] = self.per_item_dirty.get(index, 0) + dirty
        self.clean_total += clean
        self.dirty_total += dirty

    def add_clean(self, count: int = 1) -> None:
        self.clean_total += count
        self._unattributed_clean += count

    def add_dirty(self, count: int = 1) -> None:
        self.dirty_total += count
        self._unattributed_dirty += count

    def add_bookkeeping_dirty(self, count: int) -> None:
        self.bookkeeping_dirty += count

    def consistent(self) -> bool:
        """Totals equal attributed sums plus the unattributed remainder."""
        return self.clean_total == sum(self.per_item_clean.values()) + self._unattributed_clean and (
            self.dirty_total == sum(self.per_item_dirty.values()) + self._unattributed_dirty
        )

    def snapshot(self) -> tuple:
        return (
            self.clean_total,
            self.dirty_total,
            self.bookkeeping_dirty,
            tuple(sorted(self.per_item_clean.items())),
            tuple(sorted(self.per_item_dirty.items())),
        )


def derive_seed(master_seed: int, *labels) -> int:
    """Stable 64-bit stream seed for (master_seed, labels).

    blake2b over the decimal renderings keeps the derivation platform- and
    run-independent, unlike hash().
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master_seed)).encode())
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "big")


class SeededRng:
    """Deterministic random stream with named substream derivation."""

    __slots__ = ("seed", "_rng")

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = random.Random(self.seed)

    def spawn(self, *labels) -> "SeededRng":
        """Independent child stream; never advances this stream."""
        return SeededRng(derive_seed(self.seed, *labels))

    def random(self) -> float:
        return self._rng.random()

    def randint(self, a: int, b: int) -> int:
        return self._rng.randint(a, b)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def shuffle(self, seq: list) -> None:
        self._rng.shuffle(seq)

    def sample(self, population, k: int) -> list:
        return self._rng.sample(population, k)

    def choice(self, seq):
        return self._rng.choice(seq)


def rank_permutation(items: ItemArray) -> Permutation:
    """True ranks of each item, by brute sort of the normalized order."""
    order = sorted(range(len(items)), key=lambda k: items[k])
    ranks = [0] * len(items)
    for pos, k in enumerate(order):
        ranks[k] = pos + 1
    for pos in range(1, len(order)):
        if not items[order[pos - 1]] < items[order[pos]]:
            raise ValueError("duplicate keys survived normalization")
    return Permutation(ranks)


def verify_sorted(items) -> bool:
    """True iff the normalized keys strictly increase."""
    seq = items.items if isinstance(items, ItemArray) else list(items)
    return all(seq[k] < seq[k + 1] for k in range(len(seq) - 1))


def is_permutation_of(output, original) -> bool:
    a = output.items if isinstance(output, ItemArray) else list(output)
    b = original.items if isinstance(original, ItemArray) else list(original)
    return sorted(a) == sorted(b)


def counted_compare(ledger: ComparisonLedger, kind: str, a, b, oracle=None, owner: Optional[int] = None) -> str:
    """Compare two items, charging exactly one counter of the given kind.

    Returns "less" or "greater" for a relative to b. Clean comparisons
    against sentinels are free. ``owner`` attributes the count to an item's
    insertion phase; without it the count lands in the unattributed pool.
    """
    if a is b:
        raise ValueError("cannot compare an item with itself")
    if kind == "clean":
        if not (is_sentinel(a) or is_sentinel(b)):
            if a[1] == b[1]:
                raise ValueError("cannot compare an item with itself")
            if owner is None:
                ledger.add_clean(1)
            else:
                ledger.record_item(owner, 1, 0)
        return "less" if item_less(a, b) else "greater"
    if kind == "dirty":
        if oracle is None:
            raise ValueError("dirty comparison requires an oracle")
        if is_sentinel(a) or is_sentinel(b):
            raise ValueError("dirty comparisons take real items only")
        if a[1] == b[1]:
            raise ValueError("cannot compare an item with itself")
        if owner is None:
            ledger.add_dirty(1)
        else:
            ledger.record_item(owner, 0, 1)
        return "less" if oracle.query(a[1], b[1]) else "greater"
    raise ValueError(f"unknown comparison kind: {kind!r}")

"""Instance and oracle factories for the experimental settings.

Every generator is a pure function of (parameters, seed). Synthetic items
carry keys 1..n in shuffled array order, so an item's key doubles as its
true rank.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass, field
from typing import Optional

from .core import ComparisonLedger, ItemArray, Permutation, PositionalPrediction, SeededRng, derive_seed, rank_permutation
from .oracles import DamagedPairOracle, DirtyOracle, PredictionOrderOracle, ProbabilisticOracle


@dataclass
class Instance:
    """One seeded experimental input with at least one error source."""

    items: ItemArray
    truth: Permutation
    prediction: Optional[PositionalPrediction]
    oracle: Optional[DirtyOracle]
    setting: str
    params: dict = field(default_factory=dict)
    seed: int = 0


@dataclass(frozen=True)
class DamageSet:
    damaged: frozenset
    ratio: float
    mode: str


def _shuffled_items(n: int, rng: SeededRng) -> ItemArray:
    keys = list(range(1, n + 1))
    rng.shuffle(keys)
    return ItemArray(keys)


def gen_class(n: int, c: int, seed: int) -> Instance:
    """Coarse-grade predictions: ranks fall into c classes with uniformly
    sampled strict thresholds; each item's prediction is uniform within its
    class interval."""
    if not 1 <= c <= n:
        raise ValueError(f"class count {c} outside [1, {n}]")
    rng = SeededRng(seed)
    items = _shuffled_items(n, rng)
    truth = rank_permutation(items)
    thresholds = sorted(rng.sample(range(1, n), c - 1))
    bounds = [0] + thresholds + [n]
    pred = [0] * n
    for k in range(n):
        r = truth[k]
        ci = bisect.bisect_left(bounds, r)
        pred[k] = rng.randint(bounds[ci - 1] + 1, bounds[ci])
    return Instance(items, truth, PositionalPrediction(pred), None, "class", {"c": c}, seed)


def gen_decay(n: int, steps: int, seed: int) -> Instance:
    """Outdated-ranking predictions: start exact, then drift one item by
    one position per step; moves off [1, n] go the opposite way instead."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rng = SeededRng(seed)
    items = _shuffled_items(n, rng)
    truth = rank_permutation(items)
    pred = list(truth.ranks)
    for _ in range(steps):
        k = rng.randrange(n)
        delta = 1 if rng.random() < 0.5 else -1
        target = pred[k] + delta
        if not 1 <= target <= n:
            target = pred[k] - delta
        if 1 <= target <= n:  # n = 1 has nowhere to go
            pred[k] = target
    return Instance(items, truth, PositionalPrediction(pred), None, "decay", {"steps": steps}, seed)


def gen_block_permutation(n: int, b: int, seed: int) -> Instance:
    """Identity prediction with truth shuffled inside consecutive size-b
    blocks; also induces the prediction-order dirty oracle."""
    if b < 1:
        raise ValueError("block size must be >= 1")
    rng = SeededRng(seed)
    assigned = list(range(1, n + 1))
    for start in range(0, n, b):
        end = min(start + b, n)
        chunk = assigned[start:end]
        rng.shuffle(chunk)
        assigned[start:end] = chunk
    items = ItemArray(assigned)
    truth = rank_permutation(items)
    pred = PositionalPrediction(list(range(1, n + 1)))
    oracle = PredictionOrderOracle(items, pred)
    return Instance(items, truth, pred, oracle, "block", {"b": b}, seed)


def gen_dirty_damaged(n: int, r: float, mode: str, seed: int) -> Instance:
    """Dirty oracle with a damaged subset: perturbed pairs answer with a
    fixed fair coin. good_dominating perturbs both-damaged pairs,
    bad_dominating either-damaged pairs."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("damage ratio outside [0, 1]")
    rng = SeededRng(seed)
    items = _shuffled_items(n, rng)
    truth = rank_permutation(items)
    m = int(r * n + 0.5)
    damaged = frozenset(rng.sample(range(1, n + 1), m))
    oracle = DamagedPairOracle(items, damaged, mode, derive_seed(seed, "pair-coins"))
    params = {"r": r, "mode": mode, "damage": DamageSet(damaged, r, mode)}
    return Instance(items, truth, None, oracle, mode.replace("_dominating", "-dom"), params, seed)


def gen_probabilistic(n: int, flip, seed: int) -> Instance:
    """Items plus an oracle whose every query is an independent draw."""
    rng = SeededRng(seed)
    items = _shuffled_items(n, rng)
    truth = rank_permutation(items)
    oracle = ProbabilisticOracle(items, flip, rng.spawn("queries"))
    return Instance(items, truth, None, oracle, "probabilistic", {"flip": flip}, seed)


def gen_probabilistic_oracle(n: int, flip, seed: int) -> ProbabilisticOracle:
    return gen_probabilistic(n, flip, seed).oracle


def kwiksort_fas(items: ItemArray, oracle: DirtyOracle, rng: SeededRng, ledger: ComparisonLedger = None) -> PositionalPrediction:
    """Random-pivot quicksort on the dirty tournament.

    Produces a positional prediction that roughly agrees with the dirty
    relation, spending expected O(n log n) dirty queries. Partitioning
    always removes the pivot, so it terminates on any tournament.
    """
    if not oracle.deterministic:
        raise ValueError("kwiksort preprocessing needs a deterministic oracle")
    dirty = 0
    output = []
    work = [list(items)]
    while work:
        seg = work.pop()
        if isinstance(seg, tuple):
            output.append(seg[0])
            continue
        if len(seg) <= 1:
            output.extend(seg)
            continue
        pivot = seg[rng.randrange(len(seg))]
        before = []
        after = []
        for x in seg:
            if x is pivot:
                continue
            dirty += 1
            if oracle.query(x[1], pivot[1]):
                before.append(x)
            else:
                after.append(x)
        work.append(after)
        work.append((pivot,))
        work.append(before)
    if ledger is not None and dirty:
        ledger.add_dirty(dirty)
    pred = [0] * len(items)
    for pos, item in enumerate(output):
        pred[item[1] - 1] = pos + 1
    return PositionalPrediction(pred)


def ingest_ranking_csv(path: str, base_year: int, target_year: int) -> Instance:
    """Load an entity,year,rank file; predict target-year ranks from base-year.

    Entities present in both years are kept and re-ranked densely 1..n in
    each year. The truth is the target-year ranking, the prediction the
    base-year one.
    """
    per_year: dict = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["entity", "year", "rank"]:
            raise ValueError(f"{path}: expected header 'entity,year,rank', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            entity = row[0].strip()
            try:
                year = int(row[1])
                rank = int(row[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: year and rank must be integers") from exc
            year_map = per_year.setdefault(year, {})
            if entity in year_map:
                raise ValueError(f"{path}:{lineno}: duplicate entry for ({entity!r}, {year})")
            year_map[entity] = rank
    for year in (base_year, target_year):
        if year not in per_year:
            raise ValueError(f"{path}: no rows for year {year}")
        ranks = sorted(per_year[year].values())
        if ranks != list(range(1, len(ranks) + 1)):
            raise ValueError(f"{path}: ranks for year {year} must form 1..{len(ranks)} with no gaps")
    base = per_year[base_year]
    target = per_year[target_year]
    entities = sorted(set(base) & set(target))
    if not entities:
        raise ValueError(f"{path}: no entities shared between {base_year} and {target_year}")
    base_order = sorted(entities, key=lambda e: base[e])
    target_order = sorted(entities, key=lambda e: target[e])
    base_dense = {e: k + 1 for k, e in enumerate(base_order)}
    target_dense = {e: k + 1 for k, e in enumerate(target_order)}

    items = ItemArray([target_dense[e] for e in entities])
    truth = rank_permutation(items)
    pred = PositionalPrediction([base_dense[e] for e in entities])
    return Instance(
        items,
        truth,
        pred,
        None,
        "ranking",
        {"base_year": base_year, "target_year": target_year, "entities": tuple(entities)},
        0,
    )

"""Dirty comparison oracles: cheap, possibly wrong, pairwise queries.

Every oracle answers ``query(i, j)`` with the truth value of "item i comes
before item j" under its own (possibly erroneous) view, where i and j are
1-based original indices. Deterministic oracles are complete and
asymmetric: ``query(i, j) == not query(j, i)`` on every evaluation.
Probabilistic oracles draw fresh, independent answers per call.
"""

from __future__ import annotations

import numpy as np

from .core import ItemArray, SeededRng, rank_permutation

_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    """splitmix64 finalizer; the keyed hash behind damaged-pair coins."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def pair_coin(seed: int, lo: int, hi: int) -> bool:
    """Fixed fair coin for an unordered pair, stateless and repeatable."""
    z = _mix64((seed & _MASK64) ^ _mix64(lo))
    z = _mix64(z ^ _mix64(hi))
    return bool(z & 1)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = z + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def pair_coin_rows(seed: int, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vector form of pair_coin; must match it bit for bit."""
    base = np.uint64(seed & _MASK64)
    z = _mix64_np(base ^ _mix64_np(lo.astype(np.uint64)))
    z = _mix64_np(z ^ _mix64_np(hi.astype(np.uint64)))
    return (z & np.uint64(1)).astype(bool)


def _truth_ranks(items: ItemArray) -> list:
    """rank_of[original_index] lookup (slot 0 unused)."""
    perm = rank_permutation(items)
    rank_of = [0] * (len(items) + 1)
    for k, item in enumerate(items):
        rank_of[item[1]] = perm[k]
    return rank_of


class DirtyOracle:
    deterministic = True

    def query(self, i: int, j: int) -> bool:
        raise NotImplementedError

    def count_errors_vs(self, i: int, others) -> int:
        """Number of wrong dirty answers between item i and ``others``.

        Used by the multi-predictor bookkeeping; the caller pays the dirty
        queries. Subclasses override with vectorized versions.
        """
        rank = self._rank_of
        ri = rank[i]
        wrong = 0
        for j in others:
            if (ri < rank[j]) != self.query(i, j):
                wrong += 1
        return wrong


class OrderInducedOracle(DirtyOracle):
    """Oracle defined by a total order: query(i, j) = sigma[i] < sigma[j].

    Covers the exact oracle, the fully inverted oracle, and the oracle
    a prediction order induces. sigma values must be pairwise distinct.
    """

    def __init__(self, items: ItemArray, order_values: list):
        self._rank_of = _truth_ranks(items)
        sigma = [0] * (len(items) + 1)
        for k, item in enumerate(items):
            sigma[item[1]] = order_values[k]
        if len(set(sigma[1:])) != len(items):
            raise ValueError("order values must be pairwise distinct")
        self.sigma = sigma
        self.sigma_np = np.asarray(sigma, dtype=np.int64)
        self.rank_np = np.asarray(self._rank_of, dtype=np.int64)

    def query(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("oracle queried with i == j")
        return self.sigma[i] < self.sigma[j]

    def count_errors_vs(self, i: int, others) -> int:
        if not len(others):
            return 0
        others = np.asarray(others, dtype=np.int64)
        true_less = self._rank_of[i] < self.rank_np[others]
        dirty_less = self.sigma[i] < self.sigma_np[others]
        return int(np.count_nonzero(true_less != dirty_less))


class ExactOracle(OrderInducedOracle):
    """Always agrees with the true order."""

    def __init__(self, items: ItemArray):
        ranks = _truth_ranks(items)
        super().__init__(items, [ranks[item[1]] for item in items])


class InvertedOracle(OrderInducedOracle):
    """Always disagrees with the true order."""

    def __init__(self, items: ItemArray):
        n = len(items)
        ranks = _truth_ranks(items)
        super().__init__(items, [n + 1 - ranks[item[1]] for item in items])


class PredictionOrderOracle(OrderInducedOracle):
    """Follows a positional prediction, ties broken by original index."""

    def __init__(self, items: ItemArray, prediction):
        n = len(items)
        order = [prediction[k] * (n + 1) + item[1] for k, item in enumerate(items)]
        super().__init__(items, order)


class FlippedPairsOracle(DirtyOracle):
    """Exact oracle with the answer inverted on a fixed set of pairs."""

    def __init__(self, items: ItemArray, flipped_pairs):
        self._rank_of = _truth_ranks(items)
        self.flipped = {(min(i, j), max(i, j)) for i, j in flipped_pairs}

    def query(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("oracle queried with i == j")
        ans = self._rank_of[i] < self._rank_of[j]
        if (min(i, j), max(i, j)) in self.flipped:
            ans = not ans
        return ans


class DamagedPairOracle(DirtyOracle):
    """Truthful except on perturbed pairs, which get fixed fair coins.

    good-dominating perturbs a pair when both endpoints are damaged,
    bad-dominating when either is. Coins come from a keyed hash of the
    unordered pair, so repeat queries are consistent and asymmetric.
    """

    def __init__(self, items: ItemArray, damaged, mode: str, seed: int):
        if mode not in ("good_dominating", "bad_dominating"):
            raise ValueError(f"unknown damage mode: {mode!r}")
        self._rank_of = _truth_ranks(items)
        n = len(items)
        self.mode = mode
        self.seed = seed & _MASK64
        self.damaged = frozenset(damaged)
        dmg = [False] * (n + 1)
        for i in self.damaged:
            dmg[i] = True
        self._dmg = dmg
        self._dmg_np = np.asarray(dmg, dtype=bool)
        self.rank_np = np.asarray(self._rank_of, dtype=np.int64)

    def _perturbed(self, i: int, j: int) -> bool:
        if self.mode == "good_dominating":
            return self._dmg[i] and self._dmg[j]
        return self._dmg[i] or self._dmg[j]

    def query(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("oracle queried with i == j")
        if self._perturbed(i, j):
            lo, hi = (i, j) if i < j else (j, i)
            coin = pair_coin(self.seed, lo, hi)
            return coin if i == lo else not coin
        return self._rank_of[i] < self._rank_of[j]

    def wrong_count_row(self, i: int) -> int:
        """eta_i computed over all partners, vectorized."""
        n = len(self._rank_of) - 1
        js = np.arange(1, n + 1, dtype=np.int64)
        js = js[js != i]
        true_less = self._rank_of[i] < self.rank_np[js]
        if self.mode == "good_dominating":
            pert = self._dmg[i] & self._dmg_np[js]
        else:
            pert = self._dmg[i] | self._dmg_np[js]
        lo = np.minimum(js, i)
        hi = np.maximum(js, i)
        coins = pair_coin_rows(self.seed, lo, hi)
        dirty_less = np.where(js > i, coins, ~coins)
        dirty_less = np.where(pert, dirty_less, true_less)
        return int(np.count_nonzero(dirty_less != true_less))

    def count_errors_vs(self, i: int, others) -> int:
        if not len(others):
            return 0
        js = np.asarray(others, dtype=np.int64)
        true_less = self._rank_of[i] < self.rank_np[js]
        if self.mode == "good_dominating":
            pert = self._dmg[i] & self._dmg_np[js]
        else:
            pert = self._dmg[i] | self._dmg_np[js]
        coins = pair_coin_rows(self.seed, np.minimum(js, i), np.maximum(js, i))
        dirty_less = np.where(js > i, coins, ~coins)
        dirty_less = np.where(pert, dirty_less, true_less)
        return int(np.count_nonzero(dirty_less != true_less))


class ProbabilisticOracle(DirtyOracle):
    """Flips the true answer independently per query.

    ``flip`` is either one probability applied to every pair or a mapping
    (i, j) -> probability, symmetric in the pair.
    """

    deterministic = False

    def __init__(self, items: ItemArray, flip, rng: SeededRng, default=None):
        self._rank_of = _truth_ranks(items)
        self.n = len(items)
        self._rng = rng
        self._default = None if default is None else float(default)
        if isinstance(flip, (int, float)):
            p = float(flip)
            if not 0.0 <= p <= 1.0:
                raise ValueError("flip probability outside [0, 1]")
            self._uniform = p
            self._table = None
        else:
            self._uniform = None
            self._table = {}
            for (i, j), p in flip.items():
                if not 0.0 <= float(p) <= 1.0:
                    raise ValueError("flip probability outside [0, 1]")
                self._table[(min(i, j), max(i, j))] = float(p)

    def flip_probability(self, i: int, j: int) -> float:
        if self._uniform is not None:
            return self._uniform
        key = (min(i, j), max(i, j))
        if key not in self._table:
            if self._default is not None:
                return self._default
            raise KeyError(f"no flip probability for pair {key}")
        return self._table[key]

    def query(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("oracle queried with i == j")
        ans = self._rank_of[i] < self._rank_of[j]
        if self._rng.random() < self.flip_probability(i, j):
            ans = not ans
        return ans

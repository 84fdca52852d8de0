"""Prediction-error measures, computed by their literal quadratic definitions.

These run offline in the harness and never touch a ComparisonLedger. The
double loops are the definitions themselves; numba compiles them when
available and a vectorized numpy row loop stands in otherwise, with both
paths exact-integer identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import ItemArray, Permutation, PositionalPrediction, rank_permutation
from .oracles import DamagedPairOracle, OrderInducedOracle, ProbabilisticOracle

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without the fast extra
    _HAVE_NUMBA = False


def _as_rank_array(p) -> np.ndarray:
    if isinstance(p, Permutation):
        return np.asarray(p.ranks, dtype=np.int64)
    if isinstance(p, PositionalPrediction):
        return np.asarray(p.values, dtype=np.int64)
    return np.asarray(p, dtype=np.int64)


def _one_sided_numpy(p: np.ndarray, q: np.ndarray):
    n = p.shape[0]
    left = np.zeros(n, dtype=np.int64)
    right = np.zeros(n, dtype=np.int64)
    for i in range(n):
        left[i] = np.count_nonzero((q <= q[i]) & (p > p[i]))
        right[i] = np.count_nonzero((q >= q[i]) & (p < p[i]))
    return left, right


def _pair_inversions_numpy(p: np.ndarray, q: np.ndarray) -> int:
    n = p.shape[0]
    total = 0
    for i in range(n):
        total += int(np.count_nonzero((p[i] < p) & (q[i] >= q)))
    return total


def _order_disagreements_numpy(rank: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    n = rank.shape[0] - 1
    out = np.zeros(n + 1, dtype=np.int64)
    r = rank[1:]
    s = sigma[1:]
    for i in range(1, n + 1):
        diff = (rank[i] < r) != (sigma[i] < s)
        diff[i - 1] = False
        out[i] = int(np.count_nonzero(diff))
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def _one_sided_nb(p, q):  # pragma: no cover - compiled
        n = p.shape[0]
        left = np.zeros(n, dtype=np.int64)
        right = np.zeros(n, dtype=np.int64)
        for i in range(n):
            pi = p[i]
            qi = q[i]
            cl = 0
            cr = 0
            for j in range(n):
                if q[j] <= qi and p[j] > pi:
                    cl += 1
                if q[j] >= qi and p[j] < pi:
                    cr += 1
            left[i] = cl
            right[i] = cr
        return left, right

    @njit(cache=True)
    def _pair_inversions_nb(p, q):  # pragma: no cover - compiled
        n = p.shape[0]
        total = 0
        for i in range(n):
            for j in range(n):
                if p[i] < p[j] and q[i] >= q[j]:
                    total += 1
        return total

    @njit(cache=True)
    def _order_disagreements_nb(rank, sigma):  # pragma: no cover - compiled
        n = rank.shape[0] - 1
        out = np.zeros(n + 1, dtype=np.int64)
        for i in range(1, n + 1):
            c = 0
            for j in range(1, n + 1):
                if j != i and ((rank[i] < rank[j]) != (sigma[i] < sigma[j])):
                    c += 1
            out[i] = c
        return out


def _one_sided(p, q):
    if _HAVE_NUMBA:
        return _one_sided_nb(p, q)
    return _one_sided_numpy(p, q)


def _pair_inversions(p, q) -> int:
    if _HAVE_NUMBA:
        return int(_pair_inversions_nb(p, q))
    return _pair_inversions_numpy(p, q)


def _order_disagreements(rank, sigma) -> np.ndarray:
    if _HAVE_NUMBA:
        return _order_disagreements_nb(rank, sigma)
    return _order_disagreements_numpy(rank, sigma)


def displacement_errors(p, p_hat) -> np.ndarray:
    """Per-item |predicted rank - true rank|."""
    pa = _as_rank_array(p)
    qa = _as_rank_array(p_hat)
    if pa.shape != qa.shape:
        raise ValueError("permutation and prediction sizes differ")
    return np.abs(qa - pa)


def one_sided_errors(p, p_hat):
    """Per-item counts of items predicted on the wrong side.

    left[i] counts j with p_hat(j) <= p_hat(i) yet p(j) > p(i); right[i]
    is symmetric. The j = i term is vacuous and included as the formulas
    state it.
    """
    pa = _as_rank_array(p)
    qa = _as_rank_array(p_hat)
    if pa.shape != qa.shape:
        raise ValueError("permutation and prediction sizes differ")
    return _one_sided(pa, qa)


def dirty_errors(items: ItemArray, oracle) -> np.ndarray:
    """Per-item count of items whose dirty comparison with it is wrong.

    Requires a deterministic oracle; the definition evaluates every
    unordered pair once against the true order.
    """
    if not oracle.deterministic:
        raise ValueError("dirty_errors needs a deterministic oracle; use expected_dirty_errors")
    n = len(items)
    if isinstance(oracle, OrderInducedOracle):
        per_index = _order_disagreements(oracle.rank_np, oracle.sigma_np)
        return np.asarray([per_index[item[1]] for item in items], dtype=np.int64)
    if isinstance(oracle, DamagedPairOracle):
        return np.asarray([oracle.wrong_count_row(item[1]) for item in items], dtype=np.int64)
    perm = rank_permutation(items)
    rank_of = {item[1]: perm[k] for k, item in enumerate(items)}
    eta = {item[1]: 0 for item in items}
    indices = [item[1] for item in items]
    for a in range(n):
        for b in range(a + 1, n):
            i, j = indices[a], indices[b]
            truth = rank_of[i] < rank_of[j]
            if oracle.query(i, j) != truth:
                eta[i] += 1
                eta[j] += 1
    return np.asarray([eta[item[1]] for item in items], dtype=np.int64)


def expected_dirty_errors(oracle: ProbabilisticOracle) -> np.ndarray:
    """Per-item sums of pairwise flip probabilities."""
    if oracle.deterministic:
        raise ValueError("expected_dirty_errors is for probabilistic oracles")
    n = oracle.n
    out = np.zeros(n, dtype=np.float64)
    for i in range(1, n + 1):
        s = 0.0
        for j in range(1, n + 1):
            if j != i:
                s += oracle.flip_probability(i, j)
        out[i - 1] = s
    return out


def global_error_d(p=None, p_hat=None, items: Optional[ItemArray] = None, oracle=None) -> int:
    """Pairs whose order the predictor gets wrong, as one global number.

    Positional form counts pairs with p(i) < p(j) but p_hat(i) >= p_hat(j);
    the dirty form is half the sum of per-item dirty errors.
    """
    if oracle is not None:
        if items is None:
            raise ValueError("dirty-form global error needs the items")
        eta = dirty_errors(items, oracle)
        total = int(eta.sum())
        if total % 2:
            raise AssertionError("per-item dirty errors must sum to an even number")
        return total // 2
    if p is None or p_hat is None:
        raise ValueError("positional-form global error needs p and p_hat")
    pa = _as_rank_array(p)
    qa = _as_rank_array(p_hat)
    if pa.shape != qa.shape:
        raise ValueError("permutation and prediction sizes differ")
    return _pair_inversions(pa, qa)


def sum_log2_plus2(errors) -> float:
    """Sum of log2(error + 2), the cost scale every sorter here targets."""
    arr = np.asarray(errors, dtype=np.float64)
    return float(np.log2(arr + 2.0).sum())


@dataclass
class ErrorProfile:
    """Every per-item error measure plus the global pair error."""

    eta_delta: Optional[np.ndarray] = None
    eta_left: Optional[np.ndarray] = None
    eta_right: Optional[np.ndarray] = None
    eta_dirty: Optional[np.ndarray] = None
    d_global: Optional[int] = None


def compute_error_profile(truth: Permutation, prediction=None, items=None, oracle=None) -> ErrorProfile:
    """Fill an ErrorProfile from whichever error sources exist."""
    profile = ErrorProfile()
    if prediction is not None:
        profile.eta_delta = displacement_errors(truth, prediction)
        profile.eta_left, profile.eta_right = one_sided_errors(truth, prediction)
        profile.d_global = global_error_d(truth, prediction)
    if oracle is not None and oracle.deterministic:
        if items is None:
            raise ValueError("dirty errors need the items")
        profile.eta_dirty = dirty_errors(items, oracle)
        if prediction is None:
            profile.d_global = int(profile.eta_dirty.sum()) // 2
    return profile

"""Randomized BST insertion sort driven by dirty comparisons.

Each item is inserted in uniformly random order: a dirty search walks to a
nil leaf recording the interval (L_t, R_t) each step keeps feasible, a
verification pass backtracks to the last step whose interval still contains
the item, and a clean search finishes the placement from there. The tree is
a BST under clean comparisons at all times.

Verification charges at most two clean comparisons per probed step; probes
share bounds, and a shared bound's outcome is reused instead of recounted.
The clean search does not reuse verification outcomes. Galloping
verification probes t = T, T-1, T-2, T-4, ... and then binary-searches the
last valid step; linear verification walks back one step at a time. Both
find the same step and build the same tree.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    NEG_INF,
    POS_INF,
    ComparisonLedger,
    ItemArray,
    SeededRng,
    verify_sorted,
)

LINEAR = "linear"
GALLOPING = "galloping"
_STRATEGIES = (LINEAR, GALLOPING)


class _Node:
    __slots__ = ("item", "left", "right", "size")

    def __init__(self, item):
        self.item = item
        self.left = None
        self.right = None
        self.size = 1


class SearchTree:
    """Plain unbalanced BST; random insertion order supplies the balance."""

    __slots__ = ("root", "size")

    def __init__(self):
        self.root = None
        self.size = 0

    def inorder(self) -> list:
        out = []
        stack = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            out.append(node.item)
            node = node.right
        return out

    def height(self) -> int:
        def h(node):
            return 0 if node is None else 1 + max(h(node.left), h(node.right))

        return h(self.root)


class SearchTrace:
    """Per-insertion record: step count, last valid step, counted costs,
    and how many steps the verification probed."""

    __slots__ = ("T", "t_star", "clean", "dirty", "probes", "path", "subtree_sizes")

    def __init__(self, T, t_star, clean, dirty, probes=0, path=None, subtree_sizes=None):
        self.T = T
        self.t_star = t_star
        self.clean = clean
        self.dirty = dirty
        self.probes = probes
        self.path = path
        self.subtree_sizes = subtree_sizes


def majority_dirty(oracle, i: int, j: int, repetitions: int, ledger: ComparisonLedger = None, owner=None) -> bool:
    """Majority outcome of an odd number of fresh dirty draws."""
    if repetitions < 1 or repetitions % 2 == 0:
        raise ValueError("repetitions must be odd and >= 1")
    votes = 0
    for _ in range(repetitions):
        if oracle.query(i, j):
            votes += 1
    if ledger is not None:
        if owner is None:
            ledger.add_dirty(repetitions)
        else:
            ledger.record_item(owner, 0, repetitions)
    return votes * 2 > repetitions


def insert_one(
    tree: SearchTree,
    item,
    oracle,
    strategy: str = GALLOPING,
    ledger: ComparisonLedger = None,
    reps: int = 1,
    record_path: bool = False,
    validate_oracle: bool = False,
) -> SearchTrace:
    """Insert one item; returns the trace of the three phases."""
    if strategy not in _STRATEGIES:
        raise ValueError(f"unknown verification strategy: {strategy!r}")
    idx = item[1]
    query = oracle.query

    # Dirty search: record pivots and feasible bounds down to a nil leaf.
    path_nodes = []
    bounds = []
    sizes = [] if record_path else None
    lo = NEG_INF
    hi = POS_INF
    node = tree.root
    dirty_count = 0
    while node is not None:
        path_nodes.append(node)
        bounds.append((lo, hi))
        if record_path:
            sizes.append(node.size)
        jdx = node.item[1]
        if reps == 1:
            dirty_count += 1
            goes_left = query(idx, jdx)
            if validate_oracle and oracle.deterministic and query(jdx, idx) == goes_left:
                raise ValueError(f"oracle asymmetry violation on pair ({idx}, {jdx})")
        else:
            dirty_count += reps
            votes = 0
            for _ in range(reps):
                if query(idx, jdx):
                    votes += 1
            goes_left = votes * 2 > reps
        if goes_left:
            hi = node.item
            node = node.left
        else:
            lo = node.item
            node = node.right
    bounds.append((lo, hi))
    if record_path:
        sizes.append(0)
    total_steps = len(bounds)

    # Verification: find the maximal step whose interval contains the item.
    # Validity is monotone (intervals only narrow), so galloping plus binary
    # search locates the same step the linear walk does.
    memo = {}
    clean_count = 0
    probes = 0

    def item_below(other) -> bool:
        nonlocal clean_count
        if other is POS_INF:
            return True
        if other is NEG_INF:
            return False
        cached = memo.get(other)
        if cached is None:
            clean_count += 1
            cached = item < other
            memo[other] = cached
        return cached

    def valid(t: int) -> bool:
        nonlocal probes
        probes += 1
        lo_t, hi_t = bounds[t - 1]
        if lo_t is not NEG_INF and item_below(lo_t):
            return False
        return item_below(hi_t)

    if strategy == LINEAR:
        t = total_steps
        while not valid(t):
            t -= 1
        t_star = t
    else:
        if valid(total_steps):
            t_star = total_steps
        else:
            step = 1
            while True:
                t = total_steps - step
                if t < 1:
                    t = 1
                if valid(t):
                    lo_valid = t
                    break
                if t == 1:
                    raise AssertionError("step 1 is sentinel-bounded and must be valid")
                step *= 2
            lo_t, hi_t = lo_valid, min(total_steps, lo_valid + step) - 1
            while lo_t < hi_t:
                mid = (lo_t + hi_t + 1) // 2
                if valid(mid):
                    lo_t = mid
                else:
                    hi_t = mid - 1
            t_star = lo_t

    # Clean search from the verified pivot down to the insertion slot.
    if t_star == total_steps:
        visited = []
        if path_nodes:
            parent = path_nodes[-1]
            side_left = bounds[total_steps - 1][1] is parent.item
        else:
            parent = None
            side_left = False
    else:
        node = path_nodes[t_star - 1]
        visited = []
        parent = None
        side_left = False
        while node is not None:
            visited.append(node)
            clean_count += 1
            parent = node
            if item < node.item:
                side_left = True
                node = node.left
            else:
                side_left = False
                node = node.right

    new = _Node(item)
    if parent is None:
        tree.root = new
    elif side_left:
        parent.left = new
    else:
        parent.right = new
    tree.size += 1
    if t_star == total_steps:
        for anc in path_nodes:
            anc.size += 1
    else:
        for anc in path_nodes[: t_star - 1]:
            anc.size += 1
        for anc in visited:
            anc.size += 1

    if ledger is not None:
        ledger.record_item(idx, clean_count, dirty_count)

    path = None
    if record_path:
        pivots = [n.item for n in path_nodes] + [None]
        path = [(bounds[t][0], pivots[t], bounds[t][1]) for t in range(total_steps)]
    return SearchTrace(total_steps, t_star, clean_count, dirty_count, probes, path, sizes)


def dirty_clean_sort(
    items: ItemArray,
    oracle,
    rng: SeededRng,
    strategy: str = GALLOPING,
    ledger: ComparisonLedger = None,
    reps: int = 1,
    check_invariants: bool = False,
    trace_sink: list = None,
) -> ItemArray:
    """Sort via dirty-guided, clean-verified BST insertion."""
    if reps < 1 or reps % 2 == 0:
        raise ValueError("repetitions must be odd and >= 1")
    if reps > 1 and oracle.deterministic:
        raise ValueError("majority repetition only makes sense for probabilistic oracles")
    tree = SearchTree()
    order = list(items)
    rng.shuffle(order)
    record = trace_sink is not None
    for it in order:
        trace = insert_one(
            tree,
            it,
            oracle,
            strategy,
            ledger,
            reps,
            record_path=record,
            validate_oracle=check_invariants,
        )
        if record:
            trace_sink.append(trace)
        if check_invariants and not verify_sorted(tree.inorder()):
            raise AssertionError("BST inorder not sorted after insertion")
    return ItemArray.from_items(tree.inorder())


class HedgeState:
    """Multiplicative-weights state over dirty-comparison predictors."""

    __slots__ = ("weights", "beta", "losses")

    def __init__(self, k: int, horizon: int):
        if k < 1:
            raise ValueError("need at least one predictor")
        self.weights = [1.0] * k
        self.losses = [0.0] * k
        self.beta = 1.0 / (1.0 + math.sqrt(2.0 * math.log(k) / horizon)) if k > 1 else 1.0

    def sample(self, rng: SeededRng) -> int:
        total = sum(self.weights)
        r = rng.random() * total
        acc = 0.0
        for p, w in enumerate(self.weights):
            acc += w
            if r < acc:
                return p
        return len(self.weights) - 1

    def update(self, step_losses) -> None:
        for p, loss in enumerate(step_losses):
            self.losses[p] += loss
            self.weights[p] *= self.beta**loss
        top = max(self.weights)
        if top < 1e-280:
            self.weights = [w / top for w in self.weights]


def multi_predictor_sort(
    items: ItemArray,
    oracles,
    rng: SeededRng,
    ledger: ComparisonLedger = None,
    strategy: str = GALLOPING,
    hedge_sink: HedgeState = None,
) -> ItemArray:
    """Dirty-clean sort choosing among several predictors with Hedge.

    Each insertion samples a predictor from the current weights, then every
    predictor's mistakes against the already-inserted items are tallied with
    dirty queries (charged to the bookkeeping counter) and turned into
    normalized log losses. With one predictor this reduces to
    dirty_clean_sort on the same seed stream.
    """
    k = len(oracles)
    if k < 1:
        raise ValueError("need at least one predictor")
    n = len(items)
    if n < 2:
        return ItemArray.from_items(list(items))
    order = list(items)
    rng.shuffle(order)
    hedge = hedge_sink if hedge_sink is not None else HedgeState(k, n)
    tree = SearchTree()
    inserted = np.empty(n, dtype=np.int64)
    count = 0
    log2n = math.log2(n)
    for it in order:
        chosen = hedge.sample(rng) if k > 1 else 0
        insert_one(tree, it, oracles[chosen], strategy, ledger)
        if k > 1 and count:
            others = inserted[:count]
            step_losses = []
            for oracle in oracles:
                wrong = oracle.count_errors_vs(it[1], others)
                if ledger is not None:
                    ledger.add_bookkeeping_dirty(count)
                step_losses.append(math.log2(1.0 + wrong) / log2n)
            hedge.update(step_losses)
        inserted[count] = it[1]
        count += 1
    return ItemArray.from_items(tree.inorder())

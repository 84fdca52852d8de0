"""Bucket sort by predicted position, then finger-tree insertion.

The finger tree is a scapegoat-style weight-balanced BST with parent links
and per-node subtree size/min/max. Insertion first probes the gaps adjacent
to the finger and to the tree extremes (constant comparisons for run-like
inputs), then falls back to ascending from the finger until the target lies
inside a subtree's key interval and descending from there. Every key
comparison is counted once per insertion (repeat comparisons against the
same boundary key are remembered, not recounted). Rebuilds relink existing
nodes and cost no comparisons.
"""

from __future__ import annotations

import math

from .core import ComparisonLedger, ItemArray, PositionalPrediction

_ALPHA = 2.0 / 3.0
_DEPTH_FACTOR = 1.0 / math.log(1.0 / _ALPHA, 2)  # depth limit: log_{1/alpha}(n)


class _FNode:
    __slots__ = ("item", "left", "right", "parent", "size", "min_item", "max_item")

    def __init__(self, item):
        self.item = item
        self.left = None
        self.right = None
        self.parent = None
        self.size = 1
        self.min_item = item
        self.max_item = item


class FingerTree:
    """Weight-balanced search tree with a finger at the last insertion."""

    __slots__ = ("root", "size", "finger")

    def __init__(self):
        self.root = None
        self.size = 0
        self.finger = None

    # -- structural helpers (no key comparisons) --

    @staticmethod
    def _leftmost(node):
        while node.left is not None:
            node = node.left
        return node

    @staticmethod
    def _rightmost(node):
        while node.right is not None:
            node = node.right
        return node

    @staticmethod
    def _successor(node):
        if node.right is not None:
            return FingerTree._leftmost(node.right)
        while node.parent is not None and node.parent.right is node:
            node = node.parent
        return node.parent

    @staticmethod
    def _predecessor(node):
        if node.left is not None:
            return FingerTree._rightmost(node.left)
        while node.parent is not None and node.parent.left is node:
            node = node.parent
        return node.parent

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
        best = 0
        stack = [(self.root, 1)] if self.root else []
        while stack:
            node, d = stack.pop()
            if d > best:
                best = d
            if node.left:
                stack.append((node.left, d + 1))
            if node.right:
                stack.append((node.right, d + 1))
        return best

    def node_rank(self, node) -> int:
        """1-based inorder rank, from subtree sizes."""
        r = (node.left.size if node.left else 0) + 1
        while node.parent is not None:
            if node.parent.right is node:
                r += (node.parent.left.size if node.parent.left else 0) + 1
            node = node.parent
        return r

    # -- insertion --

    def insert(self, item) -> int:
        """Insert an item, move the finger to it, return comparisons used."""
        if self.root is None:
            node = _FNode(item)
            self.root = node
            self.finger = node
            self.size = 1
            return 0

        comps = 0
        memo = {}

        def below(other) -> bool:
            # is item < other, one counted comparison per distinct key
            nonlocal comps
            cached = memo.get(other)
            if cached is None:
                if item == other:
                    raise ValueError("duplicate key inserted into finger tree")
                comps += 1
                cached = item < other
                memo[other] = cached
            return cached

        parent, side_left = self._locate_slot(item, below)
        node = _FNode(item)
        node.parent = parent
        if side_left:
            parent.left = node
        else:
            parent.right = node
        self.size += 1
        self.finger = node

        # One climb updates sizes and min/max chains, measures depth, and
        # remembers the deepest weight-violating ancestor as scapegoat.
        depth = 0
        left_chain = True
        right_chain = True
        scapegoat = None
        child = node
        anc = parent
        while anc is not None:
            depth += 1
            anc.size += 1
            if anc.left is child:
                right_chain = False
                if left_chain:
                    anc.min_item = item
            else:
                left_chain = False
                if right_chain:
                    anc.max_item = item
            if scapegoat is None and child.size > _ALPHA * anc.size:
                scapegoat = anc
            child = anc
            anc = anc.parent

        if depth > int(_DEPTH_FACTOR * math.log2(self.size)) and self.size > 2:
            self._rebuild(scapegoat if scapegoat is not None else self.root)
        return comps

    def _locate_slot(self, item, below):
        """Find (parent, is_left_slot) for the item's nil position."""
        finger = self.finger

        # Gap adjacent to the finger.
        if below(finger.item):
            pred = self._predecessor(finger)
            if pred is None or not below(pred.item):
                if finger.left is None:
                    return finger, True
                return pred, False
        else:
            succ = self._successor(finger)
            if succ is None or below(succ.item):
                if finger.right is None:
                    return finger, False
                return succ, True

        # Gaps beyond the current extremes.
        lo = self.root.min_item
        hi = self.root.max_item
        if below(lo):
            node = self._leftmost(self.root)
            return node, True
        if not below(hi):
            node = self._rightmost(self.root)
            return node, False

        # Ascend until the subtree's key interval contains the item, then
        # descend normally. The item is strictly inside [lo, hi] here, so a
        # containing ancestor exists.
        u = finger
        while u.parent is not None:
            if not below(u.min_item) and below(u.max_item):
                break
            u = u.parent
        parent = None
        side_left = False
        node = u
        while node is not None:
            parent = node
            if below(node.item):
                side_left = True
                node = node.left
            else:
                side_left = False
                node = node.right
        return parent, side_left

    def _rebuild(self, top) -> None:
        """Relink the subtree under ``top`` into a perfectly balanced one."""
        nodes = []
        stack = []
        node = top
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            nodes.append(node)
            node = node.right

        anchor = top.parent
        was_left = anchor is not None and anchor.left is top

        def build(lo: int, hi: int):
            if lo > hi:
                return None
            mid = (lo + hi) // 2
            root = nodes[mid]
            left = build(lo, mid - 1)
            right = build(mid + 1, hi)
            root.left = left
            root.right = right
            root.size = 1
            root.min_item = root.max_item = root.item
            if left is not None:
                left.parent = root
                root.size += left.size
                root.min_item = left.min_item
            if right is not None:
                right.parent = root
                root.size += right.size
                root.max_item = right.max_item
            return root

        fresh = build(0, len(nodes) - 1)
        fresh.parent = anchor
        if anchor is None:
            self.root = fresh
        elif was_left:
            anchor.left = fresh
        else:
            anchor.right = fresh


def bucket_sort_by_prediction(items, p_hat) -> list:
    """Stable counting-sort order of array positions by predicted rank."""
    n = len(items)
    values = p_hat.values if isinstance(p_hat, PositionalPrediction) else p_hat
    if len(values) != n:
        raise ValueError("prediction and items sizes differ")
    buckets = [[] for _ in range(n + 1)]
    for k in range(n):
        v = values[k]
        if not 1 <= v <= n:
            raise ValueError(f"predicted position {v} outside [1, {n}]")
        buckets[v].append(k)
    return [k for bucket in buckets for k in bucket]


def finger_insert(tree: FingerTree, item, ledger: ComparisonLedger = None):
    """Insert one item, counting into the ledger; returns the new node."""
    comps = tree.insert(item)
    if ledger is not None:
        ledger.record_item(item[1], comps, 0)
    return tree.finger


def displacement_sort(
    items: ItemArray,
    p_hat,
    ledger: ComparisonLedger = None,
    check_invariants: bool = False,
    distance_sink: list = None,
) -> ItemArray:
    """Sort by predicted-position bucket order plus finger insertion.

    ``distance_sink`` collects d_i, the inorder node count from the previous
    insertion to this one (both included), for test builds.
    """
    from .core import verify_sorted

    order = bucket_sort_by_prediction(items, p_hat)
    tree = FingerTree()
    prev_node = None
    for k in order:
        item = items[k]
        comps = tree.insert(item)
        if ledger is not None:
            ledger.record_item(item[1], comps, 0)
        if distance_sink is not None:
            node = tree.finger
            if prev_node is None:
                distance_sink.append((1, comps))
            else:
                d = abs(tree.node_rank(node) - tree.node_rank(prev_node)) + 1
                distance_sink.append((d, comps))
            prev_node = node
        if check_invariants and not verify_sorted(tree.inorder()):
            raise AssertionError("finger tree inorder not sorted after insertion")
    return ItemArray.from_items(tree.inorder())

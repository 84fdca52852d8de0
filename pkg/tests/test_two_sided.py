import math
import random

import numpy as np
import pytest

from augsort import (
    ComparisonLedger,
    ItemArray,
    boundary_left,
    boundary_right,
    is_permutation_of,
    one_sided_errors,
    one_sided_insertion_sort,
    two_sided_sort,
    verify_sorted,
)
from augsort.generators import gen_block_permutation, gen_class, gen_decay
from augsort.two_sided import _merge_counted, _nth_eligible_from_left, _nth_eligible_from_right


def test_boundary_left_examples():
    assert boundary_left([], 4, 1) is None
    L = [(10, 1), (20, 2), (30, 3)]
    assert boundary_left(L, 4, 1) == (30, 3)
    L = [(10, 1), (20, 5), (30, 3)]
    assert boundary_left(L, 4, 2) == (10, 1)  # eligible {10, 30}, 2nd largest
    assert boundary_left(L, 4, 3) is None


def test_boundary_right_mirror():
    R = [(10, 5), (20, 2), (30, 6)]
    assert boundary_right(R, 4, 1) == (10, 5)
    assert boundary_right(R, 4, 2) == (30, 6)
    assert boundary_right(R, 4, 3) is None


def test_chunked_scans_match_reference_boundaries():
    rng = random.Random(31)
    for _ in range(200):
        m = rng.randint(0, 60)
        idx = rng.sample(range(1, 200), m)
        keys = sorted(rng.sample(range(1000), m))
        L = [(keys[q], idx[q]) for q in range(m)]
        arr = np.array(idx + [0], dtype=np.int64)
        i = rng.randint(1, 200)
        delta = rng.randint(1, 8)
        expect = boundary_left(L, i, delta)
        got = _nth_eligible_from_right(arr, m, i, delta)
        assert (expect is None) == (got == -1)
        if expect is not None:
            assert L[got] == expect
        expect = boundary_right(L, i, delta)
        got = _nth_eligible_from_left(arr, m, i, delta)
        assert (expect is None) == (got == -1)
        if expect is not None:
            assert L[got] == expect


def test_two_items_reversed_prediction_hand_case():
    items = ItemArray([1, 2])
    ledger = ComparisonLedger()
    out = two_sided_sort(items, [2, 1], ledger)
    assert verify_sorted(out)
    assert ledger.clean_total <= 4


def test_single_item_costs_nothing():
    ledger = ComparisonLedger()
    out = two_sided_sort(ItemArray([9]), [1], ledger)
    assert verify_sorted(out)
    assert ledger.clean_total == 0


def test_empty_input():
    out = two_sided_sort(ItemArray([]), [])
    assert len(out) == 0


def test_perfect_prediction_costs_linear():
    inst = gen_block_permutation(10_000, 1, 1)
    ledger = ComparisonLedger()
    out = two_sided_sort(inst.items, inst.prediction, ledger)
    assert verify_sorted(out)
    assert ledger.clean_total <= 4 * 10_000


def test_interval_and_round_invariants_on_random_instances():
    rng = random.Random(2024)
    for trial in range(120):
        n = rng.randint(1, 200)
        kind = trial % 3
        if kind == 0:
            inst = gen_block_permutation(n, rng.randint(1, max(1, n)), 3000 + trial)
        elif kind == 1:
            inst = gen_class(n, rng.randint(1, n), 3000 + trial)
        else:
            inst = gen_decay(n, rng.randint(0, 4 * n), 3000 + trial)
        audits = []
        out = two_sided_sort(inst.items, inst.prediction, check_invariants=True, audit_sink=audits)
        assert verify_sorted(out) and is_permutation_of(out, inst.items)
        eta_l, eta_r = one_sided_errors(inst.truth, inst.prediction)
        for audit in audits:
            k = audit.index - 1
            assert audit.interval_size <= audit.round_strength
            cap = 2 ** math.ceil(math.log2(min(int(eta_l[k]), int(eta_r[k])) + 2))
            assert audit.round_strength <= cap, (audit, int(eta_l[k]), int(eta_r[k]))


def test_per_item_cost_tracks_min_one_sided_error():
    inst = gen_block_permutation(2**14, 16, 5)
    audits = []
    two_sided_sort(inst.items, inst.prediction, audit_sink=audits)
    eta_l, eta_r = one_sided_errors(inst.truth, inst.prediction)
    for audit in audits:
        k = audit.index - 1
        bound = 8 * (math.log2(min(int(eta_l[k]), int(eta_r[k])) + 2) + 1)
        assert audit.exploration_comps + audit.insertion_comps <= bound


def test_merge_comparison_budget():
    rng = random.Random(5)
    for _ in range(50):
        a = sorted((rng.random(), k) for k in range(rng.randint(0, 30)))
        b = sorted((rng.random(), 100 + k) for k in range(rng.randint(0, 30)))
        ledger = ComparisonLedger()
        out = _merge_counted(a, b, ledger)
        assert out == sorted(a + b)
        assert ledger.clean_total <= max(0, len(a) + len(b) - 1)


def test_boundary_functions_do_no_key_comparisons():
    class Exploding:
        def __lt__(self, other):
            raise AssertionError("key comparison inside a boundary scan")

        def __gt__(self, other):
            raise AssertionError("key comparison inside a boundary scan")

    L = [(Exploding(), 1), (Exploding(), 7), (Exploding(), 3)]
    assert boundary_left(L, 5, 1) is L[2]
    assert boundary_right(L, 2, 1) is L[1]


def test_one_sided_perfect_prediction_costs_linear():
    inst = gen_block_permutation(10_000, 1, 2)
    for side in ("left", "right"):
        ledger = ComparisonLedger()
        out = one_sided_insertion_sort(inst.items, inst.prediction, side, ledger)
        assert verify_sorted(out)
        assert ledger.clean_total <= 3 * 10_000


def test_one_sided_single_item():
    ledger = ComparisonLedger()
    out = one_sided_insertion_sort(ItemArray([4]), [1], "left", ledger)
    assert verify_sorted(out)
    assert ledger.clean_total == 0


def test_one_sided_adversarial_item_costs_logarithmically():
    # In the left variant the costly single item is the true minimum
    # predicted last: it gallops from the right end across everything.
    costs = {}
    for n in (2**8, 2**10, 2**12, 2**14):
        items = ItemArray(list(range(1, n + 1)))
        pred = list(range(1, n + 1))
        pred[0] = n
        ledger = ComparisonLedger()
        out = one_sided_insertion_sort(items, pred, "left", ledger)
        assert verify_sorted(out)
        costs[n] = ledger.per_item_clean[1]
        assert math.log2(n) <= costs[n] <= 4 * math.log2(n)
    assert costs[2**10] > costs[2**8]
    assert costs[2**14] > costs[2**10]


def test_one_sided_right_variant_mirrors_the_adversary():
    # The mirrored adversary: the true maximum predicted first.
    for n in (2**8, 2**10):
        items = ItemArray(list(range(1, n + 1)))
        pred = [min(v + 1, n) for v in range(1, n + 1)]
        pred[n - 1] = 1
        ledger = ComparisonLedger()
        out = one_sided_insertion_sort(items, pred, "right", ledger)
        assert verify_sorted(out)
        assert math.log2(n) <= ledger.per_item_clean[n] <= 4 * math.log2(n)


def test_one_sided_rejects_unknown_side():
    with pytest.raises(ValueError):
        one_sided_insertion_sort(ItemArray([1]), [1], "middle")


def test_random_correctness_sweep():
    rng = random.Random(77)
    for trial in range(60):
        n = rng.randint(1, 150)
        inst = gen_class(n, rng.randint(1, n), 9000 + trial)
        for side in ("left", "right"):
            out = one_sided_insertion_sort(inst.items, inst.prediction, side)
            assert verify_sorted(out) and is_permutation_of(out, inst.items)
        out = two_sided_sort(inst.items, inst.prediction)
        assert verify_sorted(out) and is_permutation_of(out, inst.items)

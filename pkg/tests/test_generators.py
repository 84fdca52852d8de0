import math
import random

import numpy as np
import pytest

from augsort import (
    ComparisonLedger,
    ItemArray,
    SeededRng,
    dirty_errors,
    displacement_errors,
    gen_block_permutation,
    gen_class,
    gen_decay,
    gen_dirty_damaged,
    gen_probabilistic,
    gen_probabilistic_oracle,
    ingest_ranking_csv,
    kwiksort_fas,
    one_sided_errors,
    rank_permutation,
    sum_log2_plus2,
)
from augsort.oracles import pair_coin, pair_coin_rows

from brute import brute_dirty


def test_class_singleton_classes_force_exact_prediction():
    inst = gen_class(40, 40, 3)
    assert inst.prediction.values == inst.truth.ranks


def test_class_one_class_is_uniform_noise():
    n = 10_000
    inst = gen_class(n, 1, 7)
    mean_delta = displacement_errors(inst.truth, inst.prediction).mean()
    assert abs(mean_delta - n / 3) <= 0.1 * (n / 3)


def test_class_determinism_and_bounds():
    a = gen_class(64, 5, 123)
    b = gen_class(64, 5, 123)
    assert a.prediction.values == b.prediction.values
    assert a.items.items == b.items.items
    with pytest.raises(ValueError):
        gen_class(4, 5, 0)
    with pytest.raises(ValueError):
        gen_class(4, 0, 0)


def test_class_predictions_stay_inside_their_class():
    inst = gen_class(256, 16, 11)
    # within each class interval the prediction cannot cross a threshold
    deltas = displacement_errors(inst.truth, inst.prediction)
    assert deltas.max() <= 256


def test_decay_zero_steps_is_exact():
    inst = gen_decay(32, 0, 5)
    assert inst.prediction.values == inst.truth.ranks


def test_decay_single_step_moves_one_item_one_slot():
    inst = gen_decay(32, 1, 5)
    deltas = displacement_errors(inst.truth, inst.prediction)
    assert sorted(deltas.tolist())[-1] == 1
    assert int(deltas.sum()) == 1


def test_decay_long_run_random_walk_scale():
    means = []
    for seed in range(5):
        inst = gen_decay(1000, 100_000, seed)
        means.append(float(displacement_errors(inst.truth, inst.prediction).mean()))
    mean = sum(means) / len(means)
    assert 3 <= mean <= 40


def test_block_trivial_and_full_blocks():
    ident = gen_block_permutation(16, 1, 3)
    assert ident.prediction.values == ident.truth.ranks
    assert displacement_errors(ident.truth, ident.prediction).sum() == 0
    full = gen_block_permutation(16, 16, 3)
    assert displacement_errors(full.truth, full.prediction).max() <= 15


def test_block_error_bounds_hold_for_every_measure():
    for seed in range(10):
        n, b = 128, 8
        inst = gen_block_permutation(n, b, seed)
        deltas = displacement_errors(inst.truth, inst.prediction)
        assert deltas.max() < b
        eta = dirty_errors(inst.items, inst.oracle)
        assert eta.max() < 2 * b
        eta_l, eta_r = one_sided_errors(inst.truth, inst.prediction)
        assert int(np.minimum(eta_l, eta_r).max()) < b


def test_block_small_example_brute_checked():
    inst = gen_block_permutation(8, 4, 99)
    assert displacement_errors(inst.truth, inst.prediction).max() <= 3


def test_damaged_r0_is_exact_oracle():
    inst = gen_dirty_damaged(48, 0.0, "good_dominating", 4)
    assert dirty_errors(inst.items, inst.oracle).sum() == 0


def test_damaged_r1_bad_dominating_coin_noise():
    n = 400
    inst = gen_dirty_damaged(n, 1.0, "bad_dominating", 4)
    eta = dirty_errors(inst.items, inst.oracle)
    assert abs(eta.mean() - (n - 1) / 2) <= 0.15 * (n - 1) / 2


def test_damaged_good_dominating_mean_error_over_damaged_items():
    # A damaged item has ~ rn damaged partners, each wrong w.p. 1/2.
    n, r = 1000, 0.5
    means = []
    for seed in range(3):
        inst = gen_dirty_damaged(n, r, "good_dominating", seed)
        eta = dirty_errors(inst.items, inst.oracle)
        damaged = inst.params["damage"].damaged
        rows = [eta[k] for k, item in enumerate(inst.items) if item[1] in damaged]
        means.append(sum(rows) / len(rows))
    mean = sum(means) / len(means)
    expected = (r * n - 1) / 2
    assert abs(mean - expected) <= 0.15 * expected


def test_damaged_oracle_asymmetric_consistency():
    inst = gen_dirty_damaged(300, 0.6, "bad_dominating", 8)
    rng = random.Random(0)
    for _ in range(10_000):
        i, j = rng.sample(range(1, 301), 2)
        assert inst.oracle.query(i, j) != inst.oracle.query(j, i)
        assert inst.oracle.query(i, j) == inst.oracle.query(i, j)


def test_damaged_oracle_fast_rows_match_brute():
    inst = gen_dirty_damaged(60, 0.4, "good_dominating", 12)
    truth = rank_permutation(inst.items)
    assert dirty_errors(inst.items, inst.oracle).tolist() == brute_dirty(inst.items, truth.ranks, inst.oracle)


def test_pair_coin_python_and_vector_agree():
    rng = random.Random(3)
    los = np.array([rng.randint(1, 10_000) for _ in range(5000)], dtype=np.int64)
    his = los + np.array([rng.randint(1, 100) for _ in range(5000)], dtype=np.int64)
    vec = pair_coin_rows(987654321, los, his)
    for k in range(0, 5000, 97):
        assert vec[k] == pair_coin(987654321, int(los[k]), int(his[k]))


def test_damage_mode_validation():
    with pytest.raises(ValueError):
        gen_dirty_damaged(10, 0.5, "both_dominating", 1)
    with pytest.raises(ValueError):
        gen_dirty_damaged(10, 1.5, "good_dominating", 1)


def test_probabilistic_oracle_zero_flip_is_exact():
    inst = gen_probabilistic(32, 0.0, 5)
    truth = rank_permutation(inst.items)
    for k in range(31):
        i, j = inst.items[k][1], inst.items[k + 1][1]
        assert inst.oracle.query(i, j) == (truth[k] < truth[k + 1])


def test_probabilistic_oracle_empirical_flip_rates():
    for p, tol in ((0.5, 0.02), (0.25, 0.02)):
        oracle = gen_probabilistic_oracle(64, p, 17)
        inst = gen_probabilistic(64, p, 17)
        truth = rank_permutation(inst.items)
        rank_of = {item[1]: truth[k] for k, item in enumerate(inst.items)}
        rng = random.Random(1)
        wrong = 0
        trials = 10_000
        for _ in range(trials):
            i, j = rng.sample(range(1, 65), 2)
            if oracle.query(i, j) != (rank_of[i] < rank_of[j]):
                wrong += 1
        assert abs(wrong / trials - p) <= tol


def test_kwiksort_exact_oracle_recovers_truth():
    from augsort.oracles import ExactOracle, InvertedOracle

    inst = gen_block_permutation(128, 128, 3)
    pred = kwiksort_fas(inst.items, ExactOracle(inst.items), SeededRng(1))
    assert pred.values == inst.truth.ranks
    rev = kwiksort_fas(inst.items, InvertedOracle(inst.items), SeededRng(1))
    n = len(inst.items)
    assert rev.values == tuple(n + 1 - r for r in inst.truth.ranks)


def test_kwiksort_dirty_query_budget():
    from augsort.oracles import ExactOracle

    n = 2**10
    total = 0
    trials = 30
    for seed in range(trials):
        inst = gen_block_permutation(n, n, seed)
        ledger = ComparisonLedger()
        kwiksort_fas(inst.items, ExactOracle(inst.items), SeededRng(seed), ledger)
        total += ledger.dirty_total
    assert total / trials <= 2 * n * math.log2(n)


def test_kwiksort_error_grows_with_damage_ratio():
    n = 2**10
    averages = []
    for r in (0.0, 0.25, 0.5, 0.75, 1.0):
        acc = 0.0
        for seed in range(30):
            inst = gen_dirty_damaged(n, r, "good_dominating", 50 + seed)
            pred = kwiksort_fas(inst.items, inst.oracle, SeededRng(seed))
            acc += sum_log2_plus2(displacement_errors(inst.truth, pred))
        averages.append(acc / 30)
    assert all(a <= b + 1e-9 for a, b in zip(averages, averages[1:])), averages


def test_probabilistic_rejects_bad_probability():
    with pytest.raises(ValueError):
        gen_probabilistic(8, 1.5, 0)


def test_ranking_sample_file(tmp_path):
    inst = ingest_ranking_csv("data/rankings_sample.csv", 1990, 2000)
    assert displacement_errors(inst.truth, inst.prediction).tolist() == [0, 1, 1]


def test_ranking_same_year_is_exact():
    inst = ingest_ranking_csv("data/rankings_sample.csv", 2000, 2000)
    assert inst.prediction.values == inst.truth.ranks


def test_ranking_two_entity_swap(tmp_path):
    path = tmp_path / "swap.csv"
    path.write_text("entity,year,rank\na,1,1\nb,1,2\na,2,2\nb,2,1\n")
    inst = ingest_ranking_csv(str(path), 1, 2)
    assert displacement_errors(inst.truth, inst.prediction).tolist() == [1, 1]


def test_ranking_error_cases(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("entity,year,rank\na,1,1\n")
    with pytest.raises(ValueError, match="no rows for year 2"):
        ingest_ranking_csv(str(path), 1, 2)
    path.write_text("entity,year,rank\na,1,1\na,1,2\n")
    with pytest.raises(ValueError, match="duplicate"):
        ingest_ranking_csv(str(path), 1, 1)
    path.write_text("entity,year,rank\na,1,one\n")
    with pytest.raises(ValueError, match="integers"):
        ingest_ranking_csv(str(path), 1, 1)
    path.write_text("entity,year\na,1\n")
    with pytest.raises(ValueError, match="header"):
        ingest_ranking_csv(str(path), 1, 1)
    path.write_text("entity,year,rank\na,1,1\nb,1,3\n")
    with pytest.raises(ValueError, match="no gaps"):
        ingest_ranking_csv(str(path), 1, 1)


def test_generators_deterministic_under_seed():
    for make in (
        lambda s: gen_class(50, 7, s),
        lambda s: gen_decay(50, 120, s),
        lambda s: gen_block_permutation(50, 5, s),
        lambda s: gen_dirty_damaged(50, 0.4, "bad_dominating", s),
    ):
        a, b = make(9), make(9)
        assert a.items.items == b.items.items
        if a.prediction is not None:
            assert a.prediction.values == b.prediction.values
        if a.oracle is not None:
            for i, j in ((1, 2), (3, 10), (20, 7)):
                assert a.oracle.query(i, j) == b.oracle.query(i, j)


def test_block_bounds_at_larger_scale():
    inst = gen_block_permutation(2**12, 32, 13)
    assert displacement_errors(inst.truth, inst.prediction).max() < 32
    assert dirty_errors(inst.items, inst.oracle).max() < 64

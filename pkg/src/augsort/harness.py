"""Seeded, repeated experiments over (algorithm, setting, parameter) grids.

Instance seeds derive from (master_seed, setting, parameter, trial) only,
so every algorithm sees identical instances per trial. One record is
emitted per run; unsorted output aborts the experiment with the instance
seed in the message.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from .baselines import BASELINES, run_baseline
from .core import (
    ComparisonLedger,
    ItemArray,
    SeededRng,
    derive_seed,
    is_permutation_of,
    verify_sorted,
)
from .dirty_clean import GALLOPING, LINEAR, dirty_clean_sort
from .displacement import bucket_sort_by_prediction, displacement_sort
from .generators import (
    Instance,
    gen_block_permutation,
    gen_class,
    gen_decay,
    gen_dirty_damaged,
    ingest_ranking_csv,
    kwiksort_fas,
)
from .metrics import dirty_errors, displacement_errors, one_sided_errors, sum_log2_plus2
from .two_sided import one_sided_insertion_sort, two_sided_sort

SETTINGS = ("class", "decay", "block", "good-dom", "bad-dom", "ranking")
AUGMENTED_TAGS = ("dirty_clean", "displacement", "two_sided", "one_sided_left", "one_sided_right")
ALGORITHM_TAGS = AUGMENTED_TAGS + tuple(BASELINES)

_NEEDS_ORACLE = {"dirty_clean"}
# The adaptive baselines consume the bucket-sorted-by-prediction order; the
# oblivious ones (quicksort, mergesort) take the input as is and need no
# prediction, which keeps their cost curves flat across prediction quality.
_ADAPTIVE_BASELINES = {"natural_merge", "odd_even_straight", "cook_kim"}
_NEEDS_PREDICTION = (set(ALGORITHM_TAGS) - _NEEDS_ORACLE) - {"quicksort", "mergesort"}


@dataclass
class ExperimentConfig:
    algorithms: list
    setting: str
    n: int
    params: list
    trials: int = 30
    master_seed: int = 0
    verify_strategy: str = GALLOPING
    reps: int = 1
    out_path: Optional[str] = None
    data_path: Optional[str] = None
    target_year: Optional[int] = None
    record_timing: bool = True

    def validate(self) -> None:
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}; choose from {SETTINGS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.params:
            raise ValueError("at least one parameter value is required")
        if self.verify_strategy not in (LINEAR, GALLOPING):
            raise ValueError("verification strategy must be 'linear' or 'galloping'")
        if self.reps < 1 or self.reps % 2 == 0:
            raise ValueError("repetition count must be odd and >= 1")
        for tag in self.algorithms:
            if tag not in ALGORITHM_TAGS:
                raise ValueError(f"unknown algorithm {tag!r}; choose from {ALGORITHM_TAGS}")
        for p in self.params:
            if self.setting == "class" and not 1 <= int(p) <= self.n:
                raise ValueError(f"class count {p} outside [1, n]")
            if self.setting == "decay" and int(p) < 0:
                raise ValueError("decay steps must be >= 0")
            if self.setting == "block" and int(p) < 1:
                raise ValueError("block size must be >= 1")
            if self.setting in ("good-dom", "bad-dom") and not 0.0 <= float(p) <= 1.0:
                raise ValueError("damage ratio outside [0, 1]")


_RECORD_FIELDS = (
    "algorithm",
    "setting",
    "n",
    "parameter",
    "trial",
    "seed",
    "clean_comparisons",
    "dirty_comparisons",
    "bookkeeping_dirty",
    "wall_time_ns",
    "sum_log_eta_delta",
    "sum_log_eta_minlr",
    "sum_log_eta_dirty",
    "sorted_ok",
)


@dataclass
class ExperimentRecord:
    algorithm: str
    setting: str
    n: int
    parameter: str
    trial: int
    seed: int
    clean_comparisons: int
    dirty_comparisons: int
    bookkeeping_dirty: int
    wall_time_ns: int
    sum_log_eta_delta: Optional[float]
    sum_log_eta_minlr: Optional[float]
    sum_log_eta_dirty: Optional[float]
    sorted_ok: bool


def ranking_target_year(path: str) -> int:
    """Latest year present in a rankings file (the default truth year)."""
    import csv as _csv

    years = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = _csv.reader(fh)
        next(reader, None)
        for row in reader:
            if len(row) == 3:
                try:
                    years.add(int(row[1]))
                except ValueError:
                    continue
    if not years:
        raise ValueError(f"{path}: no usable year column")
    return max(years)


def generate_instance(setting: str, n: int, param, seed: int, data_path: str = None, target_year: int = None) -> Instance:
    if setting == "class":
        return gen_class(n, int(param), seed)
    if setting == "decay":
        return gen_decay(n, int(param), seed)
    if setting == "block":
        return gen_block_permutation(n, int(param), seed)
    if setting == "good-dom":
        return gen_dirty_damaged(n, float(param), "good_dominating", seed)
    if setting == "bad-dom":
        return gen_dirty_damaged(n, float(param), "bad_dominating", seed)
    if setting == "ranking":
        if data_path is None:
            raise ValueError("ranking setting needs a data file path")
        target = target_year if target_year is not None else ranking_target_year(data_path)
        return ingest_ranking_csv(data_path, int(param), target)
    raise ValueError(f"unknown setting {setting!r}")


def _instance_error_sums(inst: Instance):
    delta_sum = minlr_sum = dirty_sum = None
    if inst.prediction is not None:
        delta_sum = sum_log2_plus2(displacement_errors(inst.truth, inst.prediction))
        eta_l, eta_r = one_sided_errors(inst.truth, inst.prediction)
        minlr_sum = sum_log2_plus2(np.minimum(eta_l, eta_r))
    if inst.oracle is not None and inst.oracle.deterministic:
        dirty_sum = sum_log2_plus2(dirty_errors(inst.items, inst.oracle))
    return delta_sum, minlr_sum, dirty_sum


def run_algorithm(
    tag: str,
    inst: Instance,
    ledger: ComparisonLedger,
    rng: SeededRng,
    verify_strategy: str = GALLOPING,
    reps: int = 1,
    prediction=None,
) -> ItemArray:
    """Run one sorter on an instance. ``prediction`` overrides the
    instance's own (used to feed preprocessed predictions to baselines)."""
    pred = prediction if prediction is not None else inst.prediction
    if tag == "dirty_clean":
        if inst.oracle is None:
            raise ValueError("dirty_clean requires a dirty-comparison oracle")
        return dirty_clean_sort(inst.items, inst.oracle, rng, verify_strategy, ledger, reps)
    if tag in BASELINES and tag not in _ADAPTIVE_BASELINES:
        return run_baseline(tag, inst.items, rng, ledger)
    if pred is None:
        raise ValueError(f"{tag} requires a positional prediction")
    if tag == "displacement":
        return displacement_sort(inst.items, pred, ledger)
    if tag == "two_sided":
        return two_sided_sort(inst.items, pred, ledger)
    if tag == "one_sided_left":
        return one_sided_insertion_sort(inst.items, pred, "left", ledger)
    if tag == "one_sided_right":
        return one_sided_insertion_sort(inst.items, pred, "right", ledger)
    if tag in BASELINES:
        if tag in _ADAPTIVE_BASELINES:
            order = bucket_sort_by_prediction(inst.items, pred)
            feed = ItemArray.from_items([inst.items[k] for k in order])
        else:
            feed = inst.items
        return run_baseline(tag, feed, rng, ledger)
    raise ValueError(f"unknown algorithm {tag!r}")


def run_experiment(config: ExperimentConfig) -> list:
    """Run the full grid; returns records ordered by (param, trial, algo)."""
    config.validate()
    records = []
    for param in config.params:
        for trial in range(config.trials):
            inst_seed = derive_seed(config.master_seed, config.setting, param, trial)
            inst = generate_instance(
                config.setting, config.n, param, inst_seed, config.data_path, config.target_year
            )
            n = len(inst.items)
            delta_sum, minlr_sum, dirty_sum = _instance_error_sums(inst)

            fas_pred = None
            fas_dirty = 0
            if inst.prediction is None and any(t in _NEEDS_PREDICTION for t in config.algorithms):
                fas_ledger = ComparisonLedger()
                fas_pred = kwiksort_fas(inst.items, inst.oracle, SeededRng(derive_seed(inst_seed, "fas")), fas_ledger)
                fas_dirty = fas_ledger.dirty_total

            for tag in config.algorithms:
                ledger = ComparisonLedger()
                rng = SeededRng(derive_seed(inst_seed, "run", tag))
                uses_fas = tag in _NEEDS_PREDICTION and inst.prediction is None
                start = time.perf_counter_ns()
                out = run_algorithm(
                    tag,
                    inst,
                    ledger,
                    rng,
                    config.verify_strategy,
                    config.reps,
                    prediction=fas_pred if uses_fas else None,
                )
                wall = time.perf_counter_ns() - start if config.record_timing else 0
                if not (verify_sorted(out) and is_permutation_of(out, inst.items)):
                    raise RuntimeError(
                        f"{tag} produced an unsorted or non-permutation output; "
                        f"reproduce with setting={config.setting} param={param} seed={inst_seed}"
                    )
                records.append(
                    ExperimentRecord(
                        algorithm=tag,
                        setting=config.setting,
                        n=n,
                        parameter=_param_str(param),
                        trial=trial,
                        seed=inst_seed,
                        clean_comparisons=ledger.clean_total,
                        dirty_comparisons=ledger.dirty_total + (fas_dirty if uses_fas else 0),
                        bookkeeping_dirty=ledger.bookkeeping_dirty,
                        wall_time_ns=wall,
                        sum_log_eta_delta=delta_sum,
                        sum_log_eta_minlr=minlr_sum,
                        sum_log_eta_dirty=dirty_sum,
                        sorted_ok=True,
                    )
                )
    return records


def _param_str(param) -> str:
    if isinstance(param, tuple):
        return ":".join(str(p) for p in param)
    return str(param)


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: list, path: str) -> None:
    """Header plus one line per record, exactly the record field order."""
    if not records:
        raise ValueError("refusing to write an empty record list")
    lines = [",".join(_RECORD_FIELDS)]
    for rec in records:
        lines.append(",".join(_format_field(getattr(rec, f)) for f in _RECORD_FIELDS))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path: str) -> list:
    """Inverse of write_csv."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().split("\n") if ln]
    if not lines or lines[0] != ",".join(_RECORD_FIELDS):
        raise ValueError(f"{path}: unexpected header")
    types = {f.name: f.type for f in fields(ExperimentRecord)}
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        kwargs = {}
        for name, raw in zip(_RECORD_FIELDS, parts):
            if types[name] == "Optional[float]":
                kwargs[name] = float(raw) if raw else None
            elif name == "sorted_ok":
                kwargs[name] = raw == "true"
            elif name in ("algorithm", "setting", "parameter"):
                kwargs[name] = raw
            else:
                kwargs[name] = int(raw)
        records.append(ExperimentRecord(**kwargs))
    return records


def summarize(records: list, with_std: bool = True) -> dict:
    """Per-(algorithm, parameter) mean and Bessel-corrected std of clean
    comparisons. Records must share one setting and size."""
    if not records:
        raise ValueError("cannot summarize an empty record list")
    keyset = {(r.setting, r.n) for r in records}
    if len(keyset) > 1:
        raise ValueError(f"records span multiple (setting, n) groups: {sorted(keyset)}")
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.parameter), []).append(rec.clean_comparisons)
    out = {}
    for key, counts in groups.items():
        mean = sum(counts) / len(counts)
        if with_std:
            if len(counts) < 2:
                raise ValueError(
                    f"group {key} has a single record; the corrected std is undefined "
                    "(rerun with trials >= 2 or with_std=False)"
                )
            var = sum((c - mean) ** 2 for c in counts) / (len(counts) - 1)
            out[key] = (mean, math.sqrt(var))
        else:
            out[key] = (mean, None)
    return out


SUMMARY_FIELDS = ("setting", "n", "algorithm", "parameter", "mean_clean", "std_clean")
REFERENCE_ALGORITHM = "n_log2_n"


def make_plotdata(records: list) -> list:
    """Summarized mean/std rows plus the n*log2(n) reference series."""
    by_group: dict = {}
    for rec in records:
        by_group.setdefault((rec.setting, rec.n), []).append(rec)
    rows = []
    for (setting, n), group in sorted(by_group.items()):
        summary = summarize(group)
        params = sorted({p for (_, p) in summary}, key=_param_sort_key)
        algos = sorted({a for (a, _) in summary})
        for algo in algos:
            for p in params:
                if (algo, p) in summary:
                    mean, std = summary[(algo, p)]
                    rows.append((setting, n, algo, p, mean, std))
        reference = float(n) * math.log2(n) if n > 1 else 0.0
        for p in params:
            rows.append((setting, n, REFERENCE_ALGORITHM, p, reference, 0.0))
    return rows


def _param_sort_key(p: str):
    try:
        return (0, float(p), "")
    except ValueError:
        return (1, 0.0, p)


def write_plotdata_csv(rows: list, path: str) -> None:
    if not rows:
        raise ValueError("refusing to write an empty summary")
    lines = [",".join(SUMMARY_FIELDS)]
    for setting, n, algo, param, mean, std in rows:
        lines.append(f"{setting},{n},{algo},{param},{mean!r},{std!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def run_verification(n_max: int = 256, seed: int = 0) -> list:
    """Desk-scale correctness sweep across generators and sorters.

    Returns (check_name, ok, detail) triples; used by the CLI verify
    subcommand.
    """
    from .generators import gen_probabilistic

    results = []
    rng = SeededRng(derive_seed(seed, "verify-sizes"))
    sizes = sorted({1, 2, 3, n_max} | {rng.randint(1, n_max) for _ in range(12)})

    def check(name, fn):
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - verification reports, not crashes
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    def sorted_permutation(tag, inst, out):
        if not verify_sorted(out):
            raise AssertionError(f"{tag}: output not sorted")
        if not is_permutation_of(out, inst.items):
            raise AssertionError(f"{tag}: output not a permutation")

    def sweep(setting, make_inst, tags, reps=1):
        def run():
            for size in sizes:
                for trial in range(2):
                    inst = make_inst(size, trial)
                    fas_pred = None
                    for tag in tags:
                        ledger = ComparisonLedger()
                        arun = SeededRng(derive_seed(seed, setting, size, trial, tag))
                        if tag in _NEEDS_PREDICTION and inst.prediction is None:
                            if fas_pred is None:
                                fas_pred = kwiksort_fas(
                                    inst.items, inst.oracle, SeededRng(derive_seed(seed, "fas", size, trial))
                                )
                            out = run_algorithm(tag, inst, ledger, arun, reps=reps, prediction=fas_pred)
                        else:
                            out = run_algorithm(tag, inst, ledger, arun, reps=reps)
                        sorted_permutation(tag, inst, out)
                        if not ledger.consistent():
                            raise AssertionError(f"{tag}: ledger totals out of sync")

        return run

    all_tags = list(ALGORITHM_TAGS)
    pred_tags = [t for t in all_tags if t != "dirty_clean"]
    check(
        "class instances: all sorters sorted+permutation",
        sweep("class", lambda s, t: gen_class(s, max(1, s // 3), derive_seed(seed, "class", s, t)), pred_tags),
    )
    check(
        "decay instances: all sorters sorted+permutation",
        sweep("decay", lambda s, t: gen_decay(s, 3 * s, derive_seed(seed, "decay", s, t)), pred_tags),
    )
    check(
        "block instances: all sorters sorted+permutation",
        sweep("block", lambda s, t: gen_block_permutation(s, max(1, s // 4), derive_seed(seed, "block", s, t)), all_tags),
    )
    check(
        "good-dom instances: all sorters sorted+permutation",
        sweep("good-dom", lambda s, t: gen_dirty_damaged(s, 0.5, "good_dominating", derive_seed(seed, "gd", s, t)), all_tags),
    )
    check(
        "bad-dom instances: all sorters sorted+permutation",
        sweep("bad-dom", lambda s, t: gen_dirty_damaged(s, 0.3, "bad_dominating", derive_seed(seed, "bd", s, t)), all_tags),
    )
    check(
        "probabilistic oracle: dirty_clean with majority reps",
        sweep("prob", lambda s, t: gen_probabilistic(s, 0.2, derive_seed(seed, "prob", s, t)), ["dirty_clean"], reps=3),
    )

    def replay():
        inst = gen_block_permutation(128, 8, derive_seed(seed, "replay"))
        snaps = []
        for _ in range(2):
            ledger = ComparisonLedger()
            dirty_clean_sort(inst.items, inst.oracle, SeededRng(derive_seed(seed, "replay-run")), GALLOPING, ledger)
            snaps.append(ledger.snapshot())
        if snaps[0] != snaps[1]:
            raise AssertionError("replay with identical seed changed the ledger")

    check("replay determinism: identical seed, identical ledger", replay)

    def singleton():
        inst = gen_class(1, 1, derive_seed(seed, "singleton"))
        ledger = ComparisonLedger()
        from .oracles import ExactOracle

        dirty_clean_sort(inst.items, ExactOracle(inst.items), SeededRng(seed), GALLOPING, ledger)
        if ledger.clean_total != 0 or ledger.dirty_total != 0:
            raise AssertionError("n=1 run counted comparisons; sentinel exemption broken")

    check("sentinel exemption: n=1 counts nothing", singleton)
    return results

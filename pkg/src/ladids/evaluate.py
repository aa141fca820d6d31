"""Test-set metrics and classification latency.

The normal class (label 1) is the positive class for every metric, so
sensitivity is the recall of normal traffic. Unclassified verdicts are
reported under three policies:

* ``error``: an unclassified row counts as a misclassification.
* ``attack``: an unclassified row counts as a prediction of attack.
* ``exclude``: unclassified rows are left out of every metric.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .data import POSITIVE, Dataset
from .errors import ConfigError, DataError
from .rules import RuleSet

EVAL_POLICIES = ("error", "attack", "exclude")


@dataclass(frozen=True)
class Confusion:
    """Raw counts of definite verdicts plus unclassified rows split by truth."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    eps_normal: int = 0
    eps_attack: int = 0

    @property
    def epsilon(self) -> int:
        return self.eps_normal + self.eps_attack

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn + self.epsilon


def _ratio(a: int, b: int) -> float:
    return a / b if b else 0.0


@dataclass(frozen=True)
class Metrics:
    policy: str
    tp: int
    fp: int
    tn: int
    fn: int
    epsilon: int
    accuracy: float
    precision: float
    sensitivity: float
    f1: float

    @classmethod
    def from_confusion(cls, c: Confusion, policy: str = "error") -> "Metrics":
        if policy == "error":
            tp, fp, tn, fn = c.tp, c.fp + c.eps_attack, c.tn, c.fn + c.eps_normal
        elif policy == "attack":
            tp, fp, tn, fn = c.tp, c.fp, c.tn + c.eps_attack, c.fn + c.eps_normal
        elif policy == "exclude":
            tp, fp, tn, fn = c.tp, c.fp, c.tn, c.fn
        else:
            raise ConfigError(f"unknown evaluation policy {policy!r}; expected one of {', '.join(EVAL_POLICIES)}")
        precision = _ratio(tp, tp + fp)
        sensitivity = _ratio(tp, tp + fn)
        f1 = 2 * precision * sensitivity / (precision + sensitivity) if precision + sensitivity else 0.0
        return cls(policy, c.tp, c.fp, c.tn, c.fn, c.epsilon,
                   _ratio(tp + tn, tp + fp + tn + fn), precision, sensitivity, f1)

    def to_dict(self) -> dict:
        return asdict(self)


def confusion(verdicts: Iterable[int | None], truth: Iterable[int]) -> Confusion:
    counts = dict(tp=0, fp=0, tn=0, fn=0, eps_normal=0, eps_attack=0)
    for v, t in zip(verdicts, truth, strict=True):
        if v is None:
            counts["eps_normal" if t == POSITIVE else "eps_attack"] += 1
        elif v == POSITIVE:
            counts["tp" if t == POSITIVE else "fp"] += 1
        else:
            counts["fn" if t == POSITIVE else "tn"] += 1
    return Confusion(**counts)


def _check_test(test: Dataset) -> np.ndarray:
    if not len(test):
        raise DataError("test set is empty")
    if not test.is_labeled:
        raise DataError("test set contains unlabeled rows")
    return test.labels()


def evaluate_all(rs: RuleSet, test: Dataset) -> dict[str, Metrics]:
    """Metrics under every policy, from a single classification pass."""
    truth = _check_test(test)
    c = confusion((rs.classify(obs) for obs in test), truth.tolist())
    return {p: Metrics.from_confusion(c, p) for p in EVAL_POLICIES}


def evaluate(rs: RuleSet, test: Dataset, policy: str = "error") -> Metrics:
    if policy not in EVAL_POLICIES:
        raise ConfigError(f"unknown evaluation policy {policy!r}; expected one of {', '.join(EVAL_POLICIES)}")
    return evaluate_all(rs, test)[policy]


@dataclass(frozen=True)
class Latency:
    rows: int
    mean: float  # seconds per observation
    p99: float

    def to_dict(self) -> dict:
        return asdict(self)


def time_classification(rs: RuleSet, test: Dataset) -> Latency:
    """Wall-clock time of ``rs.classify`` per observation, single-threaded."""
    if not len(test):
        raise DataError("test set is empty")
    clock = time.perf_counter_ns
    samples = np.empty(len(test), dtype=np.int64)
    classify = rs.classify
    for i, obs in enumerate(test):
        t0 = clock()
        classify(obs)
        samples[i] = clock() - t0
    return Latency(len(test), float(samples.mean()) / 1e9, float(np.percentile(samples, 99)) / 1e9)


def report_json(metrics: dict[str, Metrics], latency: Latency | None = None) -> str:
    doc = {"metrics": {p: m.to_dict() for p, m in metrics.items()}}
    if latency is not None:
        doc["latency"] = latency.to_dict()
    return json.dumps(doc, indent=2)


def report_table(metrics: dict[str, Metrics], latency: Latency | None = None) -> str:
    head = f"{'policy':<8} {'TP':>7} {'FP':>7} {'TN':>7} {'FN':>7} {'eps':>7} {'acc':>7} {'prec':>7} {'sens':>7} {'F1':>7}"
    lines = [head, "-" * len(head)]
    for m in metrics.values():
        lines.append(f"{m.policy:<8} {m.tp:>7} {m.fp:>7} {m.tn:>7} {m.fn:>7} {m.epsilon:>7} "
                     f"{m.accuracy:>7.4f} {m.precision:>7.4f} {m.sensitivity:>7.4f} {m.f1:>7.4f}")
    if latency is not None:
        lines.append(f"latency over {latency.rows} rows: mean {latency.mean:.3e} s, p99 {latency.p99:.3e} s")
    return "\n".join(lines)

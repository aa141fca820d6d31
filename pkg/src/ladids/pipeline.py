"""Offline phase: supervised LAD, self-labeling of unlabeled rows, retraining.

``train_offline`` first fits a thresholded balance-score classifier on the
labeled rows, uses it to label the unlabeled rows it is confident about,
drops the rest, and fits the final classifier on the union.
"""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

import numpy as np

from .binarize import binarize, check_thresholds, transform
from .data import NEGATIVE, POSITIVE, Dataset, Observation
from .errors import ConfigError, DataError
from .model import LadModel
from .patterns import covers, generate_patterns
from .rules import DEFAULT_TAU0, DEFAULT_TAU1, MODES, balance_from_counts, compile_rules, decide
from .support import project, select_support_set

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 100
    max_degree: int = 4
    tau0: float = DEFAULT_TAU0
    tau1: float = DEFAULT_TAU1
    prune_full: int = 175
    prune_partial: int = 75
    seed: int = 0
    conflict_policy: str = "error"
    mode: str = "simple"
    # The labeling classifier is a plain LAD model with its own support threshold.
    label_k: int = 1
    label_max_degree: int = 4

    def __post_init__(self):
        if self.k < 1 or self.label_k < 1:
            raise ConfigError("support thresholds must be at least 1")
        if self.max_degree < 1 or self.label_max_degree < 1:
            raise ConfigError("maximum degree must be at least 1")
        if self.tau0 > self.tau1:
            raise ConfigError(f"tau0={self.tau0} exceeds tau1={self.tau1}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.conflict_policy not in ("error", "drop"):
            raise ConfigError(f"unknown conflict policy {self.conflict_policy!r}")
        check_thresholds(self.prune_full, self.prune_partial)

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainingStats:
    rows: int = 0
    positive_rows: int = 0
    negative_rows: int = 0
    dropped_conflicts: int = 0
    binary_variables: int = 0
    pruned_features: dict[str, str] = field(default_factory=dict)
    support_set_size: int = 0
    positive_patterns: int = 0
    negative_patterns: int = 0
    positive_coverage: float = 0.0
    negative_coverage: float = 0.0
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LabelingReport:
    unlabeled: int = 0
    labeled: int = 0
    epsilon: int = 0
    correct: int | None = None
    wrong: int | None = None

    @property
    def accuracy(self) -> float | None:
        if self.correct is None or not self.labeled:
            return None
        return self.correct / self.labeled

    def to_dict(self) -> dict:
        return {**asdict(self), "accuracy": self.accuracy}


def fit_lad(d: Dataset, k: int = 1, max_degree: int = 4, *, prune_full: int = 175, prune_partial: int = 75,
            conflicts: str = "error", mode: str = "simple", tau0: float = DEFAULT_TAU0,
            tau1: float = DEFAULT_TAU1) -> tuple[LadModel, TrainingStats]:
    """Binarize, select a support set, enumerate patterns and compile rules."""
    t0 = time.perf_counter()
    labels = d.labels()
    if not (labels == POSITIVE).any() or not (labels == NEGATIVE).any():
        raise DataError("training data must contain both classes")
    b = binarize(d, prune_full, prune_partial, conflicts)
    if len(set(b.labels.tolist())) < 2:
        raise DataError("only one class is left after dropping conflicting rows")
    support = select_support_set(b)
    pb = project(b, support)
    pos = generate_patterns(pb, POSITIVE, k, max_degree)
    neg = generate_patterns(pb, NEGATIVE, k, max_degree)
    if mode != "simple" and (not pos or not neg):
        raise ConfigError(f"{mode} mode needs positive and negative patterns, found {len(pos)} and {len(neg)}")
    rules = compile_rules(pos + neg, b.descriptors, mode, tau0, tau1)
    model = LadModel(d.schema, b.cut_points, b.descriptors, support, tuple(pos + neg), rules, k, max_degree)

    def covered_share(patterns, polarity):
        target = pb.labels == polarity
        hit = np.zeros(pb.n_rows, dtype=bool)
        cols = {c: j for j, c in enumerate(support)}
        for p in patterns:
            hit |= covers(p, pb.bits, [(cols[lit.id], lit.negated) for lit in p.literals])
        return float(hit[target].mean()) if target.any() else 0.0

    stats = TrainingStats(
        rows=pb.n_rows,
        positive_rows=int((pb.labels == POSITIVE).sum()),
        negative_rows=int((pb.labels == NEGATIVE).sum()),
        dropped_conflicts=len(d) - pb.n_rows,
        binary_variables=b.n_columns,
        pruned_features={d.schema[f].name: fc.status.value for f, fc in b.cut_points.features.items()
                         if fc.status.value != "kept"},
        support_set_size=len(support),
        positive_patterns=len(pos),
        negative_patterns=len(neg),
        positive_coverage=covered_share(pos, POSITIVE),
        negative_coverage=covered_share(neg, NEGATIVE),
        seconds=time.perf_counter() - t0,
    )
    log.info("fitted LAD model on %d rows: %d variables, support %d, %d+%d patterns in %.1fs",
             stats.rows, stats.binary_variables, stats.support_set_size, len(pos), len(neg), stats.seconds)
    return model, stats


def balance_scores(model: LadModel, rows: Dataset) -> list[Fraction]:
    """Balance score of every row, computed on the support-set columns only."""
    q, r = len(model.positive_patterns), len(model.negative_patterns)
    if q < 1 or r < 1:
        raise ConfigError(f"balance score needs both pattern families, got {q} positive and {r} negative")
    descs = [model.descriptors[i] for i in model.support_set]
    bits = transform(rows, model.schema, descs)
    cols = {c: j for j, c in enumerate(model.support_set)}
    fired = {POSITIVE: np.zeros(len(rows), dtype=np.int64), NEGATIVE: np.zeros(len(rows), dtype=np.int64)}
    for p in model.patterns:
        fired[p.polarity] += covers(p, bits, [(cols[lit.id], lit.negated) for lit in p.literals])
    return [balance_from_counts(int(a), q, int(c), r) for a, c in zip(fired[POSITIVE], fired[NEGATIVE])]


def self_label(d_l: Dataset, d_ul: Dataset, cfg: PipelineConfig = PipelineConfig()) -> tuple[Dataset, LabelingReport]:
    """Label the rows of ``d_ul`` whose balance score clears the abstention band.

    Labels already present on ``d_ul`` are never used for labeling; they only
    feed the correct/wrong counts of the report.
    """
    labels = d_l.labels()
    if len(set(labels.tolist())) < 2:
        raise DataError("labeled data must contain both classes to build a balance-score classifier")
    model, _ = fit_lad(d_l, cfg.label_k, cfg.label_max_degree, prune_full=cfg.prune_full,
                       prune_partial=cfg.prune_partial, conflicts=cfg.conflict_policy, mode="thresholded",
                       tau0=cfg.tau0, tau1=cfg.tau1)
    report = LabelingReport(unlabeled=len(d_ul))
    if not len(d_ul):
        return Dataset(d_l.schema, ()), report
    truth_known = d_ul.is_labeled
    if truth_known:
        report.correct = report.wrong = 0
    out: list[Observation] = []
    for obs, delta in zip(d_ul, balance_scores(model, d_ul)):
        verdict = decide(delta, cfg.tau0, cfg.tau1)
        if verdict is None:
            report.epsilon += 1
            continue
        out.append(Observation(obs.values, verdict))
        if truth_known:
            if verdict == obs.label:
                report.correct += 1
            else:
                report.wrong += 1
    report.labeled = len(out)
    log.info("self-labeling: %d labeled, %d left unclassified", report.labeled, report.epsilon)
    return Dataset(d_l.schema, tuple(out)), report


def train_offline(d_l: Dataset, d_ul: Dataset | None = None, cfg: PipelineConfig = PipelineConfig()
                  ) -> tuple[LadModel, LabelingReport | None, TrainingStats]:
    """Build the final rule-based classifier from labeled and unlabeled history.

    Without unlabeled rows this is plain supervised LAD on ``d_l``.
    """
    report = None
    omega = d_l
    if d_ul is not None and len(d_ul):
        extra, report = self_label(d_l, d_ul, cfg)
        omega = d_l.concat(extra)
    model, stats = fit_lad(omega, cfg.k, cfg.max_degree, prune_full=cfg.prune_full,
                           prune_partial=cfg.prune_partial, conflicts=cfg.conflict_policy, mode=cfg.mode,
                           tau0=cfg.tau0, tau1=cfg.tau1)
    return model, report, stats


def with_overrides(cfg: PipelineConfig, **overrides) -> PipelineConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})

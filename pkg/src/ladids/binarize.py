"""Cut-point binarization of mixed continuous/symbolic data.

A continuous feature x with cut-points beta gives level variables
``x >= beta`` and interval variables ``beta1 <= x < beta2`` for every pair of
its cut-points. A symbolic feature gives one indicator ``x == v`` per value
seen in training. Features with too many cut-points are trimmed to their
level variables, or dropped entirely.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Hashable, Iterable, Sequence

import numpy as np

from .data import NEGATIVE, POSITIVE, Dataset, FeatureSchema, Kind, Observation, format_number
from .errors import ConfigError, ConflictError, DataError

log = logging.getLogger(__name__)

DEFAULT_FULL_THRESHOLD = 175
DEFAULT_PARTIAL_THRESHOLD = 75


class PruneStatus(str, Enum):
    KEPT = "kept"
    LEVEL_ONLY = "level-only"
    IGNORED = "fully-ignored"


def _midpoint(a: float, b: float) -> float:
    # Average the decimal forms so the midpoint is the correctly rounded decimal one.
    return float((Decimal(repr(float(a))) + Decimal(repr(float(b)))) / 2)


def find_cut_points(values: Iterable[tuple[float, Hashable]]) -> list[float]:
    """Cut-points (descending) between adjacent distinct values of differing class.

    A value observed with more than one class is first collapsed to a single
    entry carrying a fresh class of its own, so it is cut off from both
    neighbours.
    """
    classes: dict[float, set] = {}
    for v, c in values:
        classes.setdefault(float(v), set()).add(c)
    ordered = sorted(classes, reverse=True)
    tags = [next(iter(classes[v])) if len(classes[v]) == 1 else object() for v in ordered]
    return [_midpoint(hi, lo) for (hi, t1), (lo, t2) in itertools.pairwise(zip(ordered, tags)) if t1 != t2]


def prune_policy(cut_point_count: int, full_threshold: int = DEFAULT_FULL_THRESHOLD,
                 partial_threshold: int = DEFAULT_PARTIAL_THRESHOLD) -> PruneStatus:
    check_thresholds(full_threshold, partial_threshold)
    if cut_point_count >= full_threshold:
        return PruneStatus.IGNORED
    if cut_point_count >= partial_threshold:
        return PruneStatus.LEVEL_ONLY
    return PruneStatus.KEPT


def check_thresholds(full_threshold: int, partial_threshold: int) -> None:
    if not (0 < partial_threshold < full_threshold):
        raise ConfigError(
            f"pruning thresholds must satisfy 0 < partial < full, got partial={partial_threshold}, full={full_threshold}"
        )


@dataclass(frozen=True)
class Descriptor:
    """One binary variable: a predicate over a single source feature."""

    feature: int  # 1-based source feature index
    kind: str  # "level" | "interval" | "nominal"
    lo: float | None = None  # level threshold, or interval lower bound
    hi: float | None = None  # interval upper bound
    value: str | None = None  # nominal token

    def __post_init__(self):
        if self.kind == "interval" and not self.lo < self.hi:
            raise ValueError(f"interval bounds out of order: {self.lo} >= {self.hi}")

    def holds(self, x) -> bool:
        if self.kind == "level":
            return x >= self.lo
        if self.kind == "interval":
            return self.lo <= x < self.hi
        return x == self.value

    def describe(self, name: str) -> str:
        if self.kind == "level":
            return f"{name} ≥ {format_number(self.lo)}"
        if self.kind == "interval":
            return f"{format_number(self.lo)} ≤ {name} < {format_number(self.hi)}"
        return f"{name} = {self.value}"

    def to_json(self) -> dict:
        doc: dict = {"feature": self.feature, "kind": self.kind}
        if self.kind == "nominal":
            doc["value"] = self.value
        else:
            doc["lo"] = self.lo
            if self.kind == "interval":
                doc["hi"] = self.hi
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Descriptor":
        kind = doc["kind"]
        if kind not in ("level", "interval", "nominal"):
            raise ValueError(f"unknown descriptor kind {kind!r}")
        return cls(int(doc["feature"]), kind, doc.get("lo"), doc.get("hi"), doc.get("value"))


@dataclass(frozen=True)
class FeatureCuts:
    cuts: tuple[float, ...]  # strictly decreasing
    status: PruneStatus


@dataclass(frozen=True)
class CutPointTable:
    features: dict[int, FeatureCuts]  # continuous features only, keyed by 1-based index

    def to_json(self) -> list[dict]:
        return [{"feature": f, "cuts": list(fc.cuts), "status": fc.status.value}
                for f, fc in sorted(self.features.items())]

    @classmethod
    def from_json(cls, doc: list[dict]) -> "CutPointTable":
        return cls({int(e["feature"]): FeatureCuts(tuple(e["cuts"]), PruneStatus(e["status"])) for e in doc})


def _interval_pairs(cuts: Sequence[float]) -> list[tuple[float, float]]:
    """All (lo, hi) pairs: lower bound ascending, then upper bound descending."""
    n = len(cuts)
    return [(cuts[j], cuts[i]) for j in range(n - 1, 0, -1) for i in range(j)]


def build_descriptors(d: Dataset, table: CutPointTable) -> list[Descriptor]:
    """Deterministic order: feature index, then levels, intervals, nominals."""
    out: list[Descriptor] = []
    for feat in d.schema.features:
        if feat.kind is Kind.CONTINUOUS:
            fc = table.features[feat.index]
            if fc.status is PruneStatus.IGNORED:
                continue
            out.extend(Descriptor(feat.index, "level", lo=c) for c in fc.cuts)
            if fc.status is PruneStatus.KEPT:
                out.extend(Descriptor(feat.index, "interval", lo=lo, hi=hi) for lo, hi in _interval_pairs(fc.cuts))
        else:
            seen = sorted({obs.values[feat.index - 1] for obs in d})
            out.extend(Descriptor(feat.index, "nominal", value=v) for v in seen)
    return out


def transform(rows: Dataset | Sequence[Observation], schema: FeatureSchema,
              descriptors: Sequence[Descriptor]) -> np.ndarray:
    """Bit matrix (rows x descriptors) of ``rows`` under ``descriptors``."""
    obs = rows.rows if isinstance(rows, Dataset) else rows
    bits = np.zeros((len(obs), len(descriptors)), dtype=bool)
    by_feature: dict[int, list[int]] = {}
    for j, desc in enumerate(descriptors):
        by_feature.setdefault(desc.feature, []).append(j)
    for feature, cols in by_feature.items():
        if schema[feature].kind is Kind.CONTINUOUS:
            x = np.fromiter((o.values[feature - 1] for o in obs), dtype=float, count=len(obs))[:, None]
            lo = np.array([descriptors[j].lo for j in cols])
            hi = np.array([np.inf if descriptors[j].hi is None else descriptors[j].hi for j in cols])
            bits[:, cols] = (x >= lo) & (x < hi)
        else:
            x = np.array([o.values[feature - 1] for o in obs], dtype=object)[:, None]
            vals = np.array([descriptors[j].value for j in cols], dtype=object)
            bits[:, cols] = x == vals
    return bits


def apply_binarization(obs: Observation, descriptors: Sequence[Descriptor]) -> np.ndarray:
    """Bit row of a single observation; unseen symbolic tokens give all zeros."""
    return np.array([d.holds(obs.values[d.feature - 1]) for d in descriptors], dtype=bool)


@dataclass(frozen=True, eq=False)
class BinaryDataset:
    """Binarized observations. ``bits`` is read-only; column j is descriptor j."""

    descriptors: tuple[Descriptor, ...]
    bits: np.ndarray
    labels: np.ndarray
    schema: FeatureSchema | None = None
    cut_points: CutPointTable | None = None
    source_rows: np.ndarray | None = None  # indices into the dataset that was binarized
    column_ids: tuple[int, ...] | None = None  # original descriptor ids after a projection

    def __post_init__(self):
        self.bits.flags.writeable = False
        self.labels.flags.writeable = False

    @property
    def n_rows(self) -> int:
        return self.bits.shape[0]

    @property
    def n_columns(self) -> int:
        return self.bits.shape[1]

    @property
    def positive(self) -> np.ndarray:
        return self.bits[self.labels == POSITIVE]

    @property
    def negative(self) -> np.ndarray:
        return self.bits[self.labels == NEGATIVE]

    def column_id(self, j: int) -> int:
        return j if self.column_ids is None else self.column_ids[j]

    def name(self, j: int) -> str:
        return f"b{self.column_id(j) + 1}"

    def describe(self, j: int) -> str:
        desc = self.descriptors[j]
        name = self.schema[desc.feature].name if self.schema else f"x{desc.feature}"
        return desc.describe(name)


def conflicting_pairs(bits: np.ndarray, labels: np.ndarray) -> list[tuple[int, int]]:
    """(positive row, negative row) index pairs with identical bit rows."""
    packed = np.packbits(bits, axis=1)
    first_pos: dict[bytes, list[int]] = {}
    for i in np.flatnonzero(labels == POSITIVE):
        first_pos.setdefault(packed[i].tobytes(), []).append(int(i))
    pairs = []
    for i in np.flatnonzero(labels == NEGATIVE):
        for p in first_pos.get(packed[i].tobytes(), ()):
            pairs.append((p, int(i)))
    return pairs


def _source_conflicts(d: Dataset) -> list[tuple[int, int]]:
    pos: dict[tuple, list[int]] = {}
    for i, obs in enumerate(d):
        if obs.label == POSITIVE:
            pos.setdefault(obs.values, []).append(i)
    return [(p, i) for i, obs in enumerate(d) if obs.label == NEGATIVE for p in pos.get(obs.values, ())]


def _conflict_message(kind: str, pairs: list[tuple[int, int]]) -> str:
    shown = ", ".join(f"({p}, {n})" for p, n in pairs[:10])
    more = f" and {len(pairs) - 10} more" if len(pairs) > 10 else ""
    return f"{len(pairs)} positive/negative row pairs are {kind}: {shown}{more}"


def binarize(d: Dataset, full_threshold: int = DEFAULT_FULL_THRESHOLD,
             partial_threshold: int = DEFAULT_PARTIAL_THRESHOLD, conflicts: str = "error") -> BinaryDataset:
    """Fit cut-points on ``d`` and return its binary image.

    ``conflicts`` is ``"error"`` or ``"drop"``; with ``"drop"`` every row taking
    part in a positive/negative collision is removed from both classes.
    """
    check_thresholds(full_threshold, partial_threshold)
    if conflicts not in ("error", "drop"):
        raise ConfigError(f"unknown conflict policy {conflicts!r}")
    labels = d.labels()
    keep = np.arange(len(d))

    pairs = _source_conflicts(d)
    if pairs:
        if conflicts == "error":
            raise ConflictError(_conflict_message("identical on every feature", pairs), pairs)
        bad = {i for pair in pairs for i in pair}
        keep = np.array([i for i in keep if i not in bad], dtype=int)
        log.warning("dropped %d rows in %d identical conflicting pairs", len(bad), len(pairs))
        d = d.subset(keep)
        labels = labels[keep]

    table = {}
    for feat in d.schema.features:
        if feat.kind is Kind.CONTINUOUS:
            cuts = tuple(find_cut_points(zip(d.column(feat.index), labels)))
            table[feat.index] = FeatureCuts(cuts, prune_policy(len(cuts), full_threshold, partial_threshold))
    table = CutPointTable(table)
    descriptors = build_descriptors(d, table)
    bits = transform(d, d.schema, descriptors)

    pairs = conflicting_pairs(bits, labels)
    if pairs:
        # Only reachable when a fully ignored feature was the sole difference.
        if conflicts == "error":
            raise ConflictError(_conflict_message("identical once pruned features are ignored", pairs), pairs)
        bad = np.zeros(len(labels), dtype=bool)
        bad[[i for pair in pairs for i in pair]] = True
        log.warning("dropped %d rows that collide after feature pruning", int(bad.sum()))
        bits, labels, keep = bits[~bad], labels[~bad], keep[~bad]
    if not len(labels):
        raise DataError("no rows left after dropping conflicting pairs")

    return BinaryDataset(tuple(descriptors), bits, labels, d.schema, table, keep)

"""Typed loading of NSL-KDD style CSV files.

Records are comma separated without a header: one field per feature, then an
optional class label and an optional trailing difficulty score which is
discarded. Every label other than the positive token collapses to the
negative class, so all attack families become a single "attack" class.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DataError

POSITIVE = 1  # normal traffic
NEGATIVE = 0  # attack


class Kind(str, Enum):
    CONTINUOUS = "continuous"
    SYMBOLIC = "symbolic"


@dataclass(frozen=True)
class Feature:
    index: int  # 1-based column number
    name: str
    kind: Kind


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple[Feature, ...]
    positive_label: str = "normal"
    negative_label: str = "attack"

    def __post_init__(self):
        for i, f in enumerate(self.features, start=1):
            if f.index != i:
                raise ValueError(f"feature {f.name!r} has index {f.index}, expected {i}")

    def __len__(self) -> int:
        return len(self.features)

    def __getitem__(self, index: int) -> Feature:
        """Look a feature up by its 1-based index."""
        return self.features[index - 1]

    @classmethod
    def build(cls, columns: Sequence[tuple[str, str | Kind]], **labels) -> "FeatureSchema":
        feats = tuple(Feature(i, name, Kind(kind)) for i, (name, kind) in enumerate(columns, start=1))
        return cls(feats, **labels)

    def to_json(self) -> dict:
        return {
            "features": [{"index": f.index, "name": f.name, "kind": f.kind.value} for f in self.features],
            "positive_label": self.positive_label,
            "negative_label": self.negative_label,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FeatureSchema":
        feats = tuple(Feature(int(f["index"]), f["name"], Kind(f["kind"])) for f in doc["features"])
        return cls(feats, doc.get("positive_label", "normal"), doc.get("negative_label", "attack"))


_NSL_KDD_COLUMNS = [
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root", "num_file_creations",
    "num_shells", "num_access_files", "num_outbound_cmds", "is_host_login",
    "is_guest_login", "count", "srv_count", "serror_rate", "srv_serror_rate",
    "rerror_rate", "srv_rerror_rate", "same_srv_rate", "diff_srv_rate",
    "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
    "dst_host_same_srv_rate", "dst_host_diff_srv_rate", "dst_host_same_src_port_rate",
    "dst_host_srv_diff_host_rate", "dst_host_serror_rate", "dst_host_srv_serror_rate",
    "dst_host_rerror_rate", "dst_host_srv_rerror_rate",
]
_NSL_KDD_SYMBOLIC = {2, 3, 4, 7, 12, 21, 22}

NSL_KDD = FeatureSchema.build(
    [(name, Kind.SYMBOLIC if i in _NSL_KDD_SYMBOLIC else Kind.CONTINUOUS)
     for i, name in enumerate(_NSL_KDD_COLUMNS, start=1)]
)


@dataclass(frozen=True)
class Observation:
    values: tuple  # float for continuous slots, str for symbolic slots
    label: int | None = None

    def unlabeled(self) -> "Observation":
        return Observation(self.values) if self.label is not None else self


@dataclass(frozen=True)
class Dataset:
    schema: FeatureSchema
    rows: tuple[Observation, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.rows)

    @property
    def is_labeled(self) -> bool:
        return all(r.label is not None for r in self.rows)

    def labels(self) -> np.ndarray:
        if not self.is_labeled:
            raise DataError("dataset contains unlabeled rows")
        return np.fromiter((r.label for r in self.rows), dtype=np.int8, count=len(self.rows))

    def column(self, index: int) -> np.ndarray:
        """Values of the feature with 1-based ``index``."""
        dtype = float if self.schema[index].kind is Kind.CONTINUOUS else object
        return np.array([r.values[index - 1] for r in self.rows], dtype=dtype)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return Dataset(self.schema, tuple(self.rows[i] for i in indices))

    def without_labels(self) -> "Dataset":
        return Dataset(self.schema, tuple(r.unlabeled() for r in self.rows))

    def concat(self, other: "Dataset") -> "Dataset":
        if other.schema != self.schema:
            raise DataError("cannot concatenate datasets with different schemas")
        return Dataset(self.schema, self.rows + other.rows)


def parse_row(fields: Sequence[str], schema: FeatureSchema, labeled: bool, where: str) -> Observation:
    n = len(schema)
    if not n <= len(fields) <= n + 2:
        raise DataError(f"{where}: expected {n} feature fields (plus optional label and difficulty), got {len(fields)}")
    values = []
    for feat, raw in zip(schema.features, fields):
        raw = raw.strip()
        if feat.kind is Kind.CONTINUOUS:
            try:
                v = float(raw)
            except ValueError:
                raise DataError(f"{where}: field {feat.index} ({feat.name}) is not numeric: {raw!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{where}: field {feat.index} ({feat.name}) is not finite: {raw!r}")
        else:
            if not raw:
                raise DataError(f"{where}: field {feat.index} ({feat.name}) is empty")
            v = raw
        values.append(v)
    label = None
    if labeled:
        if len(fields) == n:
            raise DataError(f"{where}: missing class label")
        token = fields[n].strip()
        label = POSITIVE if token == schema.positive_label else NEGATIVE
    return Observation(tuple(values), label)


def iter_csv(path: str | Path, labeled: bool = True, schema: FeatureSchema = NSL_KDD) -> Iterator[Observation]:
    """Stream observations from ``path`` one row at a time."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    with path.open(newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            yield parse_row(fields, schema, labeled, f"{path.name}: row {lineno}")


def load_csv(path: str | Path, labeled: bool = True, schema: FeatureSchema = NSL_KDD) -> Dataset:
    rows = tuple(iter_csv(path, labeled, schema))
    if not rows:
        raise DataError(f"{path}: file contains no records")
    return Dataset(schema, rows)


def format_number(v: float) -> str:
    """Shortest decimal text that parses back to exactly ``v``."""
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def format_row(obs: Observation, schema: FeatureSchema) -> list[str]:
    out = [format_number(v) if f.kind is Kind.CONTINUOUS else v for f, v in zip(schema.features, obs.values)]
    if obs.label is not None:
        out.append(schema.positive_label if obs.label == POSITIVE else schema.negative_label)
    return out


def write_csv(dataset: Dataset, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for obs in dataset:
            w.writerow(format_row(obs, dataset.schema))


def split_random(d: Dataset, n: int, seed: int) -> tuple[Dataset, Dataset]:
    """Draw ``n`` rows without replacement; return (drawn, remainder).

    Both parts keep the original row order.
    """
    if not 0 < n <= len(d):
        raise DataError(f"cannot draw {n} rows from a dataset of {len(d)}")
    rng = np.random.default_rng(seed)
    chosen = np.zeros(len(d), dtype=bool)
    chosen[rng.choice(len(d), size=n, replace=False)] = True
    return d.subset(np.flatnonzero(chosen)), d.subset(np.flatnonzero(~chosen))

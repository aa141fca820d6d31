"""Test fixtures: the three-feature worked example and small synthetic datasets.

Fixture data lives in plain files next to this module::

    worked_example/
        observations.csv   five labeled rows (label 1 positive, 0 negative)
        schema.json        feature schema for the CSV
        expected.json      reference artifacts for every stage
        model.json         rule file this package produces end to end (k=1)
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ..data import NSL_KDD, Dataset, FeatureSchema, Kind, Observation, load_csv


def fixture_dir() -> Path:
    return Path(str(resources.files(__package__)))


@dataclass(frozen=True)
class GoldenCase:
    dataset: Dataset
    expected: dict
    directory: Path

    @property
    def schema(self) -> FeatureSchema:
        return self.dataset.schema

    @property
    def observations_path(self) -> Path:
        return self.directory / "observations.csv"

    @property
    def schema_path(self) -> Path:
        return self.directory / "schema.json"

    @property
    def model_path(self) -> Path:
        return self.directory / "model.json"


def worked_example() -> GoldenCase:
    root = fixture_dir() / "worked_example"
    schema = FeatureSchema.from_json(json.loads((root / "schema.json").read_text()))
    expected = json.loads((root / "expected.json").read_text(encoding="utf-8"))
    return GoldenCase(load_csv(root / "observations.csv", True, schema), expected, root)


def xor_dataset() -> Dataset:
    """Two features whose sign pattern decides the class; no single literal separates it."""
    schema = FeatureSchema.build([("x", Kind.CONTINUOUS), ("y", Kind.CONTINUOUS)])
    pts = [(-1.0, -1.0), (-2.0, -0.5), (1.0, 1.0), (0.5, 2.0), (-1.0, 1.0), (-0.5, 2.0), (1.0, -1.0), (2.0, -0.5)]
    return Dataset(schema, tuple(Observation(p, int((p[0] > 0) == (p[1] > 0))) for p in pts))


_PROTOCOLS = ("tcp", "udp", "icmp")
_SERVICES = ("http", "smtp", "ftp_data", "private", "domain_u", "ecr_i", "telnet", "other")
_FLAGS = ("SF", "S0", "REJ", "RSTO")


def synthetic_nsl(n: int, seed: int = 0, labeled: bool = True) -> Dataset:
    """Rows shaped like NSL-KDD records with a deterministic labeling rule.

    A row is normal when its flag is SF, its service is not ``private`` and
    its connection count is below 150. Identical rows always share a label.
    """
    rng = np.random.default_rng(seed)
    cols: dict[int, np.ndarray] = {}
    cols[1] = np.where(rng.random(n) < 0.8, 0, rng.integers(1, 500, n))
    cols[2] = rng.choice(_PROTOCOLS, n, p=(0.8, 0.15, 0.05))
    cols[3] = rng.choice(_SERVICES, n)
    cols[4] = rng.choice(_FLAGS, n, p=(0.75, 0.15, 0.07, 0.03))
    cols[5] = np.round(rng.lognormal(6.5, 1.5, n))
    cols[6] = np.round(rng.lognormal(7.0, 2.0, n))
    cols[7] = rng.choice(("0", "1"), n, p=(0.99, 0.01))
    cols[12] = rng.choice(("0", "1"), n, p=(0.6, 0.4))
    cols[21] = np.full(n, "0")
    cols[22] = rng.choice(("0", "1"), n, p=(0.95, 0.05))
    cols[23] = rng.integers(1, 300, n)
    cols[24] = rng.integers(1, 300, n)
    for i in range(25, 32):
        cols[i] = np.round(rng.random(n), 2)
    cols[32] = rng.integers(0, 256, n)
    cols[33] = rng.integers(0, 256, n)
    for i in range(34, 42):
        cols[i] = np.round(rng.random(n), 2)
    zeros = np.zeros(n)
    table = [cols.get(f.index, zeros) for f in NSL_KDD.features]
    symbolic = [f.kind is Kind.SYMBOLIC for f in NSL_KDD.features]
    normal = (cols[4] == "SF") & (cols[3] != "private") & (cols[23] < 150)
    rows = []
    for r in range(n):
        values = tuple(str(c[r]) if sym else float(c[r]) for c, sym in zip(table, symbolic))
        rows.append(Observation(values, int(normal[r]) if labeled else None))
    return Dataset(NSL_KDD, tuple(rows))

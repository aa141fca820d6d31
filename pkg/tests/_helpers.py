"""Shared builders and brute-force oracles for the test suite."""
from __future__ import annotations

import itertools

import numpy as np

from ladids.binarize import BinaryDataset, Descriptor
from ladids.data import NEGATIVE, POSITIVE, Dataset, FeatureSchema, Kind, Observation


def binary(bits, labels) -> BinaryDataset:
    bits = np.asarray(bits, dtype=bool)
    descs = tuple(Descriptor(1, "level", lo=float(j)) for j in range(bits.shape[1]))
    return BinaryDataset(descs, bits.copy(), np.asarray(labels, dtype=np.int8).copy())


def random_separable(rng: np.random.Generator, max_cols: int = 10, max_rows: int = 60) -> BinaryDataset:
    """Random binary dataset with both classes and no positive/negative collision."""
    while True:
        n_cols = int(rng.integers(1, max_cols + 1))
        n_rows = int(rng.integers(2, max_rows + 1))
        bits = rng.random((n_rows, n_cols)) < rng.uniform(0.2, 0.8)
        labels = (rng.random(n_rows) < 0.5).astype(np.int8)
        # Keep the first label seen for each distinct row so the classes cannot collide.
        seen: dict[bytes, int] = {}
        for i in range(n_rows):
            labels[i] = seen.setdefault(bits[i].tobytes(), labels[i])
        if (labels == POSITIVE).any() and (labels == NEGATIVE).any():
            return binary(bits, labels)


def all_terms(n_cols: int, max_degree: int):
    """Every conjunction of literals on distinct columns, as ((col, negated), ...)."""
    for d in range(1, max_degree + 1):
        for cols in itertools.combinations(range(n_cols), d):
            for negs in itertools.product((False, True), repeat=d):
                yield tuple(zip(cols, negs))


def term_cover(bits: np.ndarray, term) -> np.ndarray:
    hit = np.ones(bits.shape[0], dtype=bool)
    for j, neg in term:
        hit &= bits[:, j] != neg
    return hit


def separates(bits: np.ndarray, labels: np.ndarray) -> bool:
    pos = {r.tobytes() for r in bits[labels == POSITIVE]}
    return not any(r.tobytes() in pos for r in bits[labels == NEGATIVE])


def min_support_size(bits: np.ndarray, labels: np.ndarray) -> int:
    n = bits.shape[1]
    for size in range(n + 1):
        for cols in itertools.combinations(range(n), size):
            if separates(bits[:, list(cols)], labels):
                return size
    raise AssertionError("classes are not separable")


MIXED_SCHEMA = FeatureSchema.build([("u", Kind.CONTINUOUS), ("proto", Kind.SYMBOLIC), ("v", Kind.CONTINUOUS)])


def random_mixed(rng: np.random.Generator, n: int) -> Dataset:
    """Rows over MIXED_SCHEMA with a noisy-free label rule; values on a coarse grid."""
    rows = []
    for _ in range(n):
        u = float(rng.integers(0, 20)) / 2
        proto = str(rng.choice(["tcp", "udp", "icmp"]))
        v = float(rng.integers(0, 10))
        label = int((u > 4 and proto != "icmp") or v >= 8)
        rows.append(Observation((u, proto, v), label))
    # Duplicated feature vectors share a label by construction.
    return Dataset(MIXED_SCHEMA, tuple(rows))


# Acceptance results, filled by test_acceptance.py and printed by conftest.py.
ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


def record(criterion: int, title: str, checks: list[tuple[str, bool]]) -> bool:
    ok = all(passed for _, passed in checks)
    detail = "; ".join(f"{name}: {'ok' if passed else 'FAILED'}" for name, passed in checks)
    ACCEPTANCE[criterion] = (ok, title, detail)
    return ok

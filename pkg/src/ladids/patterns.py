"""Bounded-degree prime pattern enumeration.

Terms are grown breadth-first by degree. A candidate extends a surviving term
of the previous degree with one literal on a later column, and is only
considered if every sub-term obtained by dropping one of its earlier literals
also survived. A candidate that covers at least ``k`` still-uncovered target
rows and no opposite row becomes a pattern, and the target rows it covers are
removed from play. One that covers ``k`` or more target rows but also some
opposite row survives to seed the next degree.

Row sets are Python ints used as bitsets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .binarize import BinaryDataset
from .data import NEGATIVE, POSITIVE
from .errors import ConfigError, SupportSetError

DEFAULT_MAX_DEGREE = 4


@dataclass(frozen=True)
class Literal:
    id: int  # descriptor id (0-based; displayed as b<id+1>)
    negated: bool = False

    def __str__(self) -> str:
        return ("¬" if self.negated else "") + f"b{self.id + 1}"


@dataclass(frozen=True)
class Pattern:
    literals: tuple[Literal, ...]
    polarity: int
    support: int = 0

    @property
    def degree(self) -> int:
        return len(self.literals)

    def key(self) -> frozenset[Literal]:
        return frozenset(self.literals)

    def __str__(self) -> str:
        return " ".join(map(str, self.literals)) or "⊤"

    def to_json(self) -> dict:
        return {
            "literals": [[lit.id, lit.negated] for lit in self.literals],
            "polarity": self.polarity,
            "support": self.support,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Pattern":
        return cls(tuple(Literal(int(i), bool(n)) for i, n in doc["literals"]), int(doc["polarity"]), int(doc["support"]))


@dataclass
class PatternTrace:
    """Record of one enumeration run, for replay checks.

    ``survivors[d]`` maps each degree-d term kept for extension to its
    (target, opposite) coverage when it was evaluated. Terms are tuples of
    literals.
    """

    survivors: dict[int, dict[tuple[Literal, ...], tuple[int, int]]] = field(default_factory=dict)
    emitted: list[tuple[tuple[Literal, ...], int]] = field(default_factory=list)


def bitset(flags: Iterable[bool]) -> int:
    arr = flags.astype(bool, copy=False) if isinstance(flags, np.ndarray) else np.fromiter(flags, dtype=bool)
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _column_masks(bits: np.ndarray) -> list[tuple[int, int]]:
    full = (1 << bits.shape[0]) - 1
    masks = []
    for j in range(bits.shape[1]):
        ones = bitset(bits[:, j])
        masks.append((ones, full ^ ones))
    return masks


def generate_patterns(b: BinaryDataset, polarity: int = POSITIVE, k: int = 1,
                      max_degree: int = DEFAULT_MAX_DEGREE, trace: PatternTrace | None = None) -> list[Pattern]:
    """Patterns of ``polarity`` over the columns of ``b``, in emission order."""
    if k < 1:
        raise ConfigError(f"minimum support k must be at least 1, got {k}")
    if max_degree < 1:
        raise ConfigError(f"maximum degree must be at least 1, got {max_degree}")
    if polarity not in (POSITIVE, NEGATIVE):
        raise ConfigError(f"polarity must be {POSITIVE} or {NEGATIVE}")
    n = b.n_columns
    lit_masks = _column_masks(b.bits)  # (covers when literal is positive, when negated)
    ids = [b.column_id(j) for j in range(n)]
    remaining = bitset(b.labels == polarity)
    opposite = bitset(b.labels != polarity)

    def as_literals(term):
        return tuple(Literal(ids[j], neg) for j, neg in term)

    out: list[Pattern] = []
    prev: dict[tuple, int] = {(): (1 << b.n_rows) - 1}
    for d in range(1, max_degree + 1):
        current: dict[tuple, int] = {}
        for tau, tau_mask in prev.items():
            start = tau[-1][0] + 1 if tau else 0
            for s in range(start, n):
                for neg in (False, True):
                    cand = tau + ((s, neg),)
                    if d > 1 and any(cand[:i] + cand[i + 1:] not in prev for i in range(d - 1)):
                        continue
                    mask = tau_mask & lit_masks[s][neg]
                    covered = (mask & remaining).bit_count()
                    if covered < k:
                        continue
                    if not mask & opposite:
                        out.append(Pattern(as_literals(cand), polarity, covered))
                        remaining &= ~mask
                        if trace is not None:
                            trace.emitted.append((as_literals(cand), covered))
                    elif d < max_degree:
                        current[cand] = mask
                        if trace is not None:
                            trace.survivors.setdefault(d, {})[as_literals(cand)] = (
                                covered, (mask & opposite).bit_count())
        if not current or not remaining:
            break
        prev = current
    return out


def _resolve(p: Pattern, rows: BinaryDataset) -> list[tuple[int, bool]]:
    where = {rows.column_id(j): j for j in range(rows.n_columns)}
    try:
        return [(where[lit.id], lit.negated) for lit in p.literals]
    except KeyError as exc:
        raise SupportSetError(f"pattern {p} uses column b{exc.args[0] + 1}, which is not in the dataset") from None


def covers(p: Pattern, bits: np.ndarray, columns: Sequence[tuple[int, bool]]) -> np.ndarray:
    hit = np.ones(bits.shape[0], dtype=bool)
    for j, neg in columns:
        hit &= bits[:, j] != neg
    return hit


def coverage(p: Pattern, rows: BinaryDataset) -> tuple[int, set[int]]:
    """Number and indices of the rows of ``rows`` on which every literal of ``p`` holds."""
    hit = covers(p, rows.bits, _resolve(p, rows))
    idx = set(np.flatnonzero(hit).tolist())
    return len(idx), idx

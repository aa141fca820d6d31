"""Support-set selection by mutual-information greedy search.

Columns are added one at a time. Each round picks the column that leaves the
lowest class entropy over the partition of (deduplicated) rows induced by the
columns chosen so far. Ties go to fewer unresolved positive/negative row
pairs, then to the lowest column id. The search stops as soon as no block
of the partition mixes the two classes.
"""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy import sparse

from .binarize import BinaryDataset, conflicting_pairs
from .data import POSITIVE
from .errors import SupportSetError

log = logging.getLogger(__name__)

_CHUNK = 1024
_TOL = 1e-9


def _xlogx(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log2(np.where(x > 0, x, 1)), 0.0)


def _block_entropy(p: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Unnormalised class entropy (rows x bits) of blocks holding p positives and n negatives."""
    return _xlogx(p + n) - _xlogx(p) - _xlogx(n)


def _dedupe(bits: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    packed = np.packbits(bits, axis=1)
    keyed = np.concatenate([packed, labels[:, None].astype(np.uint8)], axis=1)
    _, first = np.unique(keyed, axis=0, return_index=True)
    first.sort()
    return bits[first], labels[first]


def select_support_set(b: BinaryDataset) -> tuple[int, ...]:
    """Column ids of a support set of ``b``, in selection order."""
    if conflicting_pairs(b.bits, b.labels):
        raise SupportSetError("positive and negative rows coincide; no support set exists")
    X, y = _dedupe(b.bits, b.labels)
    pos = y == POSITIVE
    if pos.all() or not pos.any():
        return ()
    group = np.zeros(len(y), dtype=np.int64)
    selected: list[int] = []
    while True:
        gp = np.bincount(group[pos])
        gn = np.bincount(group[~pos], minlength=len(gp))
        gp = np.pad(gp, (0, len(gn) - len(gp)))
        mixed = (gp > 0) & (gn > 0)
        if not mixed.any():
            break
        # Pure blocks stay pure under any split, so only mixed ones are scored.
        rows = np.flatnonzero(mixed[group])
        gid = np.unique(group[rows], return_inverse=True)[1]
        n_groups = int(gid.max()) + 1
        onehot = sparse.csr_matrix(
            (np.ones(len(rows)), (gid + np.where(pos[rows], 0, n_groups), np.arange(len(rows)))),
            shape=(2 * n_groups, len(rows)),
        )
        tot_p = gp[mixed].astype(float)[:, None]
        tot_n = gn[mixed].astype(float)[:, None]
        current_h = float(_block_entropy(tot_p, tot_n).sum())
        current_c = float((tot_p * tot_n).sum())

        ent = np.empty(b.n_columns)
        conf = np.empty(b.n_columns)
        Xm = X[rows]
        for start in range(0, b.n_columns, _CHUNK):
            counts = onehot @ Xm[:, start:start + _CHUNK].astype(np.float64)
            p1, n1 = counts[:n_groups], counts[n_groups:]
            p0, n0 = tot_p - p1, tot_n - n1
            ent[start:start + _CHUNK] = (_block_entropy(p1, n1) + _block_entropy(p0, n0)).sum(axis=0)
            conf[start:start + _CHUNK] = (p1 * n1 + p0 * n0).sum(axis=0)

        useful = (ent < current_h - _TOL) | (conf < current_c)
        if not useful.any():  # unreachable when the classes are separable
            raise SupportSetError("no column separates the remaining conflicting rows")
        best_h = ent[useful].min()
        ties = useful & (ent <= best_h + _TOL)
        best_c = conf[ties].min()
        col = int(np.flatnonzero(ties & (conf == best_c))[0])
        selected.append(col)
        log.debug("support set: picked %s (entropy %.6f, conflicts %d)", b.name(col), best_h / len(y), best_c)
        group = np.unique(group * 2 + X[:, col], return_inverse=True)[1]
    return tuple(b.column_id(j) for j in selected)


def project(b: BinaryDataset, s: Sequence[int]) -> BinaryDataset:
    """Restrict ``b`` to the columns ``s`` (original descriptor ids), in that order.

    Raises SupportSetError if an id is unknown or if the projection no longer
    keeps the classes apart.
    """
    ids = [b.column_id(j) for j in range(b.n_columns)]
    where = {cid: j for j, cid in enumerate(ids)}
    missing = [c for c in s if c not in where]
    if missing:
        raise SupportSetError(f"unknown column ids: {', '.join(f'b{c + 1}' for c in missing)}")
    cols = [where[c] for c in s]
    bits = b.bits[:, cols]
    if conflicting_pairs(bits, b.labels):
        names = ", ".join(f"b{c + 1}" for c in s) or "(no columns)"
        raise SupportSetError(f"projection onto {names} does not separate the classes")
    return BinaryDataset(
        tuple(b.descriptors[j] for j in cols), bits.copy(), b.labels.copy(),
        b.schema, b.cut_points, b.source_rows, tuple(s),
    )

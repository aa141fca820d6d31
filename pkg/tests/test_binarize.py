import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ladids.binarize import (Descriptor, PruneStatus, _interval_pairs, apply_binarization, binarize,
                             find_cut_points, prune_policy, transform)
from ladids.data import Dataset, FeatureSchema, Kind, Observation
from ladids.errors import ConfigError, ConflictError, DataError
from ladids.fixtures import worked_example

from _helpers import MIXED_SCHEMA, random_mixed


def cut_oracle(values, labels):
    """Midpoints between adjacent distinct values unless both sides are pure and of one class."""
    classes = {}
    for v, c in zip(values, labels):
        classes.setdefault(v, set()).add(c)
    vs = sorted(classes)
    out = []
    for lo, hi in zip(vs, vs[1:]):
        a, b = classes[lo], classes[hi]
        if not (len(a) == 1 and a == b):
            out.append((lo, hi))
    return out


def test_worked_example_cut_points():
    case = worked_example()
    b = binarize(case.dataset)
    got = {case.schema[f].name: list(fc.cuts) for f, fc in b.cut_points.features.items()}
    assert got == {"A": [3.05, 2.45, 1.65], "B": [2.95, 1.85], "C": [4.5, 3.3, 1.9]}


def test_worked_example_columns_by_header():
    # Every column of the reference matrix appears in ours with the same header and the same bits.
    case = worked_example()
    b = binarize(case.dataset)
    ref = np.array(case.expected["matrix"], dtype=bool)
    ours = {b.describe(j).replace("≥", ">=").replace("≤", "<="): b.bits[:, j] for j in range(b.n_columns)}
    assert b.n_columns == 15
    for j, header in enumerate(case.expected["columns"]):
        assert (ours[header] == ref[:, j]).all(), header


def test_mixed_value_is_cut_off_on_both_sides():
    # 2.0 occurs in both classes, so it is separated from its pure neighbours.
    pts = [(1.0, 1), (2.0, 1), (2.0, 0), (3.0, 1)]
    assert find_cut_points(pts) == [2.5, 1.5]
    assert find_cut_points([(1.0, 1), (2.0, 1)]) == []
    assert find_cut_points([(5.0, 0)] * 3) == []


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 1)), min_size=1, max_size=60))
def test_cut_points_match_oracle(pts):
    vals = [v / 4 for v, _ in pts]
    labs = [c for _, c in pts]
    got = find_cut_points(zip(vals, labs))
    assert got == sorted(got, reverse=True)
    expected = [(lo + hi) / 2 for lo, hi in cut_oracle(vals, labs)]
    assert sorted(got) == pytest.approx(expected, abs=0, rel=1e-15)
    for lo, hi in cut_oracle(vals, labs):
        assert any(lo < c < hi for c in got)


def test_midpoint_is_decimal_exact():
    assert find_cut_points([(2.3, 0), (2.6, 1)]) == [2.45]
    assert find_cut_points([(0.1, 0), (0.2, 1)]) == [0.15]


@pytest.mark.parametrize("count, status", [
    (0, PruneStatus.KEPT), (74, PruneStatus.KEPT), (75, PruneStatus.LEVEL_ONLY),
    (174, PruneStatus.LEVEL_ONLY), (175, PruneStatus.IGNORED), (500, PruneStatus.IGNORED),
])
def test_prune_policy_boundaries(count, status):
    assert prune_policy(count) is status


@pytest.mark.parametrize("full, partial", [(75, 175), (10, 10), (10, 0)])
def test_prune_thresholds_validated(full, partial):
    with pytest.raises(ConfigError):
        prune_policy(1, full, partial)


def alternating_feature(n_cuts):
    schema = FeatureSchema.build([("x", Kind.CONTINUOUS), ("s", Kind.SYMBOLIC)])
    rows = tuple(Observation((float(i), "a"), i % 2) for i in range(n_cuts + 1))
    return Dataset(schema, rows)


@pytest.mark.parametrize("n_cuts, full, partial, expected", [
    (10, 175, 75, 10 + 45),
    (100, 175, 75, 100),
    (100, 200, 150, 5050),
])
def test_variable_counts_follow_pruning(n_cuts, full, partial, expected):
    b = binarize(alternating_feature(n_cuts), full, partial)
    assert len(b.cut_points.features[1].cuts) == n_cuts
    assert sum(d.feature == 1 for d in b.descriptors) == expected
    assert sum(d.feature == 2 for d in b.descriptors) == 1


def test_interval_pairs_cover_every_pair_once():
    cuts = [9.0, 7.0, 4.0, 1.0]
    pairs = _interval_pairs(cuts)
    assert sorted(pairs) == sorted((lo, hi) for hi, lo in itertools.combinations(cuts, 2))
    assert pairs[0] == (1.0, 9.0) and pairs[-1] == (7.0, 9.0)


def test_symbolic_indicators_and_unseen_tokens():
    rng = np.random.default_rng(0)
    d = random_mixed(rng, 80)
    b = binarize(d)
    nominals = [x for x in b.descriptors if x.kind == "nominal"]
    assert [x.value for x in nominals] == sorted({o.values[1] for o in d})
    row = apply_binarization(Observation((3.0, "gre", 1.0)), [x for x in b.descriptors if x.feature == 2])
    assert not row.any()


def test_source_conflicts_error_or_drop():
    schema = FeatureSchema.build([("x", Kind.CONTINUOUS)])
    d = Dataset(schema, tuple(Observation((v,), c) for v, c in [(1.0, 1), (1.0, 0), (2.0, 1), (3.0, 0)]))
    with pytest.raises(ConflictError) as exc:
        binarize(d)
    assert exc.value.pairs == [(0, 1)]
    b = binarize(d, conflicts="drop")
    assert list(b.source_rows) == [2, 3]


def test_collision_after_pruning_is_detected():
    # Feature 1 separates rows 0 and 1 but has too many cut-points and is ignored.
    schema = FeatureSchema.build([("x", Kind.CONTINUOUS), ("y", Kind.CONTINUOUS)])
    rows = tuple(Observation((float(i), 0.0), i % 2) for i in range(12))
    d = Dataset(schema, rows)
    with pytest.raises(ConflictError):
        binarize(d, full_threshold=5, partial_threshold=2)
    with pytest.raises(DataError, match="no rows left"):
        binarize(d, full_threshold=5, partial_threshold=2, conflicts="drop")


def test_ignored_feature_contributes_no_variables():
    d = alternating_feature(200)
    rows = tuple(Observation((o.values[0], "a" if o.label else "b"), o.label) for o in d)
    b = binarize(Dataset(d.schema, rows))
    assert b.cut_points.features[1].status is PruneStatus.IGNORED
    assert [x.feature for x in b.descriptors] == [2, 2]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_transform_agrees_with_descriptor_predicates(seed):
    rng = np.random.default_rng(seed)
    d = random_mixed(rng, 40)
    b = binarize(d)
    fresh = random_mixed(rng, 25)
    bulk = transform(fresh, MIXED_SCHEMA, b.descriptors)
    for i, obs in enumerate(fresh):
        assert (bulk[i] == apply_binarization(obs, b.descriptors)).all()


def test_descriptor_json_and_text():
    for d in (Descriptor(3, "level", lo=2.45), Descriptor(3, "interval", lo=1.9, hi=3.3), Descriptor(2, "nominal", value="tcp")):
        assert Descriptor.from_json(d.to_json()) == d
    assert Descriptor(1, "interval", lo=3.3, hi=4.5).describe("C") == "3.3 ≤ C < 4.5"
    with pytest.raises(ValueError):
        Descriptor(1, "interval", lo=2.0, hi=1.0)

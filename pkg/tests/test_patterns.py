import numpy as np
import pytest

from ladids.binarize import binarize
from ladids.data import NEGATIVE, POSITIVE
from ladids.errors import ConfigError, SupportSetError
from ladids.fixtures import worked_example
from ladids.patterns import Literal, Pattern, PatternTrace, bitset, coverage, generate_patterns, members
from ladids.support import project

from _helpers import binary, random_separable, term_cover


def reference_enumeration(bits, labels, polarity, k, max_degree):
    """Set-based restatement of the breadth-first enumeration, used as an oracle."""
    n = bits.shape[1]
    target = {i for i in range(len(labels)) if labels[i] == polarity}
    opposite = {i for i in range(len(labels)) if labels[i] != polarity}

    def cov(term):
        return {i for i in range(len(labels)) if all(bits[i, j] != neg for j, neg in term)}

    out = []
    prev = [()]
    for d in range(1, max_degree + 1):
        cur = []
        for tau in prev:
            for s in range(tau[-1][0] + 1 if tau else 0, n):
                for neg in (False, True):
                    cand = tau + ((s, neg),)
                    if d > 1 and any(cand[:i] + cand[i + 1:] not in prev for i in range(d - 1)):
                        continue
                    c = cov(cand)
                    if len(c & target) < k:
                        continue
                    if not c & opposite:
                        out.append((cand, len(c & target)))
                        target -= c
                    elif d < max_degree:
                        cur.append(cand)
        if not cur or not target:
            break
        prev = cur
    return out


def as_terms(patterns):
    return [(tuple((lit.id, lit.negated) for lit in p.literals), p.support) for p in patterns]


def test_worked_example_with_reference_support_set():
    b = binarize(worked_example().dataset)
    pb = project(b, [1, 7, 0, 14])  # b2, b8, b1, b15
    pos = generate_patterns(pb, POSITIVE, k=1, max_degree=4)
    neg = generate_patterns(pb, NEGATIVE, k=1, max_degree=4)
    assert [str(p) for p in pos] == ["b2 b8", "b2 ¬b1", "¬b2 b15"]
    assert {p.key() for p in neg} == {frozenset({Literal(1, True), Literal(14, True)}),
                                      frozenset({Literal(1), Literal(14)})}
    assert [p.support for p in pos] == [1, 1, 1]


def test_worked_example_printed_support_order():
    # Iterating in the printed order b15, b8, b1, b2 gives a different, equally valid pattern family.
    b = binarize(worked_example().dataset)
    pb = project(b, [14, 7, 0, 1])
    assert [str(p) for p in generate_patterns(pb, POSITIVE, 1, 4)] == ["b15 b8", "¬b15 ¬b8", "¬b15 b1"]


@pytest.mark.parametrize("seed", range(60))
@pytest.mark.parametrize("k, max_degree", [(1, 4), (2, 3), (3, 2)])
def test_matches_reference_enumeration(seed, k, max_degree):
    rng = np.random.default_rng(seed)
    b = random_separable(rng, max_cols=8, max_rows=40)
    for polarity in (POSITIVE, NEGATIVE):
        got = generate_patterns(b, polarity, k, max_degree)
        assert as_terms(got) == reference_enumeration(b.bits, b.labels, polarity, k, max_degree)


def test_degree_one_pattern():
    b = binary([[1, 0], [1, 1], [0, 1], [0, 0]], [1, 1, 0, 0])
    assert [str(p) for p in generate_patterns(b, POSITIVE)] == ["b1"]
    assert [str(p) for p in generate_patterns(b, NEGATIVE)] == ["¬b1"]


def test_xor_needs_degree_two():
    b = binary([[0, 0], [1, 1], [0, 1], [1, 0]], [1, 1, 0, 0])
    assert generate_patterns(b, POSITIVE, 1, 1) == []
    assert [str(p) for p in generate_patterns(b, POSITIVE, 1, 2)] == ["b1 b2", "¬b1 ¬b2"]


def test_support_threshold_filters_small_patterns():
    b = binary([[1, 0], [1, 0], [0, 1], [0, 0]], [1, 1, 1, 0])
    assert {str(p) for p in generate_patterns(b, POSITIVE, k=1)} == {"b1", "b2"}
    assert [str(p) for p in generate_patterns(b, POSITIVE, k=2)] == ["b1"]
    assert generate_patterns(b, POSITIVE, k=4) == []


def test_trace_records_survivors_and_emissions():
    b = binary([[0, 0], [1, 1], [0, 1], [1, 0]], [1, 1, 0, 0])
    trace = PatternTrace()
    out = generate_patterns(b, POSITIVE, 1, 2, trace)
    assert set(trace.survivors[1]) == {(Literal(0),), (Literal(0, True),), (Literal(1),), (Literal(1, True),)}
    assert all(opp > 0 for _, opp in trace.survivors[1].values())
    assert [lits for lits, _ in trace.emitted] == [p.literals for p in out]


@pytest.mark.parametrize("kwargs", [dict(k=0), dict(max_degree=0), dict(polarity=2)])
def test_bad_parameters(kwargs):
    b = binary([[1], [0]], [1, 0])
    with pytest.raises(ConfigError):
        generate_patterns(b, **kwargs)


def test_coverage_resolves_ids_and_rejects_unknown():
    b = binarize(worked_example().dataset)
    pb = project(b, [1, 7, 0, 14])
    n, rows = coverage(Pattern((Literal(1), Literal(7)), POSITIVE), pb)
    assert (n, rows) == (1, {0})
    assert rows == set(np.flatnonzero(term_cover(b.bits, [(1, False), (7, False)])))
    with pytest.raises(SupportSetError):
        coverage(Pattern((Literal(3),), POSITIVE), pb)


def test_pattern_json_round_trip():
    p = Pattern((Literal(4), Literal(9, True)), NEGATIVE, 12)
    assert Pattern.from_json(p.to_json()) == p
    assert str(p) == "b5 ¬b10" and p.degree == 2


def test_bitset_helpers():
    assert bitset([True, False, True]) == 0b101
    assert bitset(np.array([False] * 9 + [True])) == 1 << 9
    assert members(0b10110) == [1, 2, 4]

"""Readable rules compiled from patterns, and the three ways to apply them.

* ``simple``: the first positive rule that fires gives class 1, otherwise the
  default class (0, attack).
* ``balance``: sign of the balance score, the share of positive patterns that
  fire minus the share of negative patterns that fire. A zero score abstains.
* ``thresholded``: like ``balance`` but abstains for every score in the closed
  band [tau0, tau1].

Abstention is returned as ``None``. Scores are exact fractions, so the zero
branch does not depend on float rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .binarize import Descriptor
from .data import NEGATIVE, POSITIVE, FeatureSchema, Observation
from .errors import ConfigError, ModelError
from .patterns import Pattern

MODES = ("simple", "balance", "thresholded")
DEFAULT_TAU0 = -0.021
DEFAULT_TAU1 = 0.24
UNCLASSIFIED = None


@dataclass(frozen=True)
class Conjunct:
    descriptor: Descriptor
    negated: bool = False

    def holds(self, obs: Observation) -> bool:
        return self.descriptor.holds(obs.values[self.descriptor.feature - 1]) != self.negated

    def describe(self, schema: FeatureSchema | None = None) -> str:
        f = self.descriptor.feature
        text = self.descriptor.describe(schema[f].name if schema else f"obs({f})")
        return f"¬({text})" if self.negated else f"({text})"

    def to_json(self) -> dict:
        return {**self.descriptor.to_json(), "negated": self.negated}

    @classmethod
    def from_json(cls, doc: dict) -> "Conjunct":
        return cls(Descriptor.from_json(doc), bool(doc["negated"]))


@dataclass(frozen=True)
class Rule:
    conjuncts: tuple[Conjunct, ...]
    consequent: int

    def fires(self, obs: Observation) -> bool:
        return all(c.holds(obs) for c in self.conjuncts)

    def describe(self, schema: FeatureSchema | None = None) -> str:
        body = " ∧ ".join(c.describe(schema) for c in self.conjuncts) or "⊤"
        return f"{body} ⇒ L={self.consequent}"

    def to_json(self) -> dict:
        return {"conjuncts": [c.to_json() for c in self.conjuncts], "consequent": self.consequent}

    @classmethod
    def from_json(cls, doc: dict) -> "Rule":
        return cls(tuple(Conjunct.from_json(c) for c in doc["conjuncts"]), int(doc["consequent"]))


@dataclass(frozen=True)
class RuleSet:
    positive: tuple[Rule, ...] = ()
    negative: tuple[Rule, ...] = ()
    mode: str = "simple"
    tau0: float = DEFAULT_TAU0
    tau1: float = DEFAULT_TAU1
    default_class: int = NEGATIVE

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown classifier mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.tau0 > self.tau1:
            raise ConfigError(f"thresholds out of order: tau0={self.tau0} > tau1={self.tau1}")

    def with_mode(self, mode: str, tau0: float | None = None, tau1: float | None = None) -> "RuleSet":
        return RuleSet(self.positive, self.negative, mode,
                       self.tau0 if tau0 is None else tau0, self.tau1 if tau1 is None else tau1, self.default_class)

    def classify(self, obs: Observation) -> int | None:
        if self.mode == "simple":
            return classify_simple(self, obs)
        if self.mode == "balance":
            return classify_balance(self, obs)
        return classify_thresholded(self, obs)

    def describe(self, schema: FeatureSchema | None = None) -> str:
        if self.mode == "simple":
            lines = [f"{'elif' if i else 'if'} {r.describe(schema)}" for i, r in enumerate(self.positive)]
            lines.append(f"else L={self.default_class}")
            return "\n".join(lines)
        lines = [f"mode={self.mode} tau0={self.tau0} tau1={self.tau1}" if self.mode == "thresholded"
                 else f"mode={self.mode}"]
        for word, rules in (("positive", self.positive), ("negative", self.negative)):
            lines.append(f"{word} rules ({len(rules)}):")
            lines.extend(f"  {r.describe(schema)}" for r in rules)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "tau0": self.tau0,
            "tau1": self.tau1,
            "default_class": self.default_class,
            "positive": [r.to_json() for r in self.positive],
            "negative": [r.to_json() for r in self.negative],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RuleSet":
        return cls(
            tuple(Rule.from_json(r) for r in doc["positive"]),
            tuple(Rule.from_json(r) for r in doc["negative"]),
            doc["mode"], float(doc["tau0"]), float(doc["tau1"]), int(doc["default_class"]),
        )


def compile_rule(p: Pattern, descriptors: Sequence[Descriptor]) -> Rule:
    try:
        conj = tuple(Conjunct(descriptors[lit.id], lit.negated) for lit in p.literals)
    except IndexError:
        raise ModelError(f"pattern {p} refers to a descriptor outside the table of {len(descriptors)}") from None
    return Rule(conj, p.polarity)


def compile_rules(patterns: Iterable[Pattern], descriptors: Sequence[Descriptor], mode: str = "simple",
                  tau0: float = DEFAULT_TAU0, tau1: float = DEFAULT_TAU1) -> RuleSet:
    """Translate patterns into rules over the original features, keeping their order."""
    pos, neg = [], []
    for p in patterns:
        (pos if p.polarity == POSITIVE else neg).append(compile_rule(p, descriptors))
    return RuleSet(tuple(pos), tuple(neg), mode, tau0, tau1)


def classify_simple(rs: RuleSet, obs: Observation) -> int:
    for rule in rs.positive:
        if rule.fires(obs):
            return POSITIVE
    return rs.default_class


def balance_from_counts(pos_fired: int, q: int, neg_fired: int, r: int) -> Fraction:
    if q < 1 or r < 1:
        raise ConfigError(f"balance score needs both pattern families, got {q} positive and {r} negative")
    return Fraction(pos_fired, q) - Fraction(neg_fired, r)


def balance_score(rs: RuleSet, obs: Observation) -> Fraction:
    return balance_from_counts(sum(r.fires(obs) for r in rs.positive), len(rs.positive),
                               sum(r.fires(obs) for r in rs.negative), len(rs.negative))


def _decimal(t: float | Fraction) -> Fraction | float:
    # 0.24 means the decimal 0.24, not the nearest binary double just below it.
    if isinstance(t, Fraction) or not math.isfinite(t):
        return t
    return Fraction(repr(float(t)))


def decide(delta: Fraction, tau0: float = 0.0, tau1: float = 0.0) -> int | None:
    """Class for a balance score: 1 above tau1, 0 below tau0, None in between."""
    if delta > _decimal(tau1):
        return POSITIVE
    if delta < _decimal(tau0):
        return NEGATIVE
    return UNCLASSIFIED


def classify_balance(rs: RuleSet, obs: Observation) -> int | None:
    return decide(balance_score(rs, obs))


def classify_thresholded(rs: RuleSet, obs: Observation) -> int | None:
    return decide(balance_score(rs, obs), rs.tau0, rs.tau1)


EPSILON_POLICIES = ("attack", "normal", "unclassified")


def resolve(verdict: int | None, policy: str = "attack") -> int | None:
    """Map an abstention to a class for online use."""
    if verdict is not UNCLASSIFIED:
        return verdict
    if policy == "attack":
        return NEGATIVE
    if policy == "normal":
        return POSITIVE
    if policy == "unclassified":
        return UNCLASSIFIED
    raise ConfigError(f"unknown epsilon policy {policy!r}")

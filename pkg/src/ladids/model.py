"""The trained model and its JSON rule file.

The rule file is the only thing the online phase needs: it carries the
feature schema, the cut-point and descriptor tables, the support set, the
patterns and the compiled rules. Floats are written with ``repr`` so they
round-trip exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .binarize import CutPointTable, Descriptor
from .data import NEGATIVE, POSITIVE, FeatureSchema, Observation
from .errors import ModelError
from .patterns import Pattern
from .rules import RuleSet, balance_score

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LadModel:
    schema: FeatureSchema
    cut_points: CutPointTable
    descriptors: tuple[Descriptor, ...]
    support_set: tuple[int, ...]
    patterns: tuple[Pattern, ...]
    rules: RuleSet
    k: int
    max_degree: int

    @property
    def positive_patterns(self) -> tuple[Pattern, ...]:
        return tuple(p for p in self.patterns if p.polarity == POSITIVE)

    @property
    def negative_patterns(self) -> tuple[Pattern, ...]:
        return tuple(p for p in self.patterns if p.polarity == NEGATIVE)

    def classify(self, obs: Observation) -> int | None:
        return self.rules.classify(obs)

    def balance(self, obs: Observation) -> Fraction:
        return balance_score(self.rules, obs)

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "schema": self.schema.to_json(),
            "k": self.k,
            "max_degree": self.max_degree,
            "cut_points": self.cut_points.to_json(),
            "descriptors": [d.to_json() for d in self.descriptors],
            "support_set": list(self.support_set),
            "patterns": [p.to_json() for p in self.patterns],
            "rules": self.rules.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LadModel":
        if doc.get("format_version") != FORMAT_VERSION:
            raise ModelError(f"unsupported model format version {doc.get('format_version')!r}")
        try:
            model = cls(
                FeatureSchema.from_json(doc["schema"]),
                CutPointTable.from_json(doc["cut_points"]),
                tuple(Descriptor.from_json(d) for d in doc["descriptors"]),
                tuple(int(i) for i in doc["support_set"]),
                tuple(Pattern.from_json(p) for p in doc["patterns"]),
                RuleSet.from_json(doc["rules"]),
                int(doc["k"]),
                int(doc["max_degree"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed model document: {exc}") from exc
        model.validate()
        return model

    def validate(self) -> None:
        n_feat = len(self.schema)
        n_desc = len(self.descriptors)
        for d in self.descriptors:
            if not 1 <= d.feature <= n_feat:
                raise ModelError(f"descriptor refers to feature {d.feature}, schema has {n_feat}")
        for i in self.support_set:
            if not 0 <= i < n_desc:
                raise ModelError(f"support set refers to b{i + 1}, table has {n_desc} descriptors")
        for p in self.patterns:
            for lit in p.literals:
                if lit.id not in self.support_set:
                    raise ModelError(f"pattern {p} uses b{lit.id + 1}, which is outside the support set")
        for rule in self.rules.positive + self.rules.negative:
            for c in rule.conjuncts:
                if not 1 <= c.descriptor.feature <= n_feat:
                    raise ModelError(f"rule refers to feature {c.descriptor.feature}, schema has {n_feat}")

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1, ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "LadModel":
        path = Path(path)
        if not path.is_file():
            raise ModelError(f"model file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON: {exc}") from exc
        return cls.from_json(doc)

"""JSON serialization of compressed rules.

A rule file is self-contained: together with the source geometry it carries
everything needed to rebuild the basis, recompute the moments and re-check
``V^t w = m``.  Floats are written with ``repr`` precision and round-trip
bitwise.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cheb import BoxDomain, ChebBasis
from .compress import SignedRule

SCHEMA_VERSION = 1
ORDERING = "graded-lex"
NORMALIZATION = "product-chebyshev-mass-pi^d"


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RuleFile:
    dim: int
    ade: int
    box: BoxDomain
    nodes: np.ndarray
    weights: np.ndarray
    moments: np.ndarray
    diagnostics: dict
    provenance: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_rule(cls, rule: SignedRule, provenance: dict | None = None) -> "RuleFile":
        diagnostics = {
            "moment_residual": rule.moment_residual,
            "stability": rule.stability,
            "onenorm": rule.onenorm,
            "moment_norm": rule.moments.norm(),
            "cardinality": len(rule),
            "weight_sum": float(np.sum(rule.weights)),
        }
        return cls(
            rule.basis.dim,
            rule.ade,
            rule.box,
            np.array(rule.nodes),
            np.array(rule.weights),
            np.array(rule.moments.values),
            diagnostics,
            dict(provenance or {}),
        )

    @property
    def basis(self) -> ChebBasis:
        return ChebBasis(self.box, self.ade)

    def integrate(self, f) -> float:
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "dimension": self.dim,
            "ade": self.ade,
            "basis": {"box": self.box.to_dict(), "ordering": ORDERING, "normalization": NORMALIZATION},
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
            "moments": self.moments.tolist(),
            "diagnostics": self.diagnostics,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RuleFile":
        try:
            version = int(data["schema_version"])
            if version != SCHEMA_VERSION:
                raise ValueError(f"unsupported rule schema version {version}")
            if data["basis"].get("ordering", ORDERING) != ORDERING:
                raise ValueError(f"unsupported basis ordering {data['basis']['ordering']!r}")
            dim = int(data["dimension"])
            nodes = np.array(data["nodes"], dtype=float).reshape(-1, dim)
            weights = np.array(data["weights"], dtype=float)
            if len(nodes) != len(weights):
                raise ValueError("node and weight counts differ")
            return cls(
                dim,
                int(data["ade"]),
                BoxDomain.from_dict(data["basis"]["box"]),
                nodes,
                weights,
                np.array(data["moments"], dtype=float),
                dict(data["diagnostics"]),
                dict(data.get("provenance", {})),
                version,
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed rule file: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "RuleFile":
        return cls.from_dict(json.loads(text))

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path) -> "RuleFile":
        return cls.loads(Path(path).read_text())

    def moment_residual(self, moments=None) -> float:
        """``max |V^t w - m|`` against ``moments`` (default: the stored ones)."""
        m = self.moments if moments is None else np.asarray(moments, dtype=float)
        V = self.basis.vandermonde(self.nodes)
        return float(np.max(np.abs(V.T @ self.weights - m)))

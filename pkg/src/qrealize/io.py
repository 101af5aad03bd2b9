"""JSON ingestion of systems and serialization of analysis reports.

One self-describing format covers both directions: real matrices are
nested row-major arrays of finite doubles, complex matrices are nested
arrays of [re, im] pairs. Report serialization is deterministic (sorted
keys, fixed indentation, trailing newline) so re-runs with the same seed
and tolerances produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import ParseError
from .linalg import DEFAULT_POLICY, TolerancePolicy

__all__ = [
    "SystemDocument",
    "parse_system_document",
    "parse_system",
    "parse_realization",
    "serialize_system",
    "report_document",
    "serialize_report",
]

_TOLERANCE_KEYS = ("rank_rel_tol", "residual_tol", "symmetry_tol")


@dataclass(frozen=True)
class SystemDocument:
    """Parsed input file: the system plus optional overrides.

    ``tolerances`` holds only the keys the file actually set; resolution
    against defaults and command line flags happens in resolve_policy.
    """

    system: "LtiSystem"
    tolerances: dict
    seed: int | None

    def resolve_policy(self, rank_tol=None, residual_tol=None) -> TolerancePolicy:
        """Effective policy: flag over document over default, per key."""
        values = {key: getattr(DEFAULT_POLICY, key) for key in _TOLERANCE_KEYS}
        values.update(self.tolerances)
        if rank_tol is not None:
            values["rank_rel_tol"] = rank_tol
        if residual_tol is not None:
            values["residual_tol"] = residual_tol
        try:
            return TolerancePolicy(**values)
        except ValueError as exc:
            raise ParseError(f"invalid tolerance override: {exc}") from exc

    def resolve_seed(self, seed=None) -> int:
        if seed is not None:
            return int(seed)
        if self.seed is not None:
            return self.seed
        return 0


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _parse_matrix(name: str, node) -> np.ndarray:
    """Nested-list matrix with row/column context on every complaint."""
    if not isinstance(node, list) or not node:
        raise ParseError(f"{name} must be a non-empty array of rows")
    width = None
    for i, row in enumerate(node):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{name} row {i} must be a non-empty array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{name} row {i} has {len(row)} entries, expected {width}")
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ParseError(f"{name} entry at row {i}, column {j} is not a number")
            if not math.isfinite(entry):
                raise ParseError(f"{name} entry at row {i}, column {j} is not finite")
    return np.array(node, dtype=float)


def parse_system_document(text: str) -> SystemDocument:
    """Parse and validate a system file into a SystemDocument."""
    from .realizability import LtiSystem

    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be a JSON object")
    for key in ("A", "B", "C"):
        if key not in doc:
            raise ParseError(f"missing required matrix {key!r}")
    a = _parse_matrix("A", doc["A"])
    b = _parse_matrix("B", doc["B"])
    c = _parse_matrix("C", doc["C"])
    system = LtiSystem.from_matrices(a, b, c)

    raw_tols = doc.get("tolerances", {})
    if not isinstance(raw_tols, dict):
        raise ParseError("tolerances must be a JSON object")
    unknown = sorted(set(raw_tols) - set(_TOLERANCE_KEYS))
    if unknown:
        raise ParseError(f"unknown tolerance keys: {', '.join(unknown)}")
    tolerances = {}
    for key, value in raw_tols.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"tolerance {key} must be a number")
        if not math.isfinite(value) or value <= 0:
            raise ParseError(f"tolerance {key} must be finite and positive, got {value}")
        tolerances[key] = float(value)

    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ParseError(f"seed must be an integer, got {seed!r}")
    return SystemDocument(system=system, tolerances=tolerances, seed=seed)


def parse_system(text: str):
    """Parse a system file, returning just the validated LtiSystem."""
    return parse_system_document(text).system


def parse_realization(text: str):
    """Extract (B1, D1) from a realization file.

    Accepts either a bare object with "B1" and "D1" keys or a full report
    document as written by serialize_report (which nests them under
    "realization").
    """
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be a JSON object")
    node = doc.get("realization", doc)
    if not isinstance(node, dict):
        raise ParseError("realization must be a JSON object")
    for key in ("B1", "D1"):
        if key not in node:
            raise ParseError(f"missing required matrix {key!r}")
    return _parse_matrix("B1", node["B1"]), _parse_matrix("D1", node["D1"])


def _real_lists(m) -> list:
    return [[float(x) for x in row] for row in np.atleast_2d(np.asarray(m))]


def _complex_pairs(m) -> list:
    return [
        [[float(x.real), float(x.imag)] for x in row]
        for row in np.atleast_2d(np.asarray(m, dtype=complex))
    ]


def serialize_system(sys, tolerances=None, seed=None) -> str:
    """Render a system (plus optional overrides) back to file form."""
    doc = {"A": _real_lists(sys.A), "B": _real_lists(sys.B), "C": _real_lists(sys.C)}
    if tolerances:
        doc["tolerances"] = {key: float(tolerances[key]) for key in tolerances}
    if seed is not None:
        doc["seed"] = int(seed)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_document(
    sys,
    skew,
    r: int,
    n_v: int,
    multiplicity_count: int,
    realization,
    residuals,
    certificate,
    policy: TolerancePolicy,
    seed: int,
) -> dict:
    """Assemble the full report as plain JSON-ready data.

    Residual values go in exactly as computed (shortest round-trip float
    encoding), so nothing is lost to formatting.
    """
    doc = {
        "version": __version__,
        "seed": int(seed),
        "tolerances": {key: float(getattr(policy, key)) for key in _TOLERANCE_KEYS},
        "system": {
            "A": _real_lists(sys.A),
            "B": _real_lists(sys.B),
            "C": _real_lists(sys.C),
            "n": int(sys.n),
            "n_u": int(sys.n_u),
            "n_y": int(sys.n_y),
        },
        "analysis": {
            "S_tilde": _real_lists(skew.S_tilde),
            "eigenvalues_of_S": [float(x) for x in skew.eigenvalues],
            "r": int(r),
            "n_v": int(n_v),
            "multiplicity_noise_count": int(multiplicity_count),
        },
        "residuals": [
            {
                "name": e.name,
                "absolute": float(e.absolute),
                "scale": float(e.scale),
                "relative": float(e.relative),
                "tol": float(e.tol),
                "passed": bool(e.passed),
            }
            for e in residuals
        ],
        "all_passed": bool(all(e.passed for e in residuals)),
    }
    if realization is not None:
        doc["realization"] = {
            "R": _real_lists(realization.R),
            "Lambda": _complex_pairs(realization.Lambda),
            "B1": _real_lists(realization.B1),
            "D1": _real_lists(realization.D1),
            "n_v": int(realization.n_v),
        }
    if certificate is not None:
        doc["certificate"] = {
            "r": int(certificate.r),
            "trials": int(certificate.trials),
            "min_observed_rank": int(certificate.min_observed_rank),
            "lower_bound_held": bool(certificate.lower_bound_held),
            "embedding_agreed": bool(certificate.embedding_agreed),
        }
    return doc


def serialize_report(doc: dict) -> str:
    """Deterministic text form of a report document."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

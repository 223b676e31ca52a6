"""Exact eigenvalue staircases and interlacing validation.

A staircase is the data of a point of a Gelfand-Zeitlin polytope: one row of
eigenvalues per level k = alpha..n+1.  Unitary rows have k entries and are
weakly decreasing.  Orthogonal rows have floor(k/2) entries; odd rows end
with a nonnegative entry and even rows may end with a negative one (only its
absolute value enters the inequalities, the sign is face metadata).

Everything is exact: entries are `fractions.Fraction`, so equality of entries
(which determines the pattern, i.e. the face of the polytope) is decidable.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction

UNITARY = "unitary"
ORTHOGONAL = "orthogonal"

_RATIONAL_RE = re.compile(r"^-?\d+(?:/[1-9]\d*)?$")


class StaircaseError(ValueError):
    """Base class for staircase input errors."""


class SchemaError(StaircaseError):
    """Document does not match the staircase JSON schema."""


class StructureError(StaircaseError):
    """Rows present but structurally wrong (lengths, flavor)."""


def half(k: int) -> int:
    """Number of staircase entries in orthogonal row k, written [k] = floor(k/2)."""
    return k // 2


@dataclass(frozen=True)
class Violation:
    """One violated inequality, located at row k, position j.

    Kinds: ``row_order`` (within-row order), ``row_abs`` (even orthogonal row
    tail vs |last|), ``nonneg`` (odd orthogonal row tail), ``upper`` /
    ``lower`` (interlacing against row k+1), ``upper_abs`` / ``lower_abs``
    (the absolute-value slots of the orthogonal chains).
    """

    k: int
    j: int
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"k": self.k, "j": self.j, "kind": self.kind, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


@dataclass(frozen=True)
class Staircase:
    """Rows of eigenvalues, bottom row first (rows[0] is row alpha)."""

    flavor: str
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def alpha(self) -> int:
        return 1 if self.flavor == UNITARY else 2

    @property
    def top(self) -> int:
        """Index n+1 of the top row."""
        return self.alpha + len(self.rows) - 1

    @property
    def n(self) -> int:
        return self.top - 1

    def row(self, k: int) -> tuple[Fraction, ...]:
        if not self.alpha <= k <= self.top:
            raise IndexError(f"row {k} outside {self.alpha}..{self.top}")
        return self.rows[k - self.alpha]

    def shifted(self, c: Fraction) -> "Staircase":
        return Staircase(self.flavor, tuple(tuple(x + c for x in row) for row in self.rows))

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "rows": [[str(x) for x in row] for row in self.rows]}


def _check_structure(s: Staircase) -> None:
    if s.flavor not in (UNITARY, ORTHOGONAL):
        raise StructureError(f"unknown flavor {s.flavor!r}")
    if not s.rows:
        raise StructureError("staircase has no rows")
    for i, row in enumerate(s.rows):
        k = s.alpha + i
        want = k if s.flavor == UNITARY else half(k)
        if len(row) != want:
            raise StructureError(f"row {k} has {len(row)} entries, expected {want}")


def _validate_unitary(s: Staircase) -> list[Violation]:
    bad = []
    for i, row in enumerate(s.rows):
        k = s.alpha + i
        for j in range(len(row) - 1):
            if not row[j] >= row[j + 1]:
                bad.append(Violation(k, j + 1, "row_order", f"{row[j]} < {row[j + 1]}"))
    for k in range(s.alpha, s.top):
        lo, hi = s.row(k), s.row(k + 1)
        for j in range(1, k + 1):
            if not hi[j - 1] >= lo[j - 1]:
                bad.append(Violation(k, j, "upper", f"{hi[j - 1]} < {lo[j - 1]}"))
            if not lo[j - 1] >= hi[j]:
                bad.append(Violation(k, j, "lower", f"{lo[j - 1]} < {hi[j]}"))
    return bad


def _validate_orthogonal(s: Staircase) -> list[Violation]:
    bad = []
    for i, row in enumerate(s.rows):
        k = s.alpha + i
        m = len(row)
        for j in range(m - 2):
            if not row[j] >= row[j + 1]:
                bad.append(Violation(k, j + 1, "row_order", f"{row[j]} < {row[j + 1]}"))
        if k % 2 == 0:
            # even row: lambda_{m-1} >= |lambda_m|
            if m >= 2 and not row[m - 2] >= abs(row[m - 1]):
                bad.append(Violation(k, m - 1, "row_abs", f"{row[m - 2]} < |{row[m - 1]}|"))
        else:
            if m >= 2 and not row[m - 2] >= row[m - 1]:
                bad.append(Violation(k, m - 1, "row_order", f"{row[m - 2]} < {row[m - 1]}"))
            if m >= 1 and not row[m - 1] >= 0:
                bad.append(Violation(k, m, "nonneg", f"{row[m - 1]} < 0"))
    for k in range(s.alpha, s.top):
        lo, hi = s.row(k), s.row(k + 1)
        mk, mk1 = half(k), half(k + 1)
        if k % 2 == 1:
            # rows k odd, k+1 even; chain ends lambda^(k)_[k] >= |lambda^(k+1)_[k+1]|
            for j in range(1, mk + 1):
                if not hi[j - 1] >= lo[j - 1]:
                    bad.append(Violation(k, j, "upper", f"{hi[j - 1]} < {lo[j - 1]}"))
                if j < mk:
                    if not lo[j - 1] >= hi[j]:
                        bad.append(Violation(k, j, "lower", f"{lo[j - 1]} < {hi[j]}"))
                else:
                    if not lo[j - 1] >= abs(hi[mk1 - 1]):
                        bad.append(Violation(k, j, "lower_abs", f"{lo[j - 1]} < |{hi[mk1 - 1]}|"))
        else:
            # rows k even, k+1 odd; chain ends lambda^(k+1)_[k+1] >= |lambda^(k)_[k]|
            for j in range(1, mk + 1):
                if j < mk:
                    if not hi[j - 1] >= lo[j - 1]:
                        bad.append(Violation(k, j, "upper", f"{hi[j - 1]} < {lo[j - 1]}"))
                    if not lo[j - 1] >= hi[j]:
                        bad.append(Violation(k, j, "lower", f"{lo[j - 1]} < {hi[j]}"))
                else:
                    if not hi[j - 1] >= abs(lo[j - 1]):
                        bad.append(Violation(k, j, "upper_abs", f"{hi[j - 1]} < |{lo[j - 1]}|"))
    return bad


def validate(s: Staircase) -> ValidationReport:
    """Check every interlacing inequality; exact, so the report is canonical.

    Raises StructureError for malformed row lengths (distinct from a mere
    inequality violation).
    """
    _check_structure(s)
    bad = _validate_unitary(s) if s.flavor == UNITARY else _validate_orthogonal(s)
    return ValidationReport(ok=not bad, violations=tuple(bad))


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise SchemaError(f"not a rational literal: {text!r} (expected 'p', '-p' or 'p/q')")
    return Fraction(text.strip())


def parse_staircase(doc: str | dict) -> Staircase:
    """Parse the canonical JSON interchange form.

    ``{"flavor": "unitary" | "orthogonal", "rows": [["p/q", ...], ...]}`` with
    rows[0] the bottom row (row alpha) and rows[-1] the top row n+1.
    The parsed staircase is validated; an invalid one raises StaircaseError.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("staircase document must be a JSON object")
    flavor = doc.get("flavor")
    if flavor not in (UNITARY, ORTHOGONAL):
        raise SchemaError(f"flavor must be 'unitary' or 'orthogonal', got {flavor!r}")
    rows = doc.get("rows")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("'rows' must be a non-empty list of lists")
    parsed = tuple(tuple(parse_rational(x) for x in row) for row in rows)
    s = Staircase(flavor, parsed)
    report = validate(s)  # raises StructureError on bad lengths
    if not report.ok:
        first = report.violations[0]
        raise StaircaseError(f"invalid staircase: {first.kind} at (k={first.k}, j={first.j}): {first.detail}")
    return s


def _rand_between(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    """Random integer point of [lo, hi] (endpoints included, so equalities occur)."""
    a, b = int(-(-lo // 1)), int(hi // 1)  # ceil, floor
    if a > b:
        # no integer inside; fall back to an endpoint
        return lo if rng.random() < 0.5 else hi
    return Fraction(rng.randint(a, b))


def random_staircase(flavor: str, n: int, rng: random.Random, span: int = 16) -> Staircase:
    """Pseudo-random valid staircase with integer entries.

    Entries live on the integer grid in [0, span] (orthogonal: [-span, span]
    folded by the absolute-value rules), which keeps the xi-matrix entries
    small enough that the 1e-9 eigenvalue oracle tolerance is honest.
    Endpoint hits are common by construction, so degenerate patterns (faces of
    every codimension) are well represented.
    """
    alpha = 1 if flavor == UNITARY else 2
    if n + 1 < alpha:
        raise ValueError("need n+1 >= alpha")
    if flavor == UNITARY:
        top = sorted((rng.randint(0, span) for _ in range(n + 1)), reverse=True)
        rows = [tuple(Fraction(x) for x in top)]
        for k in range(n, alpha - 1, -1):
            above = rows[0]
            row = tuple(_rand_between(rng, above[j + 1], above[j]) for j in range(k))
            rows.insert(0, row)
        return Staircase(UNITARY, tuple(rows))
    m_top = half(n + 1)
    top_abs = sorted((rng.randint(0, span) for _ in range(m_top)), reverse=True)
    top = [Fraction(x) for x in top_abs]
    if (n + 1) % 2 == 0 and m_top >= 1 and rng.random() < 0.5:
        top[-1] = -top[-1]
    rows = [tuple(top)]
    for k in range(n, alpha - 1, -1):
        above = rows[0]
        mk, mk1 = half(k), half(k + 1)
        row: list[Fraction] = []
        if k % 2 == 1:
            for j in range(1, mk + 1):
                hi_b = above[j - 1]
                lo_b = above[j] if j < mk else abs(above[mk1 - 1])
                row.append(_rand_between(rng, lo_b, hi_b))
        else:
            for j in range(1, mk):
                row.append(_rand_between(rng, above[j], above[j - 1]))
            bound = above[mk1 - 1]
            if mk >= 2:
                bound = min(bound, row[mk - 2])
            row.append(_rand_between(rng, -bound, bound))
        rows.insert(0, tuple(row))
    return Staircase(ORTHOGONAL, tuple(rows))

"""GZ pattern graphs: equality graphs on staircase entries.

A pattern has one vertex per entry of the (extended, in the orthogonal case)
triangular array and an edge between nearest neighbours -- same row or
adjacent rows -- exactly when the entries are equal.  Connected components
are level sets of a single value; their per-row widths drive everything
downstream (group expressions, cohomology, homotopy).

Orthogonal patterns are stored in extended symmetric form: row k of the
triangle has k entries, obtained from the floor(k/2) staircase entries by
mirroring and inserting the midline zero in odd rows.  Vertices of value 0
are white; rows 1..n+1 always exist (row 1 is the lone apex zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gzfiber.staircase import (
    ORTHOGONAL,
    UNITARY,
    Staircase,
    StaircaseError,
    half,
    validate,
)

Vertex = tuple[int, int]  # (row k, position j), both 1-indexed

BLACK = "black"
WHITE = "white"


def _extended_rows(s: Staircase) -> tuple[tuple[Fraction, ...], ...]:
    if s.flavor == UNITARY:
        return s.rows
    out: list[tuple[Fraction, ...]] = [(Fraction(0),)]
    for k in range(2, s.top + 1):
        lam = s.row(k)
        if k % 2 == 1:
            row = lam + (Fraction(0),) + tuple(-x for x in reversed(lam))
        else:
            body = lam[:-1]
            a = abs(lam[-1])
            row = body + (a, -a) + tuple(-x for x in reversed(body))
        out.append(row)
    return tuple(out)


@dataclass(frozen=True)
class Component:
    """Connected component of the pattern graph (a level set of one value)."""

    index: int
    value: Fraction
    color: str
    side: str | None  # positive | negative | None (white / unitary)
    k_b: int
    k_t: int
    vertices: frozenset[Vertex]
    widths: tuple[int, ...]  # widths[k - k_b] = vertex count in row k
    mirror_of: int | None = None  # index of the positive twin, for negative comps

    def width(self, k: int) -> int:
        if self.k_b <= k <= self.k_t:
            return self.widths[k - self.k_b]
        return 0

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "value": str(self.value),
            "color": self.color,
            "side": self.side,
            "k_b": self.k_b,
            "k_t": self.k_t,
            "widths": list(self.widths),
            "size": len(self.vertices),
            "mirror_of": self.mirror_of,
        }


@dataclass(frozen=True)
class Shape:
    """Two-row shape of one component at the row pair (k, k+1)."""

    component: int
    k: int
    width_below: int
    width_above: int
    kind: str  # "M" | "W" | "P"

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "k": self.k,
            "width_below": self.width_below,
            "width_above": self.width_above,
            "kind": self.kind,
        }


class Pattern:
    """Immutable pattern graph with precomputed components and edges."""

    def __init__(
        self,
        flavor: str,
        rows: tuple[tuple[Fraction, ...], ...],
        nonstandard_rows: frozenset[int] = frozenset(),
    ):
        self.flavor = flavor
        self.rows = rows
        self.nrows = len(rows)  # top row index n+1
        self.alpha = 1 if flavor == UNITARY else 2
        self.nonstandard_rows = nonstandard_rows
        self._build()

    # -- construction ---------------------------------------------------

    def value(self, v: Vertex) -> Fraction:
        k, j = v
        return self.rows[k - 1][j - 1]

    def color(self, v: Vertex) -> str:
        if self.flavor == ORTHOGONAL and self.value(v) == 0:
            return WHITE
        return BLACK

    def _build(self) -> None:
        for k, row in enumerate(self.rows, start=1):
            if len(row) != k:
                raise StaircaseError(f"pattern row {k} has {len(row)} entries")
        edges: set[frozenset[Vertex]] = set()
        for k, row in enumerate(self.rows, start=1):
            for j in range(1, k):
                if row[j - 1] == row[j]:
                    edges.add(frozenset(((k, j), (k, j + 1))))
            if k < self.nrows:
                above = self.rows[k]
                for j in range(1, k + 1):
                    if row[j - 1] == above[j - 1]:
                        edges.add(frozenset(((k, j), (k + 1, j))))
                    if row[j - 1] == above[j]:
                        edges.add(frozenset(((k, j), (k + 1, j + 1))))
        self.edges = frozenset(edges)
        adj: dict[Vertex, list[Vertex]] = {}
        for e in edges:
            a, b = tuple(e)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        self._adj = adj
        self._extract_components()

    def _extract_components(self) -> None:
        seen: set[Vertex] = set()
        raw: list[frozenset[Vertex]] = []
        for k in range(1, self.nrows + 1):
            for j in range(1, k + 1):
                v = (k, j)
                if v in seen:
                    continue
                stack, comp = [v], {v}
                seen.add(v)
                while stack:
                    u = stack.pop()
                    for w in self._adj.get(u, ()):
                        if w not in comp:
                            comp.add(w)
                            seen.add(w)
                            stack.append(w)
                raw.append(frozenset(comp))
        raw.sort(key=lambda c: min(c))  # by (k_b, leftmost position there)
        comps: list[Component] = []
        for idx, vs in enumerate(raw):
            val = self.value(next(iter(vs)))
            if self.flavor == ORTHOGONAL:
                color = WHITE if val == 0 else BLACK
                side = None if val == 0 else ("positive" if val > 0 else "negative")
            else:
                color, side = BLACK, None
            k_b = min(v[0] for v in vs)
            k_t = max(v[0] for v in vs)
            widths = tuple(sum(1 for v in vs if v[0] == k) for k in range(k_b, k_t + 1))
            comps.append(Component(idx, val, color, side, k_b, k_t, vs, widths))
        # mirror pairing for negative components
        if self.flavor == ORTHOGONAL:
            pos_by_key = {
                frozenset((k, k + 1 - j) for k, j in c.vertices): c.index for c in comps if c.side == "positive"
            }
            paired = []
            for c in comps:
                if c.side == "negative":
                    twin = pos_by_key.get(c.vertices)
                    c = Component(
                        c.index, c.value, c.color, c.side, c.k_b, c.k_t, c.vertices, c.widths, mirror_of=twin
                    )
                paired.append(c)
            comps = paired
        self.components = tuple(comps)
        self._comp_of = {v: c.index for c in comps for v in c.vertices}

    # -- queries ---------------------------------------------------------

    def component_of(self, v: Vertex) -> Component:
        return self.components[self._comp_of[v]]

    def factor_components(self) -> tuple[Component, ...]:
        """Components contributing direct factors: all (unitary) or positive
        black plus white (orthogonal); mirror twins are not emitted."""
        if self.flavor == UNITARY:
            return self.components
        return tuple(c for c in self.components if c.side == "positive" or c.color == WHITE)

    def key(self) -> tuple:
        """Canonical identity of the pattern: depends only on the equality
        relation among entries (plus zero/sign data in the orthogonal case),
        not on the magnitudes."""
        whites = frozenset(v for c in self.components if c.color == WHITE for v in c.vertices)
        return (self.flavor, self.nrows, self.edges, whites, self.nonstandard_rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Pattern) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def row_blocks(self, k: int) -> list[Component]:
        """Components meeting row k, ordered left to right by their leftmost
        position in that row."""
        idxs = {self._comp_of[(k, j)] for j in range(1, k + 1)}
        blocks = [self.components[i] for i in idxs]
        blocks.sort(key=lambda c: min(j for kk, j in c.vertices if kk == k))
        return blocks

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "nrows": self.nrows,
            "vertices": [
                {"k": k, "j": j, "value": str(self.rows[k - 1][j - 1]), "color": self.color((k, j))}
                for k in range(1, self.nrows + 1)
                for j in range(1, k + 1)
            ],
            "edges": sorted([sorted(e) for e in self.edges]),
            "nonstandard_rows": sorted(self.nonstandard_rows),
            "components": [c.to_json() for c in self.components],
        }


def build_pattern(s: Staircase) -> Pattern:
    """Pattern of the face whose relative interior contains the staircase."""
    report = validate(s)
    if not report.ok:
        v = report.violations[0]
        raise StaircaseError(f"invalid staircase: {v.kind} at (k={v.k}, j={v.j}): {v.detail}")
    rows = _extended_rows(s)
    nonstd: set[int] = set()
    if s.flavor == ORTHOGONAL:
        for k in range(2, s.top + 1):
            lam = s.row(k)
            if k % 2 == 0 and half(k) >= 2 and lam[-1] < 0 and lam[-1] == -lam[-2]:
                nonstd.add(k)
    return Pattern(s.flavor, rows, frozenset(nonstd))


def components(p: Pattern) -> tuple[Component, ...]:
    return p.components


def classify_shapes(p: Pattern) -> dict[int, tuple[Shape, ...]]:
    """Per component, the M/W/P shape at every row pair (k, k+1) it meets.

    Pairs run k = k_b .. min(k_t, n): a component ending below the top row
    contributes a final M-shape against its empty next row, while isolated
    vertices of the top row contribute nothing (there is no higher row).
    """
    table: dict[int, tuple[Shape, ...]] = {}
    n = p.nrows - 1
    for c in p.components:
        shapes = []
        for k in range(c.k_b, min(c.k_t, n) + 1):
            wb, wa = c.width(k), c.width(k + 1)
            kind = "M" if wb > wa else ("W" if wb < wa else "P")
            shapes.append(Shape(c.index, k, wb, wa, kind))
        table[c.index] = tuple(shapes)
    return table


def m_shapes(p: Pattern, comp: Component) -> list[Shape]:
    return [sh for sh in classify_shapes(p)[comp.index] if sh.kind == "M"]


def white_pieces(p: Pattern, comp: Component) -> list[tuple[int, int]]:
    """Row ranges of a white component split at interior width-1 pinch rows.

    Each piece spans [a, b] inclusive; consecutive pieces share the pinch row
    (width 1, group SO(1), so the balanced product splits there).
    """
    if comp.color != WHITE:
        return [(comp.k_b, comp.k_t)]
    pinches = [k for k in range(comp.k_b + 1, comp.k_t) if comp.width(k) == 1]
    cuts = [comp.k_b] + pinches + [comp.k_t]
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)] or [(comp.k_b, comp.k_t)]


def mm_shapes(p: Pattern, comp: Component) -> list[tuple[int, int]]:
    """White MM-shapes: windows of three consecutive rows whose white widths
    strictly step down twice.  Returned as (k, bottom width)."""
    out = []
    for k in range(comp.k_b, comp.k_t - 1):
        w0, w1, w2 = comp.width(k), comp.width(k + 1), comp.width(k + 2)
        if w0 > w1 > w2 >= 1:
            out.append((k, w0))
    return out


# -- direct pattern input (face-level, no numeric values) -----------------


def pattern_from_merges(doc: dict) -> tuple[Pattern, Staircase]:
    """Build a pattern from a face-level description without numeric values.

    ``{"flavor": "unitary", "top_row": [multiplicities], "merges":
    [[k, j, k2, j2], ...]}`` where each merge asserts equality between the
    nearest-neighbour entries (k, j) and (k2, j2).  Realizability is checked
    by constructing a rational witness staircase; the witness must reproduce
    exactly the requested equalities, otherwise the merges force extra ones
    and the call fails.  Only the unitary flavor is supported here.
    """
    if doc.get("flavor") != UNITARY:
        raise StaircaseError("pattern_from_merges supports the unitary flavor only")
    mults = doc.get("top_row")
    if not isinstance(mults, list) or not mults or not all(isinstance(m, int) and m > 0 for m in mults):
        raise StaircaseError("'top_row' must be a list of positive multiplicities")
    merges = doc.get("merges", [])
    top: list[Fraction] = []
    for i, m in enumerate(mults):
        top.extend([Fraction(len(mults) - i)] * m)
    n1 = len(top)
    n = n1 - 1
    # translate merges into pin constraints per (k, j)
    pin_up: set[tuple[int, int]] = set()
    pin_lo: set[tuple[int, int]] = set()
    requested: set[frozenset[Vertex]] = set()
    for quad in merges:
        k, j, k2, j2 = quad
        a, b = sorted(((k, j), (k2, j2)))
        requested.add(frozenset((a, b)))
        if a[0] == b[0]:  # same-row merge: both pinned to the shared upper value
            if b[1] != a[1] + 1:
                raise StaircaseError(f"merge {quad} is not between nearest neighbours")
            pin_lo.add(a)
            pin_up.add(b)
        elif b[0] == a[0] + 1 and b[1] == a[1]:
            pin_up.add(a)
        elif b[0] == a[0] + 1 and b[1] == a[1] + 1:
            pin_lo.add(a)
        else:
            raise StaircaseError(f"merge {quad} is not between nearest neighbours")
    rows = [tuple(top)]
    for k in range(n, 0, -1):
        above = rows[0]
        row = []
        for j in range(1, k + 1):
            hi, lo = above[j - 1], above[j]
            up, low = (k, j) in pin_up, (k, j) in pin_lo
            if up and low and hi != lo:
                raise StaircaseError(f"merges pin ({k},{j}) to both {hi} and {lo}")
            if up:
                row.append(hi)
            elif low:
                row.append(lo)
            else:
                row.append((hi + lo) / 2)
        rows.insert(0, tuple(row))
    witness = Staircase(UNITARY, tuple(rows))
    pat = build_pattern(witness)
    # the transitive closure of the requested merges (plus top-row repeats)
    # gives the expected equality classes; compare against the witness
    parent: dict[Vertex, Vertex] = {}

    def find(v: Vertex) -> Vertex:
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: Vertex, b: Vertex) -> None:
        parent[find(a)] = find(b)

    for j in range(1, n1):
        if top[j - 1] == top[j]:
            union((n1, j), (n1, j + 1))
    for k, j in pin_up:
        union((k, j), (k + 1, j))
    for k, j in pin_lo:
        union((k, j), (k + 1, j + 1))
    expected: set[frozenset[Vertex]] = set()
    for k in range(1, n1 + 1):
        for j in range(1, k + 1):
            for other in ((k, j + 1), (k + 1, j), (k + 1, j + 1)):
                if other[0] <= n1 and other[1] <= other[0]:
                    if find((k, j)) == find(other):
                        expected.add(frozenset(((k, j), other)))
    extra = pat.edges - expected
    if extra:
        some = sorted(tuple(sorted(e)) for e in extra)[:4]
        raise StaircaseError(f"merge set is not realizable as stated; forced extra equalities {some}")
    if expected - pat.edges:
        raise StaircaseError("merge set is infeasible (closure exceeds interlacing bounds)")
    return pat, witness

"""Combinatorial skeleton of the toric degeneration (unitary flavor).

Faces of the GZ polytope are enumerated as realizable equality patterns: a
face fixes, for each slot of the interlacing triangle, whether the entry is
pinned to its upper-left bound, pinned to its upper-right bound, or free.
Every face carries an exact rational witness in its relative interior
(midpoints of the free intervals), so realizability never needs an LP.

Each codimension-one adjacency E > F either merges two torus-counted
components of E's pattern or absorbs one into the top row; the induced map
T^{t(E)} -> T^{t(F)} multiplies or drops circle coordinates.  Coherence of
the composite maps along the face lattice is the machine-checkable content
of the degeneration's well-definedness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from gzfiber.pattern import Pattern, build_pattern
from gzfiber.staircase import UNITARY, Staircase


class DegenerationError(ValueError):
    pass


Slot = tuple[int, int, str]  # (k, j, "upper" | "lower")


@dataclass(frozen=True)
class Face:
    index: int
    dim: int
    tight: frozenset[Slot]
    witness: Staircase
    pattern: Pattern
    t: int
    tcomps: tuple[frozenset, ...]  # torus-counted components, canonical order

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "dim": self.dim,
            "t": self.t,
            "tight": sorted([k, j, side] for k, j, side in self.tight),
            "witness": self.witness.to_json()["rows"],
        }


@dataclass(frozen=True)
class TorusMap:
    """Integer matrix t(F) x t(E) on circle coordinates for a covering E > F.

    Rows are standard basis vectors or sums of two (merge); columns of zeros
    correspond to E-components absorbed into the top row.
    """

    rows: int
    cols: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def compose(self, inner: "TorusMap") -> "TorusMap":
        if self.cols != inner.rows:
            raise DegenerationError(f"composition shape mismatch {self.shape} x {inner.shape}")
        a, b = self.matrix, inner.matrix
        out = tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(self.cols)) for j in range(inner.cols))
            for i in range(self.rows)
        )
        return TorusMap(self.rows, inner.cols, out)

    def rank(self) -> int:
        # rows have disjoint supports (each column has at most one 1)
        return sum(1 for row in self.matrix if any(row))

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class FaceLattice:
    flavor: str
    top_row: tuple[Fraction, ...]
    dim: int
    faces: tuple[Face, ...]
    covers: tuple[tuple[int, int], ...]  # (E index, F index) with dim F = dim E - 1

    def counts_by_dim(self) -> list[int]:
        out = [0] * (self.dim + 1)
        for f in self.faces:
            out[f.dim] += 1
        return out

    def top_face(self) -> Face:
        return max(self.faces, key=lambda f: f.dim)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "top_row": [str(x) for x in self.top_row],
            "dim": self.dim,
            "counts_by_dim": self.counts_by_dim(),
            "faces": [f.to_json() for f in self.faces],
            "covers": [list(c) for c in self.covers],
        }


def _t_components(pattern: Pattern) -> tuple[frozenset, ...]:
    """Torus-counted components in canonical (k_b, leftmost) order."""
    comps = [c for c in pattern.components if c.k_t < pattern.nrows]
    comps.sort(key=lambda c: (c.k_b, min(j for k, j in c.vertices if k == c.k_b)))
    return tuple(c.vertices for c in comps)


def enumerate_faces(top_row, n_bound: int = 4, flavor: str = UNITARY) -> FaceLattice:
    """All faces of the unitary GZ polytope with the given top row.

    Works down the rows: each entry is pinned to one of its two upper bounds
    or kept free at the midpoint, which is a witness in the face's relative
    interior; equal upper bounds leave a single pinned option.  Every
    realizable equality pattern occurs exactly once.
    """
    if flavor != UNITARY:
        raise DegenerationError("face enumeration is implemented for the unitary flavor")
    top = tuple(Fraction(x) if not isinstance(x, Fraction) else x for x in top_row)
    if any(top[i] < top[i + 1] for i in range(len(top) - 1)):
        raise DegenerationError("top row must be weakly decreasing")
    n = len(top) - 1
    if n > n_bound:
        raise DegenerationError(f"n = {n} exceeds the bound {n_bound}")

    faces: list[Face] = []

    def descend(k: int, rows: list[tuple[Fraction, ...]], tight: set[Slot], dim: int) -> None:
        if k == 0:
            witness = Staircase(UNITARY, tuple(reversed(rows)))
            pattern = build_pattern(witness)
            tcomps = _t_components(pattern)
            faces.append(Face(len(faces), dim, frozenset(tight), witness, pattern, len(tcomps), tcomps))
            return
        above = rows[-1]
        options_per_slot = []
        for j in range(1, k + 1):
            hi, lo = above[j - 1], above[j]
            opts: list[tuple[Fraction, list[Slot]]] = []
            if hi == lo:
                opts.append((hi, [(k, j, "upper"), (k, j, "lower")]))
            else:
                opts.append((hi, [(k, j, "upper")]))
                opts.append((lo, [(k, j, "lower")]))
                opts.append(((hi + lo) / 2, []))
            options_per_slot.append(opts)
        for choice in itertools.product(*options_per_slot):
            row = tuple(val for val, _ in choice)
            slots = [s for _, ss in choice for s in ss]
            free = sum(1 for _, ss in choice if not ss)
            descend(k - 1, rows + [row], tight | set(slots), dim + free)

    descend(n, [top], set(), 0)
    dim_total = max(f.dim for f in faces)
    faces.sort(key=lambda f: (-f.dim, sorted(f.tight)))
    faces = [
        Face(i, f.dim, f.tight, f.witness, f.pattern, f.t, f.tcomps) for i, f in enumerate(faces)
    ]
    return FaceLattice(UNITARY, top, dim_total, tuple(faces), _covering_pairs(faces))


def _covering_pairs(faces: list[Face]) -> tuple[tuple[int, int], ...]:
    """Covering pairs (E, F) with dim F = dim E - 1 and tight(E) < tight(F),
    via bitmask subset tests bucketed by dimension."""
    import numpy as np

    slots = sorted({s for f in faces for s in f.tight})
    bit = {s: i for i, s in enumerate(slots)}
    by_dim: dict[int, list[Face]] = {}
    for f in faces:
        by_dim.setdefault(f.dim, []).append(f)
    covers: list[tuple[int, int]] = []
    use_numpy = len(slots) <= 64
    for d in sorted(by_dim, reverse=True):
        uppers, lowers = by_dim.get(d, []), by_dim.get(d - 1, [])
        if not uppers or not lowers:
            continue
        masks = [sum(1 << bit[s] for s in f.tight) for f in lowers]
        if use_numpy:
            low = np.array(masks, dtype=np.uint64)
            for e in uppers:
                me = np.uint64(sum(1 << bit[s] for s in e.tight))
                for h in np.nonzero((low & me) == me)[0]:
                    covers.append((e.index, lowers[int(h)].index))
        else:
            for e in uppers:
                me = sum(1 << bit[s] for s in e.tight)
                covers.extend((e.index, f.index) for f, m in zip(lowers, masks) if m & me == me)
    covers.sort()
    return tuple(covers)


def _containment_map(upper: Face, lower: Face) -> TorusMap:
    """Map on circle coordinates induced by refining upper's components into
    lower's: each torus-counted component of the finer pattern lands in at
    most one of the coarser one's."""
    rows = []
    for fv in lower.tcomps:
        rows.append(tuple(1 if ev <= fv else 0 for ev in upper.tcomps))
    for col in range(len(upper.tcomps)):
        if sum(r[col] for r in rows) > 1:
            raise DegenerationError("component landed in two coarser components")
    return TorusMap(len(lower.tcomps), len(upper.tcomps), tuple(rows))


def torus_map(E: Face, F: Face, lattice: FaceLattice | None = None) -> TorusMap:
    """Circle-coordinate map T^{t(E)} -> T^{t(F)} for a covering pair E > F."""
    if not (F.dim == E.dim - 1 and E.tight < F.tight):
        raise DegenerationError(f"faces {E.index} > {F.index} are not a covering pair")
    return _containment_map(E, F)


def check_coherence(lattice: FaceLattice) -> dict:
    """For every interval E > F > G of length two, all composite torus maps
    (and the direct containment map E -> G) must agree."""
    by_index = {f.index: f for f in lattice.faces}
    up: dict[int, list[int]] = {}
    for e, f in lattice.covers:
        up.setdefault(e, []).append(f)
    maps = {(e, f): _containment_map(by_index[e], by_index[f]) for e, f in lattice.covers}
    mismatches = []
    checked = 0
    for e, mids in up.items():
        targets: dict[int, dict[int, TorusMap]] = {}
        for f in mids:
            for g in up.get(f, []):
                comp = maps[(f, g)].compose(maps[(e, f)])
                targets.setdefault(g, {})[f] = comp
        for g, per_mid in targets.items():
            direct = _containment_map(by_index[e], by_index[g])
            for f, comp in per_mid.items():
                checked += 1
                if comp.matrix != direct.matrix:
                    mismatches.append({"E": e, "F": f, "G": g})
    return {"ok": not mismatches, "checked": checked, "mismatches": mismatches}


def x0_skeleton(lattice: FaceLattice) -> dict:
    """Present X_0 = union of T^{t(p)} as a quotient of T^{dim} x Delta: per
    face, the composite matrix from the interior's torus (well defined by
    coherence)."""
    coherence = check_coherence(lattice)
    if not coherence["ok"]:
        raise DegenerationError("incoherent lattice")
    top = lattice.top_face()
    entries = []
    for f in lattice.faces:
        m = _containment_map(top, f)
        entries.append({"face": f.index, "dim": f.dim, "t": f.t, "matrix": m.to_json(), "rank": m.rank()})
    return {"interior_t": top.t, "faces": entries, "coherent": True}


def hasse_dot(lattice: FaceLattice) -> str:
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for f in lattice.faces:
        lines.append(f'  f{f.index} [label="#{f.index} d{f.dim} t{f.t}"];')
    for e, f in lattice.covers:
        lines.append(f"  f{f} -> f{e};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Homotopy groups and cohomology models of GZ fibers.

Unitary fibers have exterior integral cohomology with one generator of
degree 2d-1 per M-shape of width d.  Orthogonal fibers split as
F = F_U x F_SO; F_U behaves like a unitary fiber on the positive part of the
pattern, while F_SO is additively the cohomology of a product of real
Stiefel manifolds indexed by the hexagon decomposition of the white
components.  All torsion is 2-torsion.
"""

from __future__ import annotations

from dataclasses import dataclass

from gzfiber.pattern import (
    WHITE,
    Component,
    Pattern,
    classify_shapes,
    mm_shapes,
    white_pieces,
)
from gzfiber.groupexpr import Telescoped, _piece_factor, factorize
from gzfiber.staircase import ORTHOGONAL, UNITARY


class InvariantError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomial and graded-group helpers
# ---------------------------------------------------------------------------


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def exterior_poly(degrees) -> list[int]:
    out = [1]
    for d in degrees:
        out = poly_mul(out, [1] + [0] * (d - 1) + [1])
    return out


def _pad(v: list[int], n: int) -> list[int]:
    return v + [0] * (n - len(v))


@dataclass(frozen=True)
class GradedGroup:
    """Graded abelian group with free part and 2-torsion only."""

    free: tuple[int, ...]  # free ranks by degree
    tor: tuple[int, ...]  # number of Z/2 summands by degree

    def __post_init__(self):
        for name in ("free", "tor"):
            v = list(getattr(self, name))
            while len(v) > 1 and v[-1] == 0:
                v.pop()
            object.__setattr__(self, name, tuple(v))

    def tensor(self, other: "GradedGroup") -> "GradedGroup":
        """Cohomology Kunneth product: H^n(X x Y) is the sum of the tensor
        terms in degree n plus Tor(H^i, H^j) with i + j = n + 1, so each
        Tor(Z/2, Z/2) = Z/2 lands one degree below its tensor mate."""
        n = len(self.free) + len(other.free) - 1
        free = poly_mul(list(self.free), list(other.free))
        tor = [0] * (n + 1)
        for i, a in enumerate(self.tor):
            for j, b in enumerate(other.free):
                tor[i + j] += a * b
        for i, a in enumerate(self.free):
            for j, b in enumerate(other.tor):
                tor[i + j] += a * b
        for i, a in enumerate(self.tor):
            for j, b in enumerate(other.tor):
                tor[i + j] += a * b  # Z/2 (x) Z/2
                tor[i + j - 1] += a * b  # Tor(Z/2, Z/2)
        return GradedGroup(tuple(_pad(free, n + 1)), tuple(tor))

    def f2_poincare(self) -> list[int]:
        """dim_F2 H^d = free rank + t_d + t_{d+1} (universal coefficients)."""
        n = max(len(self.free), len(self.tor)) + 1
        f, t = _pad(list(self.free), n), _pad(list(self.tor), n)
        out = [f[d] + t[d] + (t[d + 1] if d + 1 < n else 0) for d in range(n)]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    @staticmethod
    def unit() -> "GradedGroup":
        return GradedGroup((1,), (0,))


def _torsion_from_polys(f2: list[int], free: list[int]) -> list[int]:
    """Solve dim_F2 H^d = rank_d + t_d + t_{d+1} for the 2-torsion ranks t."""
    n = max(len(f2), len(free)) + 1
    f2 = _pad(list(f2), n)
    free = _pad(list(free), n)
    t = [0] * (n + 1)
    for d in range(n):
        t[d + 1] = f2[d] - free[d] - t[d]
        if t[d + 1] < 0:
            raise InvariantError("inconsistent mod-2 / free Poincare data")
    while len(t) > 1 and t[-1] == 0:
        t.pop()
    return t


# ---------------------------------------------------------------------------
# Stiefel manifold catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StiefelCohomology:
    """Cohomology of V_{M-m}(R^M) = SO(M)/SO(m).

    Mod 2 there is a simple system of generators v_i, one in each degree
    m..M-1, with v_i^2 = v_{2i} when 2i < M (else 0) and Sq^1 v_{2i} =
    v_{2i+1} when 2i+1 < M.  All integral torsion is 2-torsion; the free part
    has a simple system q_{4j-1} for [2j-1, 2j+1] inside [m, M], u_m for even
    m, and chi_{M-1} for even M.
    """

    M: int
    m: int
    simple_degrees: tuple[int, ...]
    squares: tuple[tuple[int, int | None], ...]  # (i, deg of v_i^2 or None)
    sq1: tuple[tuple[int, int], ...]  # Sq^1 v_i = v_{i+1}
    free_generators: tuple[tuple[str, int], ...]  # (label, degree)
    torsion: tuple[int, ...]  # Z/2 ranks by degree

    @property
    def dim(self) -> int:
        return (self.M * (self.M - 1) - self.m * (self.m - 1)) // 2

    def f2_poincare(self) -> list[int]:
        return exterior_poly(self.simple_degrees)

    def free_poincare(self) -> list[int]:
        return exterior_poly(d for _, d in self.free_generators)

    def graded(self) -> GradedGroup:
        return GradedGroup(tuple(self.free_poincare()), self.torsion)

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "m": self.m,
            "simple_degrees": list(self.simple_degrees),
            "squares": [{"degree": i, "square": s} for i, s in self.squares],
            "sq1": [{"from": a, "to": b} for a, b in self.sq1],
            "free_generators": [{"label": lab, "degree": d} for lab, d in self.free_generators],
            "torsion": [{"degree": d, "rank": r} for d, r in enumerate(self.torsion) if r],
        }


def stiefel_cohomology(M: int, m: int) -> StiefelCohomology:
    """Catalog entry for SO(M)/SO(m); m in {0, 1} both give SO(M)."""
    if not 0 <= m < M:
        raise InvariantError(f"need 0 <= m < M, got ({M}, {m})")
    lo = max(m, 1)
    degrees = tuple(range(lo, M))
    squares = tuple((i, 2 * i if 2 * i < M else None) for i in degrees)
    sq1 = tuple((e, e + 1) for e in degrees if e % 2 == 0 and e + 1 < M)
    free: list[tuple[str, int]] = []
    if m % 2 == 0 and m >= 2:
        free.append((f"u_{m}", m))
    for jj in range(1, M):
        a, b = 2 * jj - 1, 2 * jj + 1
        if a >= lo and b <= M:
            free.append((f"q_{4 * jj - 1}", 4 * jj - 1))
    if M % 2 == 0:
        free.append((f"chi_{M - 1}", M - 1))
    free.sort(key=lambda t: t[1])
    torsion = _torsion_from_polys(exterior_poly(degrees), exterior_poly(d for _, d in free))
    return StiefelCohomology(M, m, degrees, squares, sq1, tuple(free), tuple(torsion))


# ---------------------------------------------------------------------------
# exterior models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExteriorModel:
    """Exterior algebra on generators tagged with their source shape."""

    generators: tuple[tuple[int, str], ...]  # (degree, source)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(d for d, _ in self.generators))

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    def poincare(self) -> list[int]:
        return exterior_poly(self.degrees)

    def to_json(self) -> dict:
        return {"generators": [{"degree": d, "source": s} for d, s in self.generators]}


def _shape_source(comp: Component, k: int) -> str:
    return f"component {comp.index}, rows {k}-{k + 1}"


def cohomology_unitary(p: Pattern) -> ExteriorModel:
    """One exterior generator of degree 2d-1 per M-shape of width d in rows
    alpha..n (isolated top-row vertices contribute nothing)."""
    if p.flavor != UNITARY:
        raise InvariantError("cohomology_unitary needs a unitary pattern")
    gens = []
    shapes = classify_shapes(p)
    for c in p.components:
        for sh in shapes[c.index]:
            if sh.kind == "M":
                gens.append((2 * sh.width_below - 1, _shape_source(c, sh.k)))
    gens.sort(key=lambda g: (g[0], g[1]))
    return ExteriorModel(tuple(gens))


# ---------------------------------------------------------------------------
# orthogonal cohomology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalCohomologyModel:
    fu: ExteriorModel  # black positive M-shapes, degrees 2d-1
    hexagons: tuple[tuple[int, int], ...]  # (M, m) Stiefel data per white hexagon
    hexagon_cohomology: tuple[StiefelCohomology, ...]
    fso_free: tuple[tuple[int, str], ...]  # free generators z_s / q_{4s'-1}
    mm_widths: tuple[int, ...]  # odd MM-shape bottom widths 2s'+1
    additive_spheres: tuple[int, ...]  # sphere dims of the additive model
    fso_graded: GradedGroup
    notes: tuple[str, ...]

    def fso_f2_poincare(self) -> list[int]:
        out = [1]
        for h in self.hexagon_cohomology:
            out = poly_mul(out, h.f2_poincare())
        return out

    def fso_free_poincare(self) -> list[int]:
        return exterior_poly(d for d, _ in self.fso_free)

    def f2_poincare(self) -> list[int]:
        return poly_mul(self.fu.poincare(), self.fso_f2_poincare())

    def free_poincare(self) -> list[int]:
        return poly_mul(self.fu.poincare(), self.fso_free_poincare())

    def torsion(self) -> tuple[int, ...]:
        g = GradedGroup(tuple(self.fu.poincare()), (0,)).tensor(self.fso_graded)
        return g.tor

    def to_json(self) -> dict:
        return {
            "fu": self.fu.to_json(),
            "fso": {
                "hexagons": [{"M": M, "m": m} for M, m in self.hexagons],
                "stiefel": [h.to_json() for h in self.hexagon_cohomology],
                "free_generators": [{"degree": d, "source": s} for d, s in self.fso_free],
                "mm_widths": list(self.mm_widths),
                "additive_spheres": list(self.additive_spheres),
                "additive_stiefel": [f"V_2(R^{w})" for w in self.mm_widths],
            },
            "torsion": [{"degree": d, "rank": r} for d, r in enumerate(self.torsion()) if r],
            "poincare": {"F2": self.f2_poincare(), "Q": self.free_poincare()},
            "notes": list(self.notes),
        }


def _white_piece_chains(p: Pattern) -> list[Telescoped]:
    chains = []
    for comp in p.factor_components():
        if comp.color != WHITE:
            continue
        for a, b in white_pieces(p, comp):
            chains.append(_piece_factor(p, comp, a, b).telescoped)
    return chains


def hexagon_stiefels(p: Pattern) -> list[tuple[int, int]]:
    """(M, m) of the Stiefel manifold of every white hexagon: local maximum
    widths paired with the following local minimum (the final quotient rank
    for pieces reaching the top row, SO(1) otherwise)."""
    out = []
    for tel in _white_piece_chains(p):
        Ms, ms = tel.maxima, tel.minima
        if not Ms:
            continue
        v = tel.top_quotient if tel.top_quotient is not None else 1
        mins = list(ms) + [max(v, 1)]
        out.extend((Ms[i], mins[i]) for i in range(len(Ms)))
    return out


def cohomology_orthogonal(p: Pattern) -> OrthogonalCohomologyModel:
    """Cohomology of an orthogonal fiber F = F_U x F_SO.

    F_U: exterior generators of degree 2d-1 from black M-shapes of width d in
    the positive part.  F_SO: additively the product of the hexagons' Stiefel
    manifolds; free-part generators are q_{4s'-1} per odd-width MM-shape
    (width 2s'+1) and z_s per white M-shape of width s+1 not contained in any
    odd-width MM-shape.
    """
    if p.flavor != ORTHOGONAL:
        raise InvariantError("cohomology_orthogonal needs an orthogonal pattern")
    shapes = classify_shapes(p)
    fu_gens = []
    for c in p.components:
        if c.side != "positive":
            continue
        for sh in shapes[c.index]:
            if sh.kind == "M":
                fu_gens.append((2 * sh.width_below - 1, _shape_source(c, sh.k)))
    fu_gens.sort(key=lambda g: (g[0], g[1]))
    fu = ExteriorModel(tuple(fu_gens))

    free: list[tuple[int, str]] = []
    mm_widths: list[int] = []
    spheres: list[int] = []
    for c in p.components:
        if c.color != WHITE:
            continue
        mms = mm_shapes(p, c)
        odd_rows = set()
        for k, w in mms:
            if w % 2 == 1:
                mm_widths.append(w)
                odd_rows.update((k, k + 1))
                free.append((2 * w - 3, f"MM_{w}-shape at component {c.index}, rows {k}-{k + 2}"))
        for sh in shapes[c.index]:
            if sh.kind == "M" and sh.width_below >= 2 and sh.k not in odd_rows:
                free.append((sh.width_below - 1, _shape_source(c, sh.k)))
                spheres.append(sh.width_below - 1)
    free.sort(key=lambda g: (g[0], g[1]))

    hexes = hexagon_stiefels(p)
    hex_cohom = tuple(stiefel_cohomology(M, m) for M, m in hexes)
    graded = GradedGroup.unit()
    for h in hex_cohom:
        graded = graded.tensor(h.graded())

    notes = []
    if any(k in p.nonstandard_rows for k in range(2, p.nrows + 1)):
        notes.append("nonstandard (o-conjugate) blocks were normalized away")
    return OrthogonalCohomologyModel(
        fu=fu,
        hexagons=tuple(hexes),
        hexagon_cohomology=hex_cohom,
        fso_free=tuple(free),
        mm_widths=tuple(sorted(mm_widths, reverse=True)),
        additive_spheres=tuple(sorted(spheres, reverse=True)),
        fso_graded=graded,
        notes=tuple(notes),
    )


def additive_model_graded(model: OrthogonalCohomologyModel) -> GradedGroup:
    """Graded group of the plain additive model: spheres S^{s_i} times
    Stiefel manifolds V_2(R^{2s'+1}); must agree with the hexagon product."""
    g = GradedGroup.unit()
    for s in model.additive_spheres:
        g = g.tensor(GradedGroup(tuple(_pad([1], s) + [1]), (0,)))
    for w in model.mm_widths:
        g = g.tensor(stiefel_cohomology(w, w - 2).graded())
    return g


def poincare_polynomial(model, coefficients: str = "Q") -> list[int]:
    """Poincare polynomial of a cohomology model as a coefficient list.

    ``coefficients`` is one of F2, Q, Z-free (the last two agree: free part).
    """
    if coefficients not in ("F2", "Q", "Z-free"):
        raise InvariantError(f"unknown coefficients {coefficients!r}")
    if isinstance(model, ExteriorModel):
        return model.poincare()
    if isinstance(model, StiefelCohomology):
        return model.f2_poincare() if coefficients == "F2" else model.free_poincare()
    if isinstance(model, OrthogonalCohomologyModel):
        return model.f2_poincare() if coefficients == "F2" else model.free_poincare()
    raise InvariantError(f"cannot take Poincare polynomial of {model!r}")


# ---------------------------------------------------------------------------
# homotopy groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomotopyProfile:
    pi1_free_rank: int
    pi1_two_torsion_rank: int  # s
    pi2_rank: int  # f
    pi3_rank: int
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "pi1_free_rank": self.pi1_free_rank,
            "pi1_two_torsion_rank": self.pi1_two_torsion_rank,
            "pi2_rank": self.pi2_rank,
            "pi3_rank": self.pi3_rank,
            "notes": list(self.notes),
        }


def _pruned_component_count(p: Pattern, comps) -> int:
    """Delete width-1 rows from each component, then count the remaining
    connected pieces not meeting the top row."""
    count = 0
    for comp in comps:
        keep = {v for v in comp.vertices if comp.width(v[0]) >= 2}
        seen: set = set()
        for v in sorted(keep):
            if v in seen:
                continue
            stack, piece = [v], {v}
            seen.add(v)
            while stack:
                u = stack.pop()
                for w in p._adj.get(u, ()):
                    if w in keep and w not in piece:
                        piece.add(w)
                        seen.add(w)
                        stack.append(w)
            if not any(x[0] == p.nrows for x in piece):
                count += 1
    return count


def _pi3_from_chain(tel: Telescoped) -> int:
    """Free rank of pi_3 of one unitary chain via the telescoped data:
    corank of pi_3(prod SU(m_j)) -> pi_3(prod SU(M_j))."""
    if not tel.maxima:
        return 0
    big = sum(1 for M in tel.maxima if M >= 2)
    small = sum(1 for m in tel.minima if m >= 2)
    if tel.top_quotient is not None and tel.top_quotient >= 2:
        small += 1
    return big - small


def pi3_unitary_cross_check(p: Pattern) -> int:
    """Telescoped computation of the unitary pi_3 rank (must agree with the
    pruned-graph count)."""
    pres = factorize(p)
    return sum(_pi3_from_chain(f.telescoped) for f in pres.factors if f.family == "U")


def homotopy_unitary(p: Pattern) -> HomotopyProfile:
    """pi_1 = Z^t, pi_2 = 0; pi_3 is free of rank the number of components of
    the pattern after deleting width-1 rows and any piece still meeting the
    top row."""
    if p.flavor != UNITARY:
        raise InvariantError("homotopy_unitary needs a unitary pattern")
    pres = factorize(p)
    pi3 = _pruned_component_count(p, p.components)
    return HomotopyProfile(pres.torus_rank, 0, 0, pi3)


def _so_piece_counts(tel: Telescoped) -> tuple[int, int, int]:
    """(s, f, h) of one white piece from its telescoped chain."""
    Ms, ms, v = tel.maxima, tel.minima, tel.top_quotient
    if not Ms or max(Ms) <= 2:
        # points and SO(2) diamonds; a diamond's circle lives in the torus
        f = sum(1 for m in ms if m == 2) + (1 if v == 2 else 0)
        return 0, f, 0
    if any(M == 2 for M in Ms):
        raise InvariantError("width-2 local maximum inside a longer white chain")
    f = sum(1 for m in ms if m == 2) + (1 if v == 2 else 0)
    s = 0 if (v is not None and v >= 2) else 1
    n_ge3 = sum(1 for m in ms if m >= 3) + (1 if v is not None and v >= 3 else 0)
    h = len(Ms) + sum(1 for M in Ms if M == 4) - n_ge3
    return s, f, h


def homotopy_orthogonal(p: Pattern) -> HomotopyProfile:
    """Combine the unitary rules on the positive part with the white data:
    the torus rank t, pi_1 2-torsion (Z/2)^s, pi_2 = Z^f from width-2 local
    minima, and pi_3 free rank from the per-piece counts h = r + N_4 - n_ge3
    (computed with width-2 maxima already extracted into the torus)."""
    if p.flavor != ORTHOGONAL:
        raise InvariantError("homotopy_orthogonal needs an orthogonal pattern")
    pres = factorize(p)
    pi3_u = _pruned_component_count(p, [c for c in p.components if c.side == "positive"])
    s = f = g = 0
    for fac in pres.factors:
        if fac.family != "SO":
            continue
        ds, df, dh = _so_piece_counts(fac.telescoped)
        s, f, g = s + ds, f + df, g + dh
    notes = []
    if any(
        c.color == WHITE and c.k_t == p.nrows and c.widths == (1,) for c in p.components
    ):
        notes.append(
            "white top-row singletons contribute nothing; the deletion procedure"
            " for s is read per telescoped factor"
        )
    return HomotopyProfile(pres.torus_rank, s, f, pi3_u + g, tuple(notes))


def homotopy(p: Pattern) -> HomotopyProfile:
    return homotopy_unitary(p) if p.flavor == UNITARY else homotopy_orthogonal(p)


def invariants_report(p: Pattern) -> dict:
    """Combined JSON report: homotopy profile plus cohomology model."""
    prof = homotopy(p)
    if p.flavor == UNITARY:
        model = cohomology_unitary(p)
        cohom = {
            "generators": model.to_json()["generators"],
            "torsion": [],
            "poincare": {"F2": model.poincare(), "Q": model.poincare()},
        }
    else:
        omodel = cohomology_orthogonal(p)
        cohom = omodel.to_json()
    return {"pi": prof.to_json(), "cohomology": cohom}

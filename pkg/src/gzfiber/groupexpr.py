"""Symbolic Lie-group expressions for GZ fibers.

The fiber over a staircase point is the iterated balanced product
H_alpha (x)_{L_alpha} H_{alpha+1} (x) ... (x)_{L_{n-1}} H_n / L_n, where the
stabilizers H_k, L_k are block products read off the pattern.  After the
standard-embedding normalization every direct factor is determined by the
width profile of one pattern component: it telescopes to
U(M_1) (x)_{U(m_1)} ... U(M_r) [/ U(v)] -- with SO in place of U for white
components -- where M_i / m_i are the local maximum / minimum widths.
Stiefel factors then peel off greedily, and every component not ending in
the top row donates a determinant circle to the torus factor.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from gzfiber.pattern import (
    WHITE,
    Component,
    Pattern,
    classify_shapes,
    white_pieces,
)
from gzfiber.staircase import UNITARY


class GroupExprError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expression nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Atom:
    family: str  # "U" | "SU" | "SO"
    rank: int
    nonstandard: bool = False  # o-conjugate block (orthogonal even rows)

    def __str__(self) -> str:
        return f"{self.family}({self.rank})"


@dataclass(frozen=True)
class Torus:
    rank: int

    def __str__(self) -> str:
        return "S^1" if self.rank == 1 else f"(S^1)^{self.rank}"


@dataclass(frozen=True)
class Sphere:
    dim: int

    def __str__(self) -> str:
        return f"S^{self.dim}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors) if self.factors else "1"


@dataclass(frozen=True)
class Balanced:
    left: object
    glue: object
    right: object

    def __str__(self) -> str:
        return f"{self.left} (x)_{{{self.glue}}} {self.right}"


@dataclass(frozen=True)
class Quotient:
    space: object
    sub: object

    def __str__(self) -> str:
        return f"{self.space}/{self.sub}"


@dataclass(frozen=True)
class Biquotient:
    left: tuple  # factors of the subgroup acting on the left
    groups: tuple  # factors of G
    right: tuple  # factors of the subgroup acting on the right

    def __str__(self) -> str:
        def side(groups: tuple) -> str:
            if not groups:
                return "1"
            s = " x ".join(str(g) for g in groups)
            return f"({s})" if len(groups) > 1 else s

        g = " x ".join(str(g) for g in self.groups)
        if len(self.groups) > 1:
            g = f"({g})"
        return f"{side(self.left)}\\{g}/{side(self.right)}"


Expr = object


def atom(family: str, rank: int, nonstandard: bool = False) -> Expr:
    """Atoms normalize eagerly: U(0), SU(0), SU(1), SO(0), SO(1) are points."""
    if rank < 0:
        raise GroupExprError(f"negative rank {family}({rank})")
    if rank == 0 or (family in ("SU", "SO") and rank == 1):
        return Point()
    return Atom(family, rank, nonstandard)


def product(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    torus = 0
    for f in factors:
        for g in f.factors if isinstance(f, Product) else (f,):
            if isinstance(g, Point):
                continue
            if isinstance(g, Torus):
                torus += g.rank
            else:
                flat.append(g)
    if torus:
        flat.insert(0, Torus(torus))
    if not flat:
        return Point()
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def balanced(left: Expr, glue: Expr, right: Expr) -> Expr:
    if isinstance(glue, Point):
        return product(left, right)
    if isinstance(right, Point):
        return quotient(left, glue)
    if isinstance(left, Point):
        return quotient(right, glue)
    return Balanced(left, glue, right)


def quotient(space: Expr, sub: Expr) -> Expr:
    if isinstance(sub, Point):
        return space
    if space == sub:
        return Point()
    return Quotient(space, sub)


@functools.singledispatch
def group_dim(expr) -> int:
    raise GroupExprError(f"cannot take dim of {expr!r}")


@group_dim.register
def _(expr: Point) -> int:
    return 0


@group_dim.register
def _(expr: Atom) -> int:
    n = expr.rank
    if expr.family == "U":
        return n * n
    if expr.family == "SU":
        return n * n - 1
    if expr.family == "SO":
        return n * (n - 1) // 2
    raise GroupExprError(f"unknown family {expr.family}")


@group_dim.register
def _(expr: Torus) -> int:
    return expr.rank


@group_dim.register
def _(expr: Sphere) -> int:
    return expr.dim


@group_dim.register
def _(expr: Product) -> int:
    return sum(group_dim(f) for f in expr.factors)


@group_dim.register
def _(expr: Balanced) -> int:
    return group_dim(expr.left) + group_dim(expr.right) - group_dim(expr.glue)


@group_dim.register
def _(expr: Quotient) -> int:
    return group_dim(expr.space) - group_dim(expr.sub)


@group_dim.register
def _(expr: Biquotient) -> int:
    return (
        sum(group_dim(g) for g in expr.groups)
        - sum(group_dim(g) for g in expr.left)
        - sum(group_dim(g) for g in expr.right)
    )


def expr_to_json(expr: Expr) -> dict:
    if isinstance(expr, Point):
        return {"kind": "point"}
    if isinstance(expr, Atom):
        d: dict = {"kind": "atom", "family": expr.family, "rank": expr.rank}
        if expr.nonstandard:
            d["nonstandard"] = True
        return d
    if isinstance(expr, Torus):
        return {"kind": "torus", "rank": expr.rank}
    if isinstance(expr, Sphere):
        return {"kind": "sphere", "dim": expr.dim}
    if isinstance(expr, Product):
        return {"kind": "product", "factors": [expr_to_json(f) for f in expr.factors]}
    if isinstance(expr, Balanced):
        return {
            "kind": "balanced",
            "left": expr_to_json(expr.left),
            "glue": expr_to_json(expr.glue),
            "right": expr_to_json(expr.right),
        }
    if isinstance(expr, Quotient):
        return {"kind": "quotient", "space": expr_to_json(expr.space), "sub": expr_to_json(expr.sub)}
    if isinstance(expr, Biquotient):
        return {
            "kind": "biquotient",
            "left": [expr_to_json(g) for g in expr.left],
            "groups": [expr_to_json(g) for g in expr.groups],
            "right": [expr_to_json(g) for g in expr.right],
        }
    raise GroupExprError(f"unknown expression {expr!r}")


def expr_to_sexp(expr: Expr) -> str:
    if isinstance(expr, Point):
        return "point"
    if isinstance(expr, Atom):
        tail = " o" if expr.nonstandard else ""
        return f"(atom {expr.family} {expr.rank}{tail})"
    if isinstance(expr, Torus):
        return f"(torus {expr.rank})"
    if isinstance(expr, Sphere):
        return f"(sphere {expr.dim})"
    if isinstance(expr, Product):
        return "(product " + " ".join(expr_to_sexp(f) for f in expr.factors) + ")"
    if isinstance(expr, Balanced):
        return f"(balanced {expr_to_sexp(expr.left)} {expr_to_sexp(expr.glue)} {expr_to_sexp(expr.right)})"
    if isinstance(expr, Quotient):
        return f"(quotient {expr_to_sexp(expr.space)} {expr_to_sexp(expr.sub)})"
    if isinstance(expr, Biquotient):
        lft = " ".join(expr_to_sexp(g) for g in expr.left) or "point"
        mid = " ".join(expr_to_sexp(g) for g in expr.groups)
        rgt = " ".join(expr_to_sexp(g) for g in expr.right) or "point"
        return f"(biquotient ({lft}) ({mid}) ({rgt}))"
    raise GroupExprError(f"unknown expression {expr!r}")


# ---------------------------------------------------------------------------
# stabilizers H_k and L_k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerBlock:
    component: int
    family: str  # "U" | "SO"
    rank: int  # block size d (for H) or the K rank (for L)
    corank_one: bool = False  # K of the form [1] + G(d-1)
    nonstandard: bool = False

    def expr(self) -> Expr:
        return atom(self.family, self.rank, self.nonstandard)


def _row_block_data(p: Pattern, k: int, full_row: bool) -> list[tuple[Component, str, int]]:
    """Blocks of row k, left to right: (component, family, block size).

    With ``full_row`` mirror black blocks are kept, matching how stabilizers
    are read off the drawn pattern; without it one unitary block per positive
    component plus the white SO block remain, which is the actual subgroup.
    """
    blocks = []
    for c in p.row_blocks(k):
        w = c.width(k)
        if p.flavor == UNITARY:
            blocks.append((c, "U", w))
        elif c.color == WHITE:
            blocks.append((c, "SO", w))
        elif full_row or c.side == "positive":
            blocks.append((c, "U", w))
    return blocks


def _last_positive_value(p: Pattern, k: int):
    pos = [x for x in p.rows[k - 1] if x > 0]
    return min(pos) if pos else None


def stabilizer_H_blocks(p: Pattern, k: int, full_row: bool = True) -> list[StabilizerBlock]:
    if not p.alpha <= k <= p.nrows:
        raise GroupExprError(f"row {k} outside {p.alpha}..{p.nrows}")
    nonstd_val = _last_positive_value(p, k) if k in p.nonstandard_rows else None
    out = []
    for c, fam, w in _row_block_data(p, k, full_row):
        ns = fam == "U" and nonstd_val is not None and abs(c.value) == nonstd_val
        out.append(StabilizerBlock(c.index, fam, w, nonstandard=ns))
    return out


def stabilizer_H(p: Pattern, k: int, full_row: bool = True) -> Expr:
    """Centralizer H_k of the row-k diagonal representative, as a product of
    blocks read off the row.  An orthogonal even row whose last staircase
    entry mirrors its neighbour negatively marks the block nonstandard
    (o-conjugate); the flag is bookkeeping only and is erased downstream by
    the standard-embedding normalization."""
    return product(*(b.expr() for b in stabilizer_H_blocks(p, k, full_row)))


def stabilizer_L_blocks(p: Pattern, k: int, full_row: bool = True) -> list[StabilizerBlock]:
    if not p.alpha <= k <= p.nrows - 1:
        raise GroupExprError(f"L_k is defined for alpha <= k <= n, got k={k}")
    shapes = classify_shapes(p)
    nonstd_val = _last_positive_value(p, k) if k in p.nonstandard_rows else None
    out = []
    for c, fam, w in _row_block_data(p, k, full_row):
        sh = next(s for s in shapes[c.index] if s.k == k)
        ns = fam == "U" and nonstd_val is not None and abs(c.value) == nonstd_val
        if sh.kind == "M":
            out.append(StabilizerBlock(c.index, fam, w - 1, corank_one=True, nonstandard=ns))
        else:
            out.append(StabilizerBlock(c.index, fam, w, nonstandard=ns))
    return out


def stabilizer_L(p: Pattern, k: int, full_row: bool = True) -> Expr:
    """Stabilizer L_k <= H_k of the chosen representative xi^(k+1): each
    M-shape block drops to the lower-right corank-one subgroup, W/P blocks
    keep the full block."""
    return product(*(b.expr() for b in stabilizer_L_blocks(p, k, full_row)))


def balanced_product(p: Pattern) -> Expr:
    """Raw presentation H_alpha (x)_{L_alpha} ... (x)_{L_{n-1}} H_n / L_n,
    using the true subgroups (one unitary block per positive component in the
    orthogonal case), so its dimension is the fiber dimension."""
    n = p.nrows - 1
    if n < p.alpha:
        return Point()
    expr: Expr = quotient(stabilizer_H(p, n, full_row=False), stabilizer_L(p, n, full_row=False))
    for k in range(n - 1, p.alpha - 1, -1):
        expr = balanced(stabilizer_H(p, k, full_row=False), stabilizer_L(p, k, full_row=False), expr)
    return expr


# ---------------------------------------------------------------------------
# telescoping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Telescoped:
    """Chain data G(M_1) (x)_{G(m_1)} ... G(M_r) [/ G(v)] for G = U or SO."""

    family: str
    maxima: tuple[int, ...]
    minima: tuple[int, ...]
    top_quotient: int | None  # v (rank of K_n) for top-row factors, else None

    @property
    def r(self) -> int:
        return len(self.maxima)

    def expr(self) -> Expr:
        if not self.maxima:
            return Point()
        fam = self.family
        tail: Expr = atom(fam, self.maxima[-1])
        if self.top_quotient is not None:
            tail = quotient(tail, atom(fam, self.top_quotient))
        for M, m in zip(reversed(self.maxima[:-1]), reversed(self.minima)):
            tail = balanced(atom(fam, M), atom(fam, m), tail)
        return tail


def _extrema(widths: list[int]) -> tuple[list[int], list[int]]:
    """Local maxima of a width profile and the minima between them, width
    plateaus collapsed to a single row.  A final ascent counts as a maximum
    (it is the last group before the top-row quotient)."""
    comp = [w for i, w in enumerate(widths) if i == 0 or w != widths[i - 1]]
    peaks = [
        i
        for i in range(1, len(comp))
        if comp[i] > comp[i - 1] and (i + 1 == len(comp) or comp[i] > comp[i + 1])
    ]
    maxima = [comp[i] for i in peaks]
    minima = [min(comp[peaks[t] : peaks[t + 1] + 1]) for t in range(len(peaks) - 1)]
    return maxima, minima


def _peel_expr(fam: str, M: int, m: int) -> Expr:
    """Normal form of a peeled Stiefel factor G(M)/G(m); corank-one quotients
    become sphere atoms."""
    if fam == "U":
        if m == M - 1:
            return Sphere(2 * M - 1)
        if m == 0:
            return atom("U", M)
        if m == 1:
            return atom("SU", M)  # U(M)/U(1) = SU(M)
        return quotient(atom("U", M), atom("U", m))
    if m <= 1:
        return atom("SO", M)
    if m == M:
        return Point()
    if m == M - 1:
        return Sphere(M - 1)
    return quotient(atom("SO", M), atom("SO", m))


def _top_leftover_expr(fam: str, M: int, v: int) -> Expr:
    """Normal form of the final G(M)/G(v) of a top-row factor.  A quotient by
    U(1) is the special unitary group (diamond rule), so SU wins over the
    sphere spelling when both apply."""
    if fam == "U":
        if v == 0:
            return atom("U", M)
        if v == 1:
            return atom("SU", M)
        if v == M - 1:
            return Sphere(2 * M - 1)
        return quotient(atom("U", M), atom("U", v))
    return _peel_expr("SO", M, v)


@dataclass(frozen=True)
class FiberFactor:
    """One direct factor of the fiber, with all its presentation forms."""

    component: int
    piece: tuple[int, int]  # row range [a, b] of the pattern piece
    family: str  # "U" | "SO"
    is_top: bool
    widths: tuple[int, ...]
    raw: Expr
    telescoped: Telescoped
    simplified: Expr  # after greedy Stiefel peeling
    peels: tuple[str, ...]
    peel_exprs: tuple  # the peeled Stiefel/sphere factors, in peel order
    leftover: Expr  # normalized chain remainder (a point if nothing is left)
    residual: Telescoped | None  # chain left after peeling
    circle: bool  # donates one circle (determinant / SO(2)) to the torus

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "rows": list(self.piece),
            "family": self.family,
            "is_top": self.is_top,
            "widths": list(self.widths),
            "raw": str(self.raw),
            "telescoped": str(self.telescoped.expr()),
            "maxima": list(self.telescoped.maxima),
            "minima": list(self.telescoped.minima),
            "top_quotient": self.telescoped.top_quotient,
            "simplified": str(self.simplified),
            "peels": list(self.peels),
            "circle": self.circle,
            "dimension": group_dim(self.raw),
            "biquotient": str(to_biquotient_factor(self)),
        }


def _split_stiefel(
    tel: Telescoped, is_top: bool
) -> tuple[tuple[Expr, ...], tuple[str, ...], Expr, Telescoped | None]:
    """Greedy opportunistic splitting: peel V = G(M_1)/G(m_1) from the left
    while M_1 <= M_2; for factors ending below the top row also peel
    G(M_r)/G(m_{r-1}) from the right while M_r < M_{r-1}.

    Returns (peeled factors, peel log, normalized leftover, leftover chain).
    """
    fam = tel.family
    Ms, ms, v = list(tel.maxima), list(tel.minima), tel.top_quotient
    if not Ms:
        return (), (), Point(), None
    pieces: list[Expr] = []
    peels: list[str] = []
    while len(Ms) >= 2 and Ms[0] <= Ms[1]:
        pieces.append(_peel_expr(fam, Ms[0], ms[0]))
        peels.append(f"left {fam}({Ms[0]})/{fam}({ms[0]})")
        Ms.pop(0)
        ms.pop(0)
    if not is_top:
        while len(Ms) >= 2 and Ms[-1] < Ms[-2]:
            pieces.append(_peel_expr(fam, Ms[-1], ms[-1]))
            peels.append(f"right {fam}({Ms[-1]})/{fam}({ms[-1]})")
            Ms.pop()
            ms.pop()
    if len(Ms) == 1:
        if is_top:
            leftover = _top_leftover_expr(fam, Ms[0], v if v is not None else 0)
        else:
            leftover = atom(fam, Ms[0])
        residual = Telescoped(fam, tuple(Ms), (), v if is_top else None)
    else:
        residual = Telescoped(fam, tuple(Ms), tuple(ms), v if is_top else None)
        leftover = residual.expr()
    return tuple(pieces), tuple(peels), leftover, residual


def _piece_factor(p: Pattern, comp: Component, a: int, b: int) -> FiberFactor:
    """Direct factor of the piece of ``comp`` spanning pattern rows [a, b]."""
    n = p.nrows - 1
    fam = "SO" if comp.color == WHITE else "U"
    is_top = b == p.nrows
    j_top = min(b, n)
    widths = tuple(comp.width(k) for k in range(a, j_top + 1))
    if not widths:  # piece living entirely in the top row
        tel = Telescoped(fam, (), (), None)
        return FiberFactor(
            comp.index, (a, b), fam, is_top, widths, Point(), tel, Point(), (), (), Point(), None, False
        )
    shapes = {s.k: s for s in classify_shapes(p)[comp.index]}
    ks = {
        k: (shapes[k].width_below - 1 if shapes[k].kind == "M" else shapes[k].width_below)
        for k in range(a, j_top + 1)
    }
    raw: Expr = atom(fam, widths[-1])
    if is_top:
        raw = quotient(raw, atom(fam, ks[n]))
    for k in range(j_top - 1, a - 1, -1):
        raw = balanced(atom(fam, comp.width(k)), atom(fam, ks[k]), raw)
    maxima, minima = _extrema(list(widths))
    v = ks[n] if is_top else None
    # nondecreasing approach to the top row collapses G(M_r)/G(M_r) away
    while v is not None and maxima and v == maxima[-1]:
        maxima = maxima[:-1]
        v = minima[-1] if minima else None
        minima = minima[:-1]
    if not maxima and not is_top and fam == "U":
        maxima = [1]  # an all-width-1 black component collapses to U(1)
    tel = Telescoped(fam, tuple(maxima), tuple(minima), v if maxima else None)
    peel_exprs, peels, leftover, residual = _split_stiefel(tel, is_top)
    simplified = product(*peel_exprs, leftover)
    if fam == "U":
        circle = not is_top
    else:
        circle = residual is not None and residual.maxima == (2,) and (residual.top_quotient or 1) <= 1
    return FiberFactor(
        comp.index, (a, b), fam, is_top, widths, raw, tel, simplified, peels, peel_exprs, leftover, residual, circle
    )


@dataclass(frozen=True)
class FiberPresentation:
    flavor: str
    factors: tuple[FiberFactor, ...]
    torus_rank: int
    dimension: int

    def expression(self) -> Expr:
        """Simplified direct-product form (after Stiefel peeling)."""
        return product(*(f.simplified for f in self.factors))

    def text(self) -> str:
        return format_fiber(self)

    def to_json(self) -> dict:
        torus, residual = extract_torus(self)
        return {
            "flavor": self.flavor,
            "torus_rank": self.torus_rank,
            "dimension": self.dimension,
            "expression": self.text(),
            "torus": str(torus),
            "residual": str(residual),
            "factors": [f.to_json() for f in self.factors],
        }


def factorize(p: Pattern) -> FiberPresentation:
    """Direct-factor decomposition: one factor per unitary component, per
    positive black component, or per white piece (white components split at
    width-1 pinch rows; mirror twins are not emitted)."""
    factors: list[FiberFactor] = []
    for comp in p.factor_components():
        if comp.color == WHITE:
            for a, b in white_pieces(p, comp):
                factors.append(_piece_factor(p, comp, a, b))
        else:
            factors.append(_piece_factor(p, comp, comp.k_b, comp.k_t))
    t = sum(1 for f in factors if f.circle)
    dim = sum(group_dim(f.raw) for f in factors)
    return FiberPresentation(p.flavor, tuple(factors), t, dim)


def fiber_presentation(p: Pattern) -> FiberPresentation:
    return factorize(p)


def telescope(p: Pattern, comp: Component, piece: tuple[int, int] | None = None) -> Telescoped:
    """Telescoped form of the factor of one component (or white piece)."""
    a, b = piece if piece is not None else (comp.k_b, comp.k_t)
    return _piece_factor(p, comp, a, b).telescoped


def split_stiefel(p: Pattern, comp: Component, piece: tuple[int, int] | None = None) -> Expr:
    a, b = piece if piece is not None else (comp.k_b, comp.k_t)
    return _piece_factor(p, comp, a, b).simplified


def torus_rank(p: Pattern) -> int:
    """Rank t(p) of the torus direct factor: components not ending in the top
    row (positive part only, for orthogonal patterns) plus white width-2
    local maxima."""
    return factorize(p).torus_rank


def su_residual(tel: Telescoped) -> Expr:
    """Special-unitary residual of a unitary chain after the determinant
    circle is removed: SU(M_1) (x)_{SU(m_1)} ... SU(M_r) [/ SU(v)], split at
    trivial gluings."""
    if tel.family != "U":
        raise GroupExprError("su_residual applies to unitary chains")
    if not tel.maxima:
        return Point()
    segs: list[tuple[list[int], list[int]]] = [([tel.maxima[0]], [])]
    for M, m in zip(tel.maxima[1:], tel.minima):
        if m <= 1:
            segs.append(([M], []))
        else:
            segs[-1][0].append(M)
            segs[-1][1].append(m)
    out: list[Expr] = []
    for i, (Ms, ms) in enumerate(segs):
        v = tel.top_quotient if i == len(segs) - 1 else None
        if v is not None and v <= 1:
            v = None
        if len(Ms) == 1:
            e: Expr = atom("SU", Ms[0])
            if v is not None:
                e = quotient(e, atom("SU", v))
            out.append(e)
        else:
            out.append(Telescoped("SU", tuple(Ms), tuple(ms), v).expr())
    return product(*out)


def extract_torus(pres: FiberPresentation) -> tuple[Expr, Expr]:
    """Split the fiber as Torus(t) x residual, the residual factors being the
    special-unitary chains of the determinant splitting (black factors) and
    the non-circle white factors."""
    torus = Torus(pres.torus_rank) if pres.torus_rank else Point()
    residual = []
    for f in pres.factors:
        residual.extend(f.peel_exprs)
        if f.residual is None:
            continue
        if f.family == "U":
            residual.append(su_residual(f.residual))
        elif not f.circle:
            residual.append(f.leftover)
    return torus, product(*residual)


def _biquotient_of_chain(tel: Telescoped) -> Expr:
    if not tel.maxima:
        return Point()
    fam = tel.family
    groups = tuple(atom(fam, M) for M in tel.maxima)
    glues: list[Expr] = [atom(fam, m) for m in tel.minima]
    if tel.top_quotient is not None:
        glues.append(atom(fam, tel.top_quotient))
    left = tuple(g for i, g in enumerate(glues) if i % 2 == 1 and not isinstance(g, Point))
    right = tuple(g for i, g in enumerate(glues) if i % 2 == 0 and not isinstance(g, Point))
    return Biquotient(left, groups, right)


def to_biquotient_factor(f: FiberFactor) -> Expr:
    """Biquotient form A\\G/B of one telescoped factor: G is the product of
    the chain groups and the gluing subgroups alternate between the sides."""
    return _biquotient_of_chain(f.telescoped)


def to_biquotient(p: Pattern) -> dict:
    """Global and per-factor biquotient forms: G = prod_k H_k with the
    interleaved even/odd diagonal gluing subgroups acting on the two sides."""
    pres = factorize(p)
    n = p.nrows - 1
    groups = tuple(stabilizer_H(p, k, full_row=False) for k in range(p.alpha, n + 1))
    glues = tuple(stabilizer_L(p, k, full_row=False) for k in range(p.alpha, n + 1))
    left = tuple(g for i, g in enumerate(glues) if i % 2 == 1 and not isinstance(g, Point))
    right = tuple(g for i, g in enumerate(glues) if i % 2 == 0 and not isinstance(g, Point))
    return {
        "global": Biquotient(left, groups, right) if groups else Point(),
        "factors": [to_biquotient_factor(f) for f in pres.factors],
    }


# ---------------------------------------------------------------------------
# display
# ---------------------------------------------------------------------------


def _factor_display_parts(f: FiberFactor, flavor: str) -> list[Expr]:
    """Display pieces of one factor after torus extraction.

    Unitary fibers spell SU(2) factors as S^3; orthogonal fibers keep SU and
    SO atoms as groups (a width-2 white diamond prints as SO(2)).  Chains
    that resist peeling print in biquotient form.
    """
    out: list[Expr] = list(f.peel_exprs)
    if f.family == "U" and not f.is_top:
        out.append(Torus(1))  # determinant circle
        res = su_residual(f.residual) if f.residual is not None else Point()
        out.extend(res.factors if isinstance(res, Product) else (res,))
    elif f.residual is not None:
        if f.residual.r > 1:
            out.append(_biquotient_of_chain(f.residual))
        else:
            out.append(f.leftover)
    if flavor == UNITARY:
        out = [Sphere(3) if q == Atom("SU", 2) else q for q in out]
    return [q for q in out if not isinstance(q, Point)]


def _sort_key(e: Expr) -> tuple:
    if isinstance(e, Torus):
        return (0, e.rank, "")
    if isinstance(e, Sphere):
        return (1, e.dim, "")
    if isinstance(e, Atom):
        return (2, e.rank, e.family)
    return (3, group_dim(e), str(e))


def format_fiber(pres: FiberPresentation) -> str:
    """Canonical one-line text of the fiber's diffeomorphism type."""
    black: list[Expr] = []
    white: list[Expr] = []
    torus = 0
    for f in pres.factors:
        for q in _factor_display_parts(f, pres.flavor):
            if isinstance(q, Torus):
                torus += q.rank
            elif f.family == "SO":
                white.append(q)
            else:
                black.append(q)
    ordered = sorted(black, key=_sort_key) + sorted(white, key=_sort_key)
    pieces: list[str] = []
    if torus:
        pieces.append(str(Torus(torus)))
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j] == ordered[i]:
            j += 1
        text = str(ordered[i])
        if j - i > 1 and isinstance(ordered[i], (Sphere, Atom)):
            pieces.append(f"({text})^{j - i}")
        else:
            pieces.extend([text] * (j - i))
        i = j
    return " x ".join(pieces) if pieces else "1"

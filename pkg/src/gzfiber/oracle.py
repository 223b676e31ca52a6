"""Numeric verification layer: matrix representatives and eigenvalue checks.

For each row pair (k, k+1) there is a canonical matrix xi^(k+1) whose
upper-left k x k corner is the standard representative of row k and whose
border column carries one coupling r_i per row-k block.  The squares r_i^2
are exact rational functions of the two rows: zero on W/P-shapes and

    r_i^2 = - prod_w (mu_i - lam_w) / prod_{m != i} (mu_i - mu_m)

on M-shapes, with w over W-shape values of row k+1 and m over M-shape values
of row k.  The orthogonal case reduces to the same formula applied to the
half-spectrum of squared values (plus zero, whose multiplicity bookkeeping
differs by row parity).  Numerically diagonalizing xi^(k+1) and comparing
with row k+1 is then an end-to-end oracle for the shape classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from gzfiber.staircase import ORTHOGONAL, UNITARY, Staircase, half, validate
from gzfiber.pattern import WHITE, Pattern, classify_shapes


class OracleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact border couplings
# ---------------------------------------------------------------------------


def _multiplicities(values) -> list[tuple[Fraction, int]]:
    out: list[tuple[Fraction, int]] = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def _pair_r_squared(lower: list[tuple[Fraction, int]], upper: list[tuple[Fraction, int]]) -> list[Fraction]:
    """r_i^2 per lower block, from the multiplicity data of the two rows.

    Lower blocks are (value, multiplicity) in strictly decreasing value
    order; the upper row is the same for row k+1.  Blocks whose multiplicity
    does not drop (W/P) get 0.
    """
    lower_vals = [v for v, _ in lower]
    if len(set(lower_vals)) != len(lower_vals):
        raise OracleError("repeated block value in a single row")
    lower_mult = dict(lower)
    upper_mult = {v: d for v, d in upper}
    kinds = []
    for v, d in lower:
        e = upper_mult.get(v, 0)
        if e == d - 1:
            kinds.append("M")
        elif e in (d, d + 1):
            kinds.append("P" if e == d else "W")
        else:
            raise OracleError(f"multiplicity of {v} jumps from {d} to {e}")
    # W-shape values: upper multiplicity exceeds lower (including new values)
    w_vals = [v for v, d in upper if d > lower_mult.get(v, 0)]
    m_vals = [v for (v, d), kind in zip(lower, kinds) if kind == "M"]
    out = []
    for (v, d), kind in zip(lower, kinds):
        if kind != "M":
            out.append(Fraction(0))
            continue
        num = Fraction(1)
        for w in w_vals:
            num *= v - w
        den = Fraction(1)
        for m in m_vals:
            if m != v:
                den *= v - m
        r2 = -num / den
        if r2 < 0:
            raise OracleError(f"negative r^2 = {r2} at block value {v}")
        out.append(r2)
    return out


def _unitary_blocks(s: Staircase, k: int) -> tuple[list[tuple[Fraction, int]], list[tuple[Fraction, int]]]:
    return _multiplicities(s.row(k)), _multiplicities(s.row(k + 1))


def _orthogonal_half_blocks(s: Staircase, k: int):
    """Half-spectrum block data of rows k, k+1 in squared values.

    Returns (lower blocks, upper blocks, row-k block layout), where the block
    layout lists (signed value, multiplicity, is_white) left to right as the
    skew block matrix is assembled.  The zero value's half multiplicities are
    ceil(d0/2) below and the count of zero staircase entries above, which
    makes the zero block an M exactly for a white M-shape.
    """
    lam_k = s.row(k)
    lam_k1 = s.row(k + 1)
    layout = _multiplicities([abs(x) for x in lam_k])
    signed_layout = []
    for v, d in layout:
        signed_layout.append((v, d, v == 0))
    zeros_k = sum(1 for x in lam_k if x == 0)
    zeros_k1 = sum(1 for x in lam_k1 if x == 0)
    lower = [(v * v, d) for v, d in layout if v != 0]
    d0 = 2 * zeros_k + (k % 2)  # white width of row k in the extended pattern
    if d0 >= 1:
        eps = (k + 1) % 2
        lower.append((Fraction(0), (d0 - 1 - eps) // 2 + 1))
    upper = [(v * v, d) for v, d in _multiplicities([abs(x) for x in lam_k1]) if v != 0]
    if zeros_k1:
        upper.append((Fraction(0), zeros_k1))
    return lower, upper, signed_layout


@dataclass(frozen=True)
class XiMatrix:
    """Exact skeleton of the representative xi^(k+1) plus a float view.

    ``blocks`` lists the row-k blocks left to right as (value, staircase
    multiplicity); orthogonal matrices carry the absolute values, with the
    white block listed as value 0 (multiplicity = number of zero staircase
    entries, possibly 0 when only the forced midline zero of an odd row is
    present).  A nonzero orthogonal block of multiplicity d occupies a
    2d x 2d beta-block; the white block occupies 2d + (k mod 2) rows.
    """

    flavor: str
    k: int
    blocks: tuple[tuple[Fraction, int], ...]
    r_squared: tuple[Fraction, ...]  # per block
    c: Fraction  # last diagonal entry (trace balance; 0 for orthogonal)
    nonstandard: bool  # last nonzero block is o-conjugate (orthogonal)

    def _block_width(self, v: Fraction, d: int) -> int:
        if self.flavor == UNITARY:
            return d
        return 2 * d + (self.k % 2) if v == 0 else 2 * d

    @property
    def size(self) -> int:
        return sum(self._block_width(v, d) for v, d in self.blocks) + 1

    def numeric(self) -> np.ndarray:
        n = self.size
        a = np.zeros((n, n))
        pos = 0
        if self.flavor == UNITARY:
            for (v, d), r2 in zip(self.blocks, self.r_squared):
                for t in range(d):
                    a[pos + t, pos + t] = float(v)
                r = float(r2) ** 0.5
                if r:
                    a[pos, n - 1] = r
                    a[n - 1, pos] = r
                pos += d
            a[n - 1, n - 1] = float(self.c)
            return a
        for i, ((v, d), r2) in enumerate(zip(self.blocks, self.r_squared)):
            width = self._block_width(v, d)
            if v == 0:
                r = float(r2) ** 0.5
                if r and width:
                    a[pos, n - 1] = r
                    a[n - 1, pos] = -r
                pos += width
                continue
            vals = [float(v)] * d
            if self.nonstandard and i == _last_nonzero_index(self.blocks):
                vals[-1] = -float(v)
            for t, m in enumerate(vals):
                a[pos + 2 * t, pos + 2 * t + 1] = -m
                a[pos + 2 * t + 1, pos + 2 * t] = m
            r = float(r2) ** 0.5
            if r:
                a[pos, n - 1] = r
                a[n - 1, pos] = -r
            pos += width
        return a

    def truncation_blocks(self) -> tuple[tuple[Fraction, int], ...]:
        """Exact upper-left k x k part (the standard representative of row k)."""
        return tuple((v, d) for v, d in self.blocks if d > 0)


def _last_nonzero_index(blocks) -> int:
    idx = -1
    for i, (v, _) in enumerate(blocks):
        if v != 0:
            idx = i
    return idx


def r_squared(p: Pattern, s: Staircase, k: int, block: int) -> Fraction:
    """Exact border coupling r^2 of one row-k block (0-indexed left to right:
    distinct values for unitary rows, distinct absolute values followed by
    the zero block for orthogonal rows)."""
    xi = build_xi(s, k)
    if not 0 <= block < len(xi.blocks):
        raise OracleError(f"row {k} has {len(xi.blocks)} blocks, asked for {block}")
    return xi.r_squared[block]


def build_xi(s: Staircase, k: int) -> XiMatrix:
    """Representative of the orbit of row k+1 truncating to row k exactly.

    Unitary: real symmetric arrowhead with diag(lambda^(k)) and one coupling
    r_i = sqrt(r_i^2) at the first position of each block; the corner entry
    balances the traces.  Orthogonal: skew-symmetric with beta-blocks (the
    last one o-conjugated when the sign metadata says so), couplings at each
    block's first coordinate, zero corner.
    """
    rep = validate(s)
    if not rep.ok:
        raise OracleError("invalid staircase")
    if not s.alpha <= k <= s.n:
        raise OracleError(f"need alpha <= k <= n, got k={k}")
    if s.flavor == UNITARY:
        lower, upper = _unitary_blocks(s, k)
        r2 = _pair_r_squared(lower, upper)
        c = sum(s.row(k + 1), Fraction(0)) - sum(s.row(k), Fraction(0))
        return XiMatrix(UNITARY, k, tuple(lower), tuple(r2), c, False)
    lower, upper, layout = _orthogonal_half_blocks(s, k)
    r2 = _pair_r_squared(lower, upper)
    lam = s.row(k)
    nonstd = (
        k % 2 == 0
        and half(k) >= 2
        and lam[-1] < 0
        and lam[-1] == -lam[-2]
    )
    blocks = [(v, d) for v, d, _ in layout]
    if k % 2 == 1 and (not blocks or blocks[-1][0] != 0):
        blocks.append((Fraction(0), 0))  # forced midline zero of an odd row
    # reconcile r2 to the block order: nonzero blocks keep order, zero last
    r2_by_val = {v: r for (v, _), r in zip(lower, r2)}
    r2_layout = tuple(
        r2_by_val[v * v] if v != 0 else r2_by_val.get(Fraction(0), Fraction(0)) for v, _ in blocks
    )
    return XiMatrix(ORTHOGONAL, k, tuple(blocks), r2_layout, Fraction(0), nonstd)


# ---------------------------------------------------------------------------
# eigenvalue oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigencheckReport:
    tol: float
    ok: bool
    per_k: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"tol": self.tol, "ok": self.ok, "per_k": list(self.per_k)}


def _target_spectrum(s: Staircase, k1: int) -> np.ndarray:
    lam = [float(x) for x in s.row(k1)]
    if s.flavor == UNITARY:
        return np.array(sorted(lam))
    spectrum = lam + [-x for x in lam]
    if k1 % 2 == 1:
        spectrum.append(0.0)
    return np.array(sorted(spectrum))


def eigencheck(s: Staircase, tol: float = 1e-9) -> EigencheckReport:
    """For each k, diagonalize the float view of xi^(k+1) and compare the
    sorted spectrum with row k+1 (orthogonal: the +/- multiset of the halved
    spectrum).  The exact k x k truncation is row k by construction; this is
    asserted too."""
    rep = validate(s)
    if not rep.ok:
        raise OracleError("invalid staircase")
    rows = []
    ok = True
    for k in range(s.alpha, s.top):
        xi = build_xi(s, k)
        a = xi.numeric()
        if s.flavor == UNITARY:
            expect_trunc = _multiplicities(s.row(k))
        else:
            expect_trunc = _multiplicities([abs(x) for x in s.row(k)])
        if list(xi.truncation_blocks()) != expect_trunc:
            raise OracleError(f"truncation mismatch at k={k}")
        try:
            if s.flavor == UNITARY:
                eig = np.sort(np.linalg.eigvalsh(a))
            else:
                eig = np.sort(np.linalg.eigvalsh(1j * a))  # i*A is Hermitian for skew A
        except np.linalg.LinAlgError as exc:
            raise OracleError(f"eigen-solver failed at k={k} (size {xi.size}): {exc}") from exc
        target = _target_spectrum(s, k + 1)
        dev = float(np.max(np.abs(eig - target))) if len(target) else 0.0
        passed = dev <= tol
        ok = ok and passed
        rows.append({"k": k, "size": xi.size, "max_eig_dev": dev, "pass": passed})
    return EigencheckReport(tol, ok, tuple(rows))


# ---------------------------------------------------------------------------
# conjugating matrices
# ---------------------------------------------------------------------------


def conjugator_a(xi: XiMatrix, lam: tuple[Fraction, ...], denom_tol: float = 1e-12) -> dict:
    """Special orthogonal a with a xi a^{-1} ~ the standard form of ``lam``.

    Unitary flavor: columns of a^{-1} are delta vectors at boring rows plus
    one normalized v-vector per W-shape value, with entries
    r_i (lam_w - mu_i)^{-1} on the interesting rows; the determinant is fixed
    by a final column sign flip.  Orthogonal flavor: a real Schur form is
    normalized to the beta-block representative.

    Returns a dict with the matrix, the residual |a xi a^-1 - standard|, the
    orthogonality defect and the determinant.
    """
    if xi.flavor == UNITARY:
        return _conjugator_unitary(xi, lam, denom_tol)
    return _conjugator_orthogonal(xi, lam)


def _conjugator_unitary(xi: XiMatrix, lam, denom_tol: float) -> dict:
    n = xi.size
    mus = [v for v, _ in xi.blocks]
    starts = []
    pos = 0
    for _, d in xi.blocks:
        starts.append(pos)
        pos += d
    m_blocks = [i for i, r2 in enumerate(xi.r_squared) if r2 > 0]
    lam_mult = _multiplicities(list(lam))
    # available delta columns per value: boring rows of the matching block
    cols: list[np.ndarray] = []
    used_delta: dict[int, int] = {}
    rs = {i: float(xi.r_squared[i]) ** 0.5 for i in m_blocks}
    lower = dict(xi.blocks)
    for w, mult in lam_mult:
        block = next((i for i, v in enumerate(mus) if v == w), None)
        d = lower.get(w, 0)
        n_delta = mult - 1 if mult == d + 1 else mult
        if mult == d + 1:  # W-shape: one new eigenvector
            v = np.zeros(n)
            v[n - 1] = 1.0
            for i in m_blocks:
                den = float(w - mus[i])
                if abs(den) < denom_tol:
                    raise OracleError(f"near-degenerate denominator |{w} - {mus[i]}| < {denom_tol}")
                v[starts[i]] = rs[i] / den
            cols.append(v / np.linalg.norm(v))
        for t in range(n_delta):
            off = used_delta.get(block, 1 if block in m_blocks else 0)
            e = np.zeros(n)
            e[starts[block] + off] = 1.0
            used_delta[block] = off + 1
            cols.append(e)
    a_inv = np.column_stack(cols)
    if np.linalg.det(a_inv) < 0:
        a_inv[:, -1] = -a_inv[:, -1]
    a = a_inv.T
    target = np.diag([float(x) for x in lam])
    residual = float(np.max(np.abs(a @ xi.numeric() @ a_inv - target)))
    return {
        "a": a,
        "residual": residual,
        "orthogonality": float(np.max(np.abs(a @ a.T - np.eye(n)))),
        "det": float(np.linalg.det(a)),
    }


def _standard_skew(lam, size: int) -> np.ndarray:
    a = np.zeros((size, size))
    for t, v in enumerate(lam):
        a[2 * t, 2 * t + 1] = -float(v)
        a[2 * t + 1, 2 * t] = float(v)
    return a


def _conjugator_orthogonal(xi: XiMatrix, lam) -> dict:
    A = xi.numeric()
    n = A.shape[0]
    T, Q = scipy.linalg.schur(A, output="real")
    # collect 2x2 rotation blocks and zero columns of the quasi-diagonal T
    blocks = []  # (speed value, col1, col2)
    singles = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-10:
            blocks.append((T[i + 1, i], i, i + 1))
            i += 2
        else:
            singles.append(i)
            i += 1
    want = sorted((float(x) for x in lam), key=abs, reverse=True)
    cols = []
    det_sign = 1.0
    by_speed = sorted(blocks, key=lambda b: abs(b[0]), reverse=True)
    for target, (speed, c1, c2) in zip(want, by_speed):
        if (speed < 0) != (target < 0):
            cols.extend([c2, c1])  # swapping the pair flips the block sign
            det_sign = -det_sign
        else:
            cols.extend([c1, c2])
    zero_targets = len(lam) - len(by_speed)
    basis = [Q[:, c] for c in cols]
    for t in range(zero_targets):
        # remaining lambda entries are (numerically) zero: pair up kernel columns
        basis.append(Q[:, singles.pop(0)] if singles else np.zeros(n))
        basis.append(Q[:, singles.pop(0)] if singles else np.zeros(n))
    for c in singles:
        basis.append(Q[:, c])
    a_inv = np.column_stack(basis)
    if np.linalg.det(a_inv) < 0:
        if n % 2 == 1 or zero_targets:
            a_inv[:, -1] = -a_inv[:, -1]
        else:
            # flip the last rotation pair; the achieved last block changes sign
            a_inv[:, -2], a_inv[:, -1] = a_inv[:, -1].copy(), a_inv[:, -2].copy()
            want[-1] = -want[-1]
    a = a_inv.T
    target = _standard_skew(want, n)
    residual = float(np.max(np.abs(a @ A @ a_inv - target)))
    return {
        "a": a,
        "residual": residual,
        "orthogonality": float(np.max(np.abs(a @ a.T - np.eye(n)))),
        "det": float(np.linalg.det(a)),
        "achieved": want,
    }


# ---------------------------------------------------------------------------
# sphere tower
# ---------------------------------------------------------------------------


def sphere_tower(p: Pattern) -> list[list[int]]:
    """Per row k = alpha..n, the sphere dimensions of H_k/L_k: 2d-1 per black
    M-shape of width d (positive part), d-1 per white M-shape of width d >= 2."""
    shapes = classify_shapes(p)
    n = p.nrows - 1
    out = []
    for k in range(p.alpha, n + 1):
        dims = []
        for c in p.components:
            if p.flavor == ORTHOGONAL and c.side == "negative":
                continue
            for sh in shapes[c.index]:
                if sh.k != k or sh.kind != "M":
                    continue
                if c.color == WHITE:
                    if sh.width_below >= 2:
                        dims.append(sh.width_below - 1)
                else:
                    dims.append(2 * sh.width_below - 1)
        out.append(sorted(dims, reverse=True))
    return out

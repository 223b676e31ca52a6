"""Independent cross-oracles.

These tests recompute results of the main pipeline by structurally different
routes: the face lattice from a vertex/facet incidence enumeration of the
polytope, the orthogonal homotopy counts from exact matrix ranks of the
long-exact-sequence maps, and the additive cohomology identities on large
randomized white components.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from gzfiber import Staircase, build_pattern, validate
from gzfiber.degeneration import enumerate_faces
from gzfiber.groupexpr import factorize
from gzfiber.invariants import (
    additive_model_graded,
    cohomology_orthogonal,
    exterior_poly,
    homotopy_orthogonal,
)
from gzfiber.oracle import eigencheck
from gzfiber.pattern import classify_shapes


# -- face lattice vs vertex/facet incidence ------------------------------------


def _gz_facets(top: list[Fraction], n: int):
    """H-representation of the unitary GZ polytope: one row per interlacing
    slot, as (coeffs on the n(n+1)/2 coordinates, constant) with the meaning
    coeffs . x + constant >= 0.  Coordinates are ordered row-major bottom-up.
    """
    index = {}
    pos = 0
    for k in range(1, n + 1):
        for j in range(1, k + 1):
            index[(k, j)] = pos
            pos += 1
    dim = pos

    def value_term(k, j):
        # returns (coeff vector, constant) for the entry lambda^(k)_j
        vec = [Fraction(0)] * dim
        if k == n + 1:
            return vec, top[j - 1]
        vec[index[(k, j)]] = Fraction(1)
        return vec, Fraction(0)

    facets = []
    for k in range(1, n + 1):
        for j in range(1, k + 1):
            hi_vec, hi_c = value_term(k + 1, j)
            lo_vec, lo_c = value_term(k + 1, j + 1)
            me_vec, me_c = value_term(k, j)
            upper = ([h - m for h, m in zip(hi_vec, me_vec)], hi_c - me_c)
            lower = ([m - l for m, l in zip(me_vec, lo_vec)], me_c - lo_c)
            facets.append(((k, j, "upper"), upper))
            facets.append(((k, j, "lower"), lower))
    return facets, dim


def _solve_square(rows, dim):
    """Exact Gaussian elimination; returns one solution of rows . x = consts
    or None if inconsistent / underdetermined beyond free choice of 0."""
    aug = [list(vec) + [-c] for vec, c in rows]
    m = len(aug)
    pivots = []
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        aug[r] = [x / aug[r][col] for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][dim] != 0:
            return None
    x = [Fraction(0)] * dim
    for i, col in enumerate(pivots):
        x[col] = aug[i][dim]
    if len(pivots) < dim:
        return None  # underdetermined: not a vertex candidate
    return x


def _face_lattice_by_incidence(top_vals: list[int]):
    """Face counts by dimension from the classical vertex/facet incidence:
    vertices are feasible solutions of dim-many facet equalities; every face
    is the set of vertices lying on a closed set of facets."""
    top = [Fraction(v) for v in top_vals]
    n = len(top) - 1
    facets, dim = _gz_facets(top, n)
    verts = []
    for combo in itertools.combinations(range(len(facets)), dim):
        rows = [facets[i][1] for i in combo]
        x = _solve_square(rows, dim)
        if x is None or x in verts:
            continue
        if all(sum(v * xi for v, xi in zip(vec, x)) + c >= 0 for _, (vec, c) in facets):
            verts.append(x)
    # incidence: which facets are tight at each vertex
    tight_at = []
    for x in verts:
        tight_at.append(
            frozenset(i for i, (_, (vec, c)) in enumerate(facets) if sum(v * xi for v, xi in zip(vec, x)) + c == 0)
        )
    # faces = closure of the vertex incidence sets under intersection
    faces: set[frozenset[int]] = set(tight_at)
    changed = True
    while changed:
        changed = False
        new = set()
        for a in faces:
            for b in tight_at:
                c = a & b
                if c not in faces:
                    new.add(c)
        if new:
            faces |= new
            changed = True
    # the vertex set of a face = vertices whose tight set contains it
    counts: dict[int, int] = {}
    seen_vertex_sets = set()
    for face in faces:
        vs = frozenset(i for i, t in enumerate(tight_at) if face <= t)
        if not vs or vs in seen_vertex_sets:
            continue
        seen_vertex_sets.add(vs)
        # dimension = affine rank of the vertex set
        pts = [verts[i] for i in vs]
        base = pts[0]
        vecs = [[p[i] - base[i] for i in range(dim)] for p in pts[1:]]
        counts[_rank(vecs, dim)] = counts.get(_rank(vecs, dim), 0) + 1
    out = [0] * (max(counts) + 1 if counts else 1)
    for d, c in counts.items():
        out[d] = c
    return out


def _rank(vecs, dim) -> int:
    rows = [list(v) for v in vecs]
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][col] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def test_face_counts_match_incidence_oracle_n2():
    for top in ([2, 1, 0], [1, 1, 0], [3, 1, 0]):
        lattice = enumerate_faces(top)
        oracle = _face_lattice_by_incidence(top)
        assert lattice.counts_by_dim() == oracle, top


def test_face_counts_match_incidence_oracle_n3():
    lattice = enumerate_faces([3, 2, 1, 0])
    assert lattice.counts_by_dim() == _face_lattice_by_incidence([3, 2, 1, 0])


# -- orthogonal homotopy vs exact LES ranks -------------------------------------


def _f2_rank(rows, cols: int) -> int:
    mat = [list(r) for r in rows]
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                mat[i] = [(a + b) % 2 for a, b in zip(mat[i], mat[r])]
        r += 1
    return r


def _les_counts(Ms, ms, v):
    """(s, f, g) of SO(M_1)(x)_{SO(m_1)}...SO(M_r)[/SO(v)] from the ranks of
    the long-exact-sequence maps, computed by honest linear algebra."""
    r = len(Ms)
    glues = [(j, m) for j, m in enumerate(ms)]
    if v is not None:
        glues.append((r - 1, v))

    # pi_1: (Z/2)^r modulo the images of the gluing groups; a gluing between
    # positions j, j+1 hits both, the final quotient hits only position r-1
    rows = []
    for idx, (j, m) in enumerate(glues):
        if m < 2:
            continue
        row = [0] * r
        row[j] = 1
        is_final_quotient = v is not None and idx == len(glues) - 1
        if not is_final_quotient and j + 1 < r:
            row[j + 1] = 1
        rows.append(row)
    s = r - _f2_rank(rows, r)

    # pi_2: free rank of the kernel = number of Z summands upstairs (m = 2)
    f = sum(1 for _, m in glues if m == 2)

    # pi_3: coker rank of the integer matrix on pi_3; generic nonzero scalars
    # suffice since the support pattern is staircase-triangular
    big_gens = []
    for j, M in enumerate(Ms):
        big_gens.append((j, 0))
        if M == 4:
            big_gens.append((j, 1))
    cols = []
    scale = 2
    for idx, (j, m) in enumerate(glues):
        if m < 3:
            continue
        is_final_quotient = v is not None and idx == len(glues) - 1
        gens = 2 if m == 4 else 1
        for _ in range(gens):
            col = [Fraction(0)] * len(big_gens)
            for gi, (bj, _part) in enumerate(big_gens):
                if bj == j or (bj == j + 1 and not is_final_quotient):
                    col[gi] = Fraction(scale)
                    scale += 1
            cols.append(col)
    g_rank = len(big_gens) - _rank([list(col) for col in cols], len(big_gens))
    return s, f, g_rank


def _white_profile_staircase(zeros: dict[int, int], top: int) -> Staircase:
    rows = []
    for k in range(2, top + 1):
        z = zeros.get(k, 0)
        p_k = k // 2 - z
        rows.append(tuple(Fraction(x) for x in [*range(p_k, 0, -1), *([0] * z)]))
    return Staircase("orthogonal", tuple(rows))


def _random_zero_profile(rng: random.Random, top: int) -> dict[int, int]:
    """Zero counts per row giving a valid staircase under the integer-chain
    construction: the positive count p_k grows by 0 or 1 per row."""
    zeros = {}
    p = 0
    for k in range(2, top + 1):
        cap = k // 2
        choices = [q for q in (p, p + 1) if q <= cap]
        p = rng.choice(choices)
        zeros[k] = cap - p
    return zeros


def test_orthogonal_homotopy_matches_les_ranks():
    rng = random.Random(88)
    checked = 0
    for _ in range(60):
        top = rng.randint(5, 14)
        s = _white_profile_staircase(_random_zero_profile(rng, top), top)
        if not validate(s).ok:
            continue
        p = build_pattern(s)
        pres = factorize(p)
        exp_s = exp_f = exp_g = 0
        for fac in pres.factors:
            if fac.family != "SO" or not fac.telescoped.maxima:
                continue
            Ms, ms, v = fac.telescoped.maxima, fac.telescoped.minima, fac.telescoped.top_quotient
            if max(Ms) <= 2:
                # circles and points: no contribution beyond pi_2 bookkeeping
                exp_f += sum(1 for m in ms if m == 2) + (1 if v == 2 else 0)
                continue
            ds, df, dg = _les_counts(list(Ms), list(ms), v)
            exp_s, exp_f, exp_g = exp_s + ds, exp_f + df, exp_g + dg
        prof = homotopy_orthogonal(p)
        assert prof.pi1_two_torsion_rank == exp_s, s.to_json()
        assert prof.pi2_rank == exp_f, s.to_json()
        # subtract the unitary-part pi_3 before comparing the white part
        from gzfiber.invariants import _pruned_component_count

        fu_pi3 = _pruned_component_count(p, [c for c in p.components if c.side == "positive"])
        assert prof.pi3_rank - fu_pi3 == exp_g, s.to_json()
        checked += 1
    assert checked >= 40


def test_soak_up_to_n8():
    # the oracle and dimension identities at the stated n <= 8 scale
    import sys

    sys.path.insert(0, "tests")
    from conftest import corpus
    from gzfiber.groupexpr import balanced_product, group_dim
    from gzfiber.invariants import cohomology_unitary, homotopy_unitary, pi3_unitary_cross_check
    from gzfiber.oracle import sphere_tower

    for s in corpus("unitary", 120, seed=900, n_max=8, span=12):
        p = build_pattern(s)
        pres = factorize(p)
        assert group_dim(balanced_product(p)) == pres.dimension == sum(sum(r) for r in sphere_tower(p))
        assert cohomology_unitary(p).degree_sum == pres.dimension
        assert homotopy_unitary(p).pi3_rank == pi3_unitary_cross_check(p)
        assert eigencheck(s, tol=1e-9).ok
    for s in corpus("orthogonal", 80, seed=901, n_max=8, span=7):
        assert eigencheck(s, tol=1e-9).ok


def test_big_white_components_additive_identities():
    rng = random.Random(89)
    checked = 0
    for _ in range(40):
        top = rng.randint(8, 18)
        s = _white_profile_staircase(_random_zero_profile(rng, top), top)
        if not validate(s).ok:
            continue
        p = build_pattern(s)
        model = cohomology_orthogonal(p)
        assert model.fso_graded == additive_model_graded(model), s.to_json()
        shapes = classify_shapes(p)
        md = [
            sh.width_below - 1
            for c in p.components
            if c.color == "white"
            for sh in shapes[c.index]
            if sh.kind == "M" and sh.width_below >= 2
        ]
        assert model.fso_f2_poincare() == exterior_poly(md)
        assert eigencheck(s).ok
        checked += 1
    assert checked >= 30

"""Acceptance criteria, one test per criterion, one printed line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the pass lines.
"""

from __future__ import annotations

import time
from collections import Counter

from gzfiber import build_pattern, validate
from gzfiber.degeneration import check_coherence, enumerate_faces
from gzfiber.groupexpr import Point, Torus, extract_torus, factorize
from gzfiber.invariants import (
    additive_model_graded,
    cohomology_orthogonal,
    cohomology_unitary,
    exterior_poly,
    homotopy_unitary,
    stiefel_cohomology,
)
from gzfiber.oracle import eigencheck, sphere_tower
from gzfiber.pattern import classify_shapes, mm_shapes, white_pieces

from conftest import corpus, interior_staircase


def _report(name: str, ok: bool) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def test_criterion_1_u10_golden(fig_u10):
    t0 = time.time()
    p = build_pattern(fig_u10)
    pres = factorize(p)
    model = cohomology_unitary(p)
    prof = homotopy_unitary(p)
    elapsed = time.time() - t0
    ok = (
        pres.text() == "(S^1)^7 x (S^3)^3 x U(2)\\(U(4) x U(3))/U(2)"
        and Counter(model.degrees) == {1: 7, 3: 3, 5: 2, 7: 1}
        and (prof.pi1_free_rank, prof.pi2_rank, prof.pi3_rank) == (7, 0, 3)
        and pres.dimension == 33
        and elapsed < 1.0
    )
    _report("1 (U(10) golden fiber)", ok)


def test_criterion_2_so5_golden(fig_so5):
    p = build_pattern(fig_so5)
    pres = factorize(p)
    model = cohomology_orthogonal(p)
    ok = (
        pres.text() == "SU(2) x SO(2)"
        and model.fu.degrees == (3,)
        and model.additive_spheres == (1,)
        and model.hexagons == ((2, 1),)
        and pres.torus_rank == 1
    )
    _report("2 (SO(5) golden fiber)", ok)


def test_criterion_3_so23_golden(fig_so23):
    p = build_pattern(fig_so23)
    big = max((c for c in p.components if c.color == "white"), key=lambda c: len(c.vertices))
    (a, piv), (piv2, b) = white_pieces(p, big)
    pres = factorize(p)
    fac_x = next(f for f in pres.factors if f.family == "SO" and f.piece == (a, piv))
    fac_y = next(f for f in pres.factors if f.family == "SO" and f.piece == (piv2, b))
    # X: S^2 x SO(3), hexagons S^2 = SO(3)/SO(2) and SO(3), mod-2 simple
    # system of degrees {2, 2, 1}
    hex_x = [(3, 2), (3, 1)]
    degs_x = sorted(
        (d for M, m in hex_x for d in stiefel_cohomology(M, m).simple_degrees), reverse=True
    )
    # Y: additively S^7 x S^7 x S^6 x V_2(R^7) x V_2(R^5), MM widths {7, 5}
    model = cohomology_orthogonal(p)
    y_mm = sorted((w for k, w in mm_shapes(p, big) if w % 2 == 1 and k >= piv2), reverse=True)
    shapes = classify_shapes(p)
    odd_rows = {kk for k, w in mm_shapes(p, big) if w % 2 == 1 for kk in (k, k + 1)}
    y_spheres = sorted(
        (
            sh.width_below - 1
            for sh in shapes[big.index]
            if sh.kind == "M" and sh.width_below >= 2 and sh.k >= piv2 and sh.k not in odd_rows
        ),
        reverse=True,
    )
    ok = (
        str(fac_x.simplified) == "S^2 x SO(3)"
        and degs_x == [2, 2, 1]
        and str(fac_y.telescoped.expr()) == "SO(8) (x)_{SO(7)} SO(8) (x)_{SO(6)} SO(7)/SO(3)"
        and y_mm == [7, 5]
        and y_spheres == [7, 7, 6]
        and model.fso_graded == additive_model_graded(model)
    )
    _report("3 (SO(23) white factors X and Y)", ok)


def test_criterion_4_stiefel_catalog(stiefel_staircases):
    ok = True
    for name, s in stiefel_staircases.items():
        ok = ok and validate(s).ok and factorize(build_pattern(s)).text() == name
    for m in range(4, 10):
        sc = stiefel_cohomology(m, m - 2)
        if m % 2 == 0:
            ok = ok and sorted(d for _, d in sc.free_generators) == [m - 2, m - 1]
            ok = ok and not any(sc.torsion)
        else:
            k = (m - 1) // 2
            ok = ok and [d for _, d in sc.free_generators] == [4 * k - 1]
            ok = ok and [(d, r) for d, r in enumerate(sc.torsion) if r] == [(2 * k, 1)]
    _report("4 (Stiefel fibers and V_2 catalog)", ok)


def test_criterion_5_eigenvalue_oracle():
    t0 = time.time()
    ok = True
    for s in corpus("unitary", 500, seed=501, n_max=6, span=16):
        rep = eigencheck(s, tol=1e-9)
        ok = ok and rep.ok
    for s in corpus("orthogonal", 200, seed=502, n_max=6, span=8):
        rep = eigencheck(s, tol=1e-9)
        ok = ok and rep.ok
    elapsed = time.time() - t0
    ok = ok and elapsed < 30.0
    _report(f"5 (xi eigenvalue oracle, 700 staircases in {elapsed:.1f}s)", ok)


def test_criterion_6_property_suite():
    from gzfiber.groupexpr import group_dim, to_biquotient_factor

    def rewrites_preserve_dim(p, pres) -> bool:
        for f in pres.factors:
            d = group_dim(f.raw)
            if not (
                d
                == group_dim(f.telescoped.expr())
                == group_dim(f.simplified)
                == group_dim(to_biquotient_factor(f))
            ):
                return False
        torus, residual = extract_torus(pres)
        return group_dim(torus) + group_dim(residual) == pres.dimension

    failures = 0
    for s in corpus("unitary", 500, seed=501, n_max=6, span=16):
        p = build_pattern(s)
        pres = factorize(p)
        model = cohomology_unitary(p)
        prof = homotopy_unitary(p)
        if not (
            sum(1 for d in model.degrees if d == 1) == pres.torus_rank == prof.pi1_free_rank
            and model.degree_sum == pres.dimension == sum(sum(r) for r in sphere_tower(p))
            and rewrites_preserve_dim(p, pres)
        ):
            failures += 1
    for s in corpus("orthogonal", 200, seed=502, n_max=6, span=8):
        p = build_pattern(s)
        pres = factorize(p)
        model = cohomology_orthogonal(p)
        shapes = classify_shapes(p)
        md = [
            sh.width_below - 1
            for c in p.components
            if c.color == "white"
            for sh in shapes[c.index]
            if sh.kind == "M" and sh.width_below >= 2
        ]
        if not (
            model.fso_f2_poincare() == exterior_poly(md)
            and sum(model.fu.degrees) + sum(d for d, _ in model.fso_free)
            == pres.dimension
            == sum(sum(r) for r in sphere_tower(p))
            and rewrites_preserve_dim(p, pres)
        ):
            failures += 1
    _report("6 (property suite, zero failures)", failures == 0)


def test_criterion_7_interior_torus():
    ok = True
    for n in range(2, 6):
        pres = factorize(build_pattern(interior_staircase(n)))
        torus, residual = extract_torus(pres)
        ok = ok and torus == Torus(n * (n + 1) // 2) and residual == Point()
    _report("7 (interior fibers are tori)", ok)


def test_criterion_8_degeneration_coherence():
    ok = True
    t0 = time.time()
    for n, top in ((2, [2, 1, 0]), (3, [3, 2, 1, 0])):
        lattice = enumerate_faces(top)
        for f in lattice.faces:
            ok = ok and build_pattern(f.witness) == f.pattern
        coh = check_coherence(lattice)
        ok = ok and coh["ok"] and not coh["mismatches"]
    elapsed = time.time() - t0
    ok = ok and elapsed < 10.0
    _report(f"8 (degeneration coherence, n=2,3 in {elapsed:.1f}s)", ok)

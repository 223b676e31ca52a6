"""Matrix oracle: exact couplings, eigenvalue checks, conjugators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from gzfiber import build_pattern
from gzfiber.groupexpr import factorize
from gzfiber.oracle import (
    OracleError,
    build_xi,
    conjugator_a,
    eigencheck,
    r_squared,
    sphere_tower,
)

from conftest import corpus, mk


def test_r_squared_hand_examples():
    s = mk("unitary", [[1], [2, 0]])
    p = build_pattern(s)
    assert r_squared(p, s, 1, 0) == 1
    s2 = mk("unitary", [[2], [3, 1]])
    assert r_squared(build_pattern(s2), s2, 1, 0) == 1


def test_r_squared_zero_on_w_and_p_shapes():
    s = mk("unitary", [[2], [2, 1]])
    p = build_pattern(s)
    assert r_squared(p, s, 1, 0) == 0  # P-shape
    s2 = mk("unitary", [[1], [1, 1], [2, 1, 0]])
    p2 = build_pattern(s2)
    assert r_squared(p2, s2, 1, 0) == 0  # W-shape at the diamond's base
    assert r_squared(p2, s2, 2, 0) == 1  # M-shape above it


def test_build_xi_2x2():
    s = mk("unitary", [[1], [2, 0]])
    xi = build_xi(s, 1)
    assert np.allclose(xi.numeric(), [[1, 1], [1, 1]])
    s2 = mk("unitary", [[2], [2, 1]])
    xi2 = build_xi(s2, 1)
    assert xi2.c == 1
    assert np.allclose(xi2.numeric(), [[2, 0], [0, 1]])


def test_build_xi_all_equal_single_border():
    s = mk("unitary", [[3], [3, 3]])
    xi = build_xi(s, 1)
    assert xi.r_squared == (Fraction(0),)
    assert np.allclose(xi.numeric(), [[3, 0], [0, 3]])


def test_r_squared_positive_on_m_shapes():
    for s in corpus("unitary", 40, seed=41):
        p = build_pattern(s)
        for k in range(s.alpha, s.top):
            xi = build_xi(s, k)
            for r2 in xi.r_squared:
                assert r2 >= 0


def test_r_squared_specialization_continuity():
    # evaluating the unmerged rational formula at the merged point agrees
    # with the merged pattern's formula (an M-shape specializing to P)
    def r2_formula(mu, ws, ms):
        num = Fraction(1)
        for w in ws:
            num *= mu - w
        den = Fraction(1)
        for m in ms:
            den *= mu - m
        return -num / den

    # rows (2, 3): lambda^(3) = (6, 4, 0), lambda^(2) = (t, 2); both M-shapes
    # while t is strictly inside (4, 6); as t -> 6 the first coupling dies and
    # the second tends to the merged value
    t = Fraction(6)
    r1_limit = r2_formula(t, [Fraction(6), Fraction(4), Fraction(0)], [Fraction(2)])
    assert r1_limit == 0
    r2_limit = r2_formula(Fraction(2), [Fraction(6), Fraction(4), Fraction(0)], [t])
    merged = mk("unitary", [[5], [6, 2], [6, 4, 0]])
    xi = build_xi(merged, 2)
    # merged pattern: value 6 is a P-shape (r = 0), value 2 stays an M-shape
    assert xi.r_squared[0] == 0
    assert xi.r_squared[1] == r2_limit == 4


def test_eigencheck_golden(fig_u10, fig_so5, fig_so23):
    for s in (fig_u10, fig_so5, fig_so23):
        rep = eigencheck(s, tol=1e-9)
        assert rep.ok
        assert all(row["max_eig_dev"] <= 1e-9 for row in rep.per_k)


def test_eigencheck_detects_corruption():
    s = mk("unitary", [[1], [2, 0]])
    xi = build_xi(s, 1)
    a = xi.numeric()
    a[0, 1] += 1  # corrupt the coupling
    a[1, 0] += 1
    eig = np.sort(np.linalg.eigvalsh(a))
    assert np.max(np.abs(eig - np.array([0.0, 2.0]))) > 1e-3


def test_eigencheck_requires_validity():
    s = mk("unitary", [[4], [2, 0]])
    with pytest.raises(OracleError):
        eigencheck(s)


def test_conjugator_hand_example():
    s = mk("unitary", [[1], [2, 0]])
    xi = build_xi(s, 1)
    out = conjugator_a(xi, s.row(2))
    a = out["a"]
    r = 1 / np.sqrt(2)
    assert np.allclose(np.abs(a), [[r, r], [r, r]])
    assert out["residual"] < 1e-12
    assert out["orthogonality"] < 1e-12
    assert abs(out["det"] - 1) < 1e-10


def test_conjugator_diagonal_is_identity_up_to_sign():
    s = mk("unitary", [[2], [2, 1]])
    xi = build_xi(s, 1)
    out = conjugator_a(xi, s.row(2))
    assert np.allclose(np.abs(out["a"]), np.eye(2))
    assert out["residual"] < 1e-12


def test_conjugator_orthogonal_so5(fig_so5):
    xi = build_xi(fig_so5, 4)
    out = conjugator_a(xi, fig_so5.row(5))
    assert out["residual"] < 1e-9
    assert out["orthogonality"] < 1e-10
    assert abs(out["det"] - 1) < 1e-10


def test_conjugator_random_unitary():
    for s in corpus("unitary", 25, seed=42, n_max=5):
        for k in range(s.alpha, s.top):
            xi = build_xi(s, k)
            out = conjugator_a(xi, s.row(k + 1))
            assert out["residual"] < 1e-9, (s.to_json(), k)
            assert out["orthogonality"] < 1e-10
            assert abs(out["det"] - 1) < 1e-10


def test_conjugator_random_orthogonal():
    for s in corpus("orthogonal", 25, seed=43, n_max=6, span=8):
        for k in range(s.alpha, s.top):
            xi = build_xi(s, k)
            out = conjugator_a(xi, s.row(k + 1))
            assert out["residual"] < 1e-8, (s.to_json(), k)
            assert out["orthogonality"] < 1e-9
            assert abs(out["det"] - 1) < 1e-9


def test_sphere_tower_golden(fig_u10, fig_so5):
    p = build_pattern(fig_u10)
    tower = sphere_tower(p)
    assert tower[3] == [7]  # k = 4
    assert tower[0] == []  # k = 1: only W/P-shapes
    assert sum(sum(r) for r in tower) == 33
    p2 = build_pattern(fig_so5)
    tower2 = sphere_tower(p2)
    assert tower2 == [[1], [], [3]]


def test_sphere_tower_matches_dimension():
    for s in corpus("unitary", 30, seed=44) + corpus("orthogonal", 30, seed=45, span=8):
        p = build_pattern(s)
        assert sum(sum(r) for r in sphere_tower(p)) == factorize(p).dimension

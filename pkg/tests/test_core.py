from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgrass.core import (
    BlockOperator,
    PredualElement,
    RestrictedElement,
    SplitSpace,
    Tolerances,
    UnitaryElement,
    assemble_offdiagonal,
    commutator,
    cone_pair_check,
    d_commutator,
    exp_offdiagonal,
    expm,
    operator_from_json,
    operator_to_json,
    polar,
    positivity_bound_check,
    predual_norm,
    restricted_norm,
    schatten_norm,
)
from resgrass.errors import (
    NotHermitian,
    NotSkewHermitian,
    NotUnitary,
    ShapeMismatch,
    SingularInput,
    SpaceMismatch,
)
from resgrass.sampling import ginibre, random_cone_element, random_psd, random_skew

from conftest import SIZES

SQRT2 = math.sqrt(2.0)


def op(space, arr):
    return BlockOperator(space, np.asarray(arr, dtype=complex))


class TestSplitSpace:
    def test_d_properties(self):
        sp = SplitSpace(2, 3)
        d = sp.d.entries
        assert np.allclose(d.conj().T, -d)
        assert np.allclose(d @ d, -np.eye(5))
        assert np.allclose(np.diagonal(d), [1j, 1j, -1j, -1j, -1j])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            SplitSpace(0, 2)

    def test_parse_roundtrip(self):
        assert SplitSpace.parse("4+7") == SplitSpace(4, 7)
        assert str(SplitSpace(4, 7)) == "4+7"


class TestBlockOperator:
    def test_blocks_reassemble(self, rng):
        sp = SplitSpace(2, 3)
        a = op(sp, ginibre(rng, 5, 5))
        back = BlockOperator.from_blocks(sp, a.pp, a.pm, a.mp, a.mm)
        assert a.pp.shape == (2, 2) and a.pm.shape == (2, 3)
        assert a.mp.shape == (3, 2) and a.mm.shape == (3, 3)
        assert np.array_equal(back.entries, a.entries)

    def test_shape_checked(self):
        with pytest.raises(ShapeMismatch):
            BlockOperator(SplitSpace(1, 1), np.zeros((3, 3)))

    def test_entries_are_read_only(self):
        a = SplitSpace(1, 1).identity()
        with pytest.raises(ValueError):
            a.entries[0, 0] = 5

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatch):
            commutator(SplitSpace(1, 2).d, SplitSpace(2, 1).d)

    def test_trace_of_commutator_vanishes(self, rng):
        for sp in SIZES:
            a, b = op(sp, ginibre(rng, sp.dim, sp.dim)), op(sp, ginibre(rng, sp.dim, sp.dim))
            assert abs(commutator(a, b).trace()) < 1e-12

    def test_d_commutator_blocks(self, rng):
        sp = SplitSpace(2, 3)
        a = op(sp, ginibre(rng, 5, 5))
        c = d_commutator(a)
        assert np.allclose(c.pp, 0) and np.allclose(c.mm, 0)
        assert np.allclose(c.pm, 2j * a.pm) and np.allclose(c.mp, -2j * a.mp)


class TestSkewElements:
    def test_symmetrizes_small_defect(self):
        sp = SplitSpace(1, 1)
        x = np.array([[1j, 1.0], [-1.0 + 1e-14, -1j]])
        r = RestrictedElement(sp, x)
        assert np.array_equal(r.entries, -r.entries.conj().T)

    def test_rejects_large_defect(self):
        with pytest.raises(NotSkewHermitian):
            RestrictedElement(SplitSpace(1, 1), np.array([[0, 1.0], [1.0, 0]]))

    def test_unitary_check(self):
        sp = SplitSpace(1, 1)
        UnitaryElement(sp, np.array([[0, 1], [-1, 0]]))
        with pytest.raises(NotUnitary):
            UnitaryElement(sp, np.diag([1.0, 2.0]))

    def test_tolerance_override(self):
        sp = SplitSpace(1, 1)
        x = np.array([[0, 1.0], [-1.0 + 1e-6, 0]])
        with pytest.raises(NotSkewHermitian):
            RestrictedElement(sp, x)
        RestrictedElement(sp, x, Tolerances().override(herm=1e-5))


class TestNorms:
    def test_schatten_examples(self):
        sp = SplitSpace(1, 1)
        for p in (1, 2, "inf"):
            assert schatten_norm(sp.zeros(), p) == 0
        assert schatten_norm(sp.identity(), 1) == pytest.approx(2)
        assert schatten_norm(op(sp, np.diag([3, 4])), 2) == pytest.approx(5)
        assert schatten_norm(op(sp, np.diag([3, 4])), math.inf) == pytest.approx(4)

    def test_restricted_examples(self):
        sp = SplitSpace(1, 1)
        assert restricted_norm(sp.d) == pytest.approx(1)
        assert restricted_norm(sp.identity()) == pytest.approx(1)
        a = op(sp, [[0, -1], [1, 0]])
        assert restricted_norm(a) == pytest.approx(1 + 2 * SQRT2)

    def test_predual_examples(self):
        sp = SplitSpace(1, 1)
        assert predual_norm(sp.zeros()) == 0
        assert predual_norm(sp.d) == pytest.approx(2)
        assert predual_norm(op(sp, [[0, -1], [1, 0]])) == pytest.approx(2)

    def test_norm_nesting(self, rng):
        for sp in SIZES:
            x = op(sp, ginibre(rng, sp.dim, sp.dim))
            s_inf, s2, s1 = (schatten_norm(x, p) for p in (math.inf, 2, 1))
            assert s_inf <= s2 + 1e-12 and s2 <= s1 + 1e-12


class TestExponentials:
    def test_examples(self):
        sp = SplitSpace(1, 1)
        assert np.allclose(expm(sp.zeros()).entries, np.eye(2))
        assert np.allclose(expm(sp.d).entries, np.diag([np.exp(1j), np.exp(-1j)]))
        rot = op(sp, [[0, math.pi / 2], [-math.pi / 2, 0]])
        assert np.allclose(expm(rot).entries, [[0, 1], [-1, 0]], atol=1e-14)

    def test_non_skew_path(self):
        sp = SplitSpace(1, 1)
        assert np.allclose(expm(op(sp, np.diag([1.0, 2.0]))).entries, np.diag(np.exp([1.0, 2.0])))

    def test_offdiagonal_examples(self):
        sp = SplitSpace(1, 1)
        assert np.allclose(exp_offdiagonal(np.zeros((1, 1)), sp).entries, np.eye(2))
        assert np.allclose(exp_offdiagonal([[math.pi / 2]], sp).entries, [[0, 1], [-1, 0]], atol=1e-15)
        assert np.allclose(exp_offdiagonal([[math.pi]], sp).entries, -np.eye(2), atol=1e-15)

    def test_offdiagonal_matches_expm(self, rng):
        for _ in range(100):
            npl, nmi = rng.integers(1, 9, size=2)
            sp = SplitSpace(int(npl), int(nmi))
            a = ginibre(rng, sp.n_plus, sp.n_minus)
            ref = expm(assemble_offdiagonal(a, sp)).entries
            assert np.abs(exp_offdiagonal(a, sp).entries - ref).max() < 1e-10

    def test_offdiagonal_rank_deficient(self, rng):
        sp = SplitSpace(4, 3)
        a = ginibre(rng, 4, 1) @ ginibre(rng, 1, 3)
        ref = expm(assemble_offdiagonal(a, sp)).entries
        assert np.abs(exp_offdiagonal(a, sp).entries - ref).max() < 1e-10

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), scale=st.floats(0.01, 10.0))
    def test_skew_exp_unitary(self, seed, scale):
        r = np.random.default_rng(seed)
        sp = SplitSpace(3, 2)
        a = random_skew(sp, r, scale)
        u = expm(a).entries
        assert np.abs(u.conj().T @ u - np.eye(5)).max() < 1e-10
        assert np.abs(u @ expm(-a).entries - np.eye(5)).max() < 1e-10


class TestPolar:
    def test_examples(self):
        sp = SplitSpace(1, 1)
        g = UnitaryElement(sp, np.array([[0, 1], [-1, 0]]))
        u, s = polar(g)
        assert np.allclose(u.entries, g.entries) and np.allclose(s.entries, np.eye(2))
        u, s = polar(op(sp, np.diag([2.0, 3.0])))
        assert np.allclose(u.entries, np.eye(2)) and np.allclose(s.entries, np.diag([2, 3]))
        k = 0.3
        g = op(sp, [[1, k], [k, -1]])
        u, s = polar(g)
        assert np.allclose(s.entries, math.sqrt(1.09) * np.eye(2))
        assert np.allclose(u.entries, g.entries / math.sqrt(1.09))

    def test_random(self, rng):
        for _ in range(100):
            sp = SplitSpace(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
            g = op(sp, ginibre(rng, sp.dim, sp.dim))
            u, s = polar(g)
            se = s.entries
            assert np.allclose(se, se.conj().T)
            assert np.linalg.eigvalsh(se).min() > 0
            assert np.abs(u.entries @ se - g.entries).max() < 1e-10

    def test_singular(self):
        with pytest.raises(SingularInput):
            polar(op(SplitSpace(1, 1), np.diag([1.0, 0.0])))


class TestPositivity:
    def test_examples(self):
        sp = SplitSpace(1, 1)
        r = positivity_bound_check(sp.identity())
        assert r.is_positive and r.t_norm == 0 and r.bound == pytest.approx(SQRT2)
        r = positivity_bound_check(op(sp, np.ones((2, 2))))
        assert r.is_positive and r.t_norm == pytest.approx(1) and r.bound == pytest.approx(SQRT2)
        r = positivity_bound_check(op(sp, [[1, 2], [2, 1]]))
        assert not r.is_positive and r.t_norm == pytest.approx(2)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            positivity_bound_check(op(SplitSpace(1, 1), [[0, 1], [0, 0]]))

    def test_random_psd(self, rng):
        for sp in SIZES:
            for _ in range(25):
                r = positivity_bound_check(random_psd(sp, rng, int(rng.integers(1, sp.dim + 1))))
                assert r.is_positive and r.t_norm <= r.bound + 1e-10

    def test_cone_examples(self):
        sp = SplitSpace(1, 1)
        r = cone_pair_check(op(sp, -1j * np.eye(2)))
        assert r.i_rho_positive and r.s1 == pytest.approx(2) and r.pd == pytest.approx(2)
        assert not cone_pair_check(sp.d).i_rho_positive
        r = cone_pair_check(op(sp, -1j * np.ones((2, 2))))
        assert r.s1 == pytest.approx(2) and r.pd == pytest.approx(4)

    def test_cone_chain_random(self, rng):
        for sp in SIZES:
            for _ in range(25):
                r = cone_pair_check(random_cone_element(sp, rng, int(rng.integers(1, sp.dim + 1))))
                assert r.i_rho_positive
                assert r.s1 - 1e-10 <= r.pd <= (1 + SQRT2) * r.s1 + 1e-10


class TestJson:
    def test_roundtrip(self, rng):
        sp = SplitSpace(2, 3)
        a = op(sp, ginibre(rng, 5, 5))
        back = operator_from_json(json.dumps(operator_to_json(a)))
        assert back.space == sp and np.array_equal(back.entries, a.entries)

    @pytest.mark.parametrize(
        "data",
        [
            {"n_plus": 1, "n_minus": 1, "re": [[0]], "im": [[0]]},
            {"n_plus": 1, "re": [[0, 0], [0, 0]], "im": [[0, 0], [0, 0]]},
            {"n_plus": 1, "n_minus": 1, "re": "x", "im": [[0, 0], [0, 0]]},
        ],
    )
    def test_rejects_malformed(self, data):
        with pytest.raises(ShapeMismatch):
            operator_from_json(data)

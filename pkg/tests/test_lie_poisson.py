from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgrass.core import BlockOperator, PredualElement, RestrictedElement, SplitSpace, UnitaryElement, commutator, expm
from resgrass.errors import NonFiniteEvaluation, SpaceMismatch
from resgrass.lie_poisson import (
    ExtendedAlgebraElement,
    ExtendedElement,
    ScalarField,
    affine_action,
    characteristic_subspace,
    coad,
    cocycle_s,
    extended_bracket,
    fd_gradient,
    fd_gradient_richardson,
    fundamental_field,
    hamiltonian_field,
    isotropy_algebra,
    linear_field,
    pairing,
    poisson_bracket,
    sigma,
    span_projector,
)
from resgrass.sampling import random_diagonal_unitary, random_predual, random_skew, random_unitary
from resgrass.suites import cocycle_suite, jacobi_suite, sigma_suite

S11 = SplitSpace(1, 1)
A22 = RestrictedElement(S11, np.array([[0, 1], [-1, 0]]))
B22 = RestrictedElement(S11, np.array([[0, 1j], [1j, 0]]))


def ext(mu, gamma=0.0):
    return ExtendedElement(PredualElement.of(mu), gamma)


def random_point(space, rng, gamma=None):
    g = float(rng.standard_normal()) if gamma is None else gamma
    return ExtendedElement(random_predual(space, rng), g)


class TestPairingAndCocycle:
    def test_pairing_examples(self, rng):
        assert pairing(S11.zeros(), A22) == 0
        assert pairing(S11.d, S11.d) == pytest.approx(-2)
        assert pairing(S11.d, A22) == 0

    def test_pairing_space_mismatch(self):
        with pytest.raises(SpaceMismatch):
            pairing(S11.d, SplitSpace(1, 2).d)

    def test_cocycle_examples(self, rng):
        assert cocycle_s(A22, B22) == pytest.approx(4)
        a = random_skew(SplitSpace(2, 3), rng)
        assert abs(cocycle_s(a, a)) < 1e-12
        assert abs(cocycle_s(SplitSpace(2, 3).d, a)) < 1e-12

    def test_cocycle_identities(self, rng):
        for sp in (SplitSpace(1, 1), SplitSpace(2, 3), SplitSpace(4, 4)):
            assert cocycle_suite(sp, 30, rng) < 1e-10

    def test_nondegenerate_pairing(self, rng):
        from resgrass._kernels import skew_basis

        sp = SplitSpace(2, 2)
        rho = random_predual(sp, rng)
        vals = [pairing(rho, RestrictedElement(sp, b)) for b in skew_basis(sp.dim)]
        assert max(map(abs, vals)) > 0
        zero = [pairing(sp.zeros(), RestrictedElement(sp, b)) for b in skew_basis(sp.dim)]
        assert max(map(abs, zero)) == 0


class TestExtendedBracket:
    def test_examples(self):
        x = extended_bracket(ExtendedAlgebraElement(A22, 1), ExtendedAlgebraElement(A22, 5))
        assert np.allclose(x.a.entries, 0) and x.t == 0
        y = extended_bracket(ExtendedAlgebraElement(A22, 0), ExtendedAlgebraElement(B22, 0))
        assert np.allclose(y.a.entries, commutator(A22, B22).entries) and y.t == pytest.approx(-4)
        z = extended_bracket(ExtendedAlgebraElement(S11.zeros(), 2), ExtendedAlgebraElement(S11.zeros(), 3))
        assert np.allclose(z.a.entries, 0) and z.t == 0

    def test_centrality(self, rng):
        sp = SplitSpace(2, 2)
        a, b = random_skew(sp, rng), random_skew(sp, rng)
        x = extended_bracket(ExtendedAlgebraElement(a, 0), ExtendedAlgebraElement(b, 0))
        y = extended_bracket(ExtendedAlgebraElement(a, 7), ExtendedAlgebraElement(b, -3))
        assert np.array_equal(x.a.entries, y.a.entries) and x.t == y.t

    def test_jacobi(self, rng):
        for sp in (SplitSpace(1, 1), SplitSpace(2, 3), SplitSpace(4, 4)):
            assert jacobi_suite(sp, 30, rng) < 1e-10


class TestCoadjoint:
    def test_coad_examples(self, rng):
        z = coad(A22, ext(S11.zeros(), 0))
        assert np.allclose(z.mu.entries, 0) and z.gamma == 0
        mu = random_predual(S11, rng)
        # [d, d] = 0 leaves the mu-term; with -ad*_A mu = [mu, A] it is [mu, d]
        c = coad(S11.d, ext(mu, 2.5))
        assert np.allclose(c.mu.entries, commutator(mu, S11.d).entries)
        c = coad(A22, ext(S11.zeros(), 1))
        assert np.allclose(c.mu.entries, [[0, 2j], [2j, 0]])

    def test_sigma_examples(self, rng):
        sp = SplitSpace(2, 3)
        assert np.allclose(sigma(sp.identity()).entries, 0)
        assert np.allclose(sigma(random_diagonal_unitary(sp, rng)).entries, 0, atol=1e-14)
        g = UnitaryElement(S11, np.array([[0, 1], [-1, 0]]))
        assert np.allclose(sigma(g).entries, np.diag([-2j, 2j]))
        assert np.allclose(sigma(g).entries, -2 * S11.d.entries)

    def test_affine_examples(self, rng):
        sp = SplitSpace(2, 3)
        x = random_point(sp, rng)
        y = affine_action(sp.identity(), x)
        assert np.allclose(y.mu.entries, x.mu.entries) and y.gamma == x.gamma
        g = random_unitary(sp, rng)
        y = affine_action(g, ext(sp.zeros(), 1.7))
        assert np.allclose(y.mu.entries, 1.7 * sigma(g).entries) and y.gamma == 1.7

    def test_homomorphism(self, rng):
        for sp in (SplitSpace(1, 1), SplitSpace(2, 3)):
            assert sigma_suite(sp, 30, rng) < 1e-10

    def test_fundamental_field_is_derivative_of_action(self, rng):
        sp = SplitSpace(2, 2)
        x = random_point(sp, rng)
        a = random_skew(sp, rng)
        h = 1e-5
        plus = affine_action(expm(h * a), x).mu.entries
        minus = affine_action(expm(-h * a), x).mu.entries
        fd = (plus - minus) / (2 * h)
        assert np.abs(fd - fundamental_field(a, x).mu.entries).max() < 1e-8


class TestGradients:
    def test_linear_field(self, rng):
        sp = SplitSpace(2, 3)
        c = random_skew(sp, rng)
        g = fd_gradient(linear_field(c), random_point(sp, rng))
        assert np.abs(g.entries - c.entries).max() < 1e-8

    def test_constant(self, rng):
        g = fd_gradient(ScalarField(lambda x: 3.0), random_point(SplitSpace(1, 2), rng))
        assert np.abs(g.entries).max() == 0

    def test_quadratic_richardson(self, rng):
        sp = SplitSpace(2, 2)
        c = random_skew(sp, rng)
        x = random_point(sp, rng)
        h = ScalarField(lambda y: pairing(y.mu, c) ** 2)
        g, disc = fd_gradient_richardson(h, x)
        expected = 2 * pairing(x.mu, c) * c.entries
        assert np.abs(g.entries - expected).max() < 1e-7
        assert disc < 1e-6

    def test_non_finite(self, rng):
        with pytest.raises(NonFiniteEvaluation):
            fd_gradient(ScalarField(lambda x: math.nan), random_point(S11, rng))


class TestPoisson:
    def test_linear_fields(self, rng):
        sp = SplitSpace(2, 3)
        a, b = random_skew(sp, rng), random_skew(sp, rng)
        x = random_point(sp, rng)
        got = poisson_bracket(linear_field(a), linear_field(b), x)
        want = pairing(x.mu, commutator(a, b)) - x.gamma * cocycle_s(a, b)
        assert got == pytest.approx(want, abs=1e-7)

    def test_antisymmetry_and_example(self, rng):
        f = linear_field(A22)
        x = random_point(S11, rng)
        assert abs(poisson_bracket(f, f, x)) < 1e-8
        gamma = 1.3
        val = poisson_bracket(linear_field(A22), linear_field(B22), ext(S11.zeros(), gamma))
        assert val == pytest.approx(-4 * gamma, abs=1e-8)

    def test_leibniz(self, rng):
        sp = SplitSpace(1, 2)
        a, b, c = (random_skew(sp, rng) for _ in range(3))
        f = linear_field(a)
        g = ScalarField(lambda y: pairing(y.mu, b) ** 2)
        h = ScalarField(lambda y: pairing(y.mu, c) + 0.5 * pairing(y.mu, c) ** 3)
        gh = ScalarField(lambda y: g(y) * h(y))
        x = random_point(sp, rng)
        lhs = poisson_bracket(f, gh, x)
        rhs = poisson_bracket(f, g, x) * h(x) + g(x) * poisson_bracket(f, h, x)
        assert lhs == pytest.approx(rhs, abs=1e-6 * max(1, abs(lhs)))


class TestHamiltonian:
    def test_constant(self, rng):
        y = hamiltonian_field(ScalarField(lambda x: 1.0), random_point(S11, rng))
        assert np.abs(y.mu.entries).max() == 0 and y.gamma == 0

    def test_linear_at_base(self, rng):
        sp = SplitSpace(2, 2)
        a = random_skew(sp, rng)
        gamma = -0.7
        y = hamiltonian_field(linear_field(a), ext(sp.zeros(), gamma))
        assert np.abs(y.mu.entries + gamma * commutator(a, sp.d).entries).max() < 1e-8

    def test_d_field(self, rng):
        mu = random_predual(S11, rng)
        y = hamiltonian_field(linear_field(S11.d), ext(mu, 2.0))
        assert np.abs(y.mu.entries - commutator(mu, S11.d).entries).max() < 1e-8

    def test_field_pairs_to_bracket(self, rng):
        sp = SplitSpace(2, 2)
        a, b = random_skew(sp, rng), random_skew(sp, rng)
        x = random_point(sp, rng)
        h = ScalarField(lambda y: pairing(y.mu, a) ** 2)
        f = linear_field(b)
        xh = hamiltonian_field(h, x)
        assert pairing(xh.mu, b) == pytest.approx(poisson_bracket(h, f, x), abs=1e-6)

    def test_gamma_preserved(self, rng):
        x = random_point(SplitSpace(2, 1), rng)
        assert affine_action(random_unitary(x.space, rng), x).gamma == x.gamma


class TestIsotropy:
    @pytest.mark.parametrize("npl,nmi", [(1, 1), (2, 3), (3, 3)])
    def test_dimensions_at_base(self, npl, nmi):
        sp = SplitSpace(npl, nmi)
        x = ext(sp.zeros(), 1.0)
        assert len(isotropy_algebra(x)) == npl**2 + nmi**2
        assert len(characteristic_subspace(x)) == 2 * npl * nmi

    def test_zero_point(self):
        sp = SplitSpace(2, 3)
        x = ext(sp.zeros(), 0.0)
        assert len(isotropy_algebra(x)) == 25
        assert len(characteristic_subspace(x)) == 0

    def test_isotropy_annihilates(self, rng):
        sp = SplitSpace(2, 2)
        x = random_point(sp, rng)
        for b in isotropy_algebra(x):
            assert np.abs(fundamental_field(b, x).mu.entries).max() < 1e-9

    def test_tangency(self, rng):
        from resgrass._kernels import skew_basis

        for sp in (SplitSpace(1, 2), SplitSpace(2, 2)):
            x = random_point(sp, rng)
            fields = [fundamental_field(RestrictedElement(sp, b), x).mu for b in skew_basis(sp.dim)]
            p1 = span_projector(characteristic_subspace(x), sp.dim)
            p2 = span_projector(fields, sp.dim)
            assert np.abs(p1 - p2).max() < 1e-9

    def test_hamiltonian_fields_tangent(self, rng):
        sp = SplitSpace(2, 1)
        x = random_point(sp, rng)
        p = span_projector(characteristic_subspace(x), sp.dim)
        from resgrass._kernels import skew_coords

        h = ScalarField(lambda y: pairing(y.mu, random_skew(sp, np.random.default_rng(3))) ** 2)
        v = skew_coords(np.ascontiguousarray(hamiltonian_field(h, x).mu.entries))
        assert np.linalg.norm(v - p @ v) < 1e-7 * max(1, np.linalg.norm(v))


class TestJson:
    def test_roundtrip(self, rng):
        x = random_point(SplitSpace(2, 1), rng)
        y = ExtendedElement.from_json(x.to_json())
        assert np.array_equal(y.mu.entries, x.mu.entries) and y.gamma == x.gamma

    def test_norm_is_sum(self):
        x = ext(S11.d, -3.0)
        assert x.norm() == pytest.approx(5.0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), gamma=st.floats(-5, 5))
def test_orbit_of_base_point(seed, gamma):
    rng = np.random.default_rng(seed)
    sp = SplitSpace(2, 2)
    g = random_unitary(sp, rng)
    y = affine_action(g, ExtendedElement.base(sp, gamma))
    want = gamma * (g.entries @ sp.d.entries @ g.entries.conj().T - sp.d.entries)
    assert np.abs(y.mu.entries - want).max() < 1e-10 * max(1, abs(gamma))

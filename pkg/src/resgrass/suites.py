"""Randomized identity suites. Each returns the maximum error observed."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import SplitSpace, commutator
from .grassmann import act, grassmann_from_basis, phi_gamma, pullback_check
from .lie_poisson import (
    ExtendedAlgebraElement,
    ExtendedElement,
    affine_action,
    cocycle_s,
    extended_bracket,
    sigma,
)
from .sampling import (
    random_columns,
    random_offdiagonal,
    random_predual,
    random_skew,
    random_unitary,
)

PULLBACK_GAMMAS = (1.0, -1.0, 0.5, -0.5, 3.0)


def cocycle_suite(space: SplitSpace, trials: int, rng: np.random.Generator) -> float:
    """Antisymmetry of s and s([A,B],C) + s([B,C],A) + s([C,A],B) = 0."""
    err = 0.0
    for _ in range(trials):
        a, b, c = (random_skew(space, rng) for _ in range(3))
        err = max(err, abs(cocycle_s(a, b) + cocycle_s(b, a)))
        cyc = (
            cocycle_s(commutator(a, b), c)
            + cocycle_s(commutator(b, c), a)
            + cocycle_s(commutator(c, a), b)
        )
        err = max(err, abs(cyc))
    return err


def _ext(space: SplitSpace, rng: np.random.Generator) -> ExtendedAlgebraElement:
    return ExtendedAlgebraElement(random_skew(space, rng), float(rng.standard_normal()))


def _ext_add(*xs: ExtendedAlgebraElement) -> tuple[np.ndarray, float]:
    return sum(x.a.entries for x in xs), sum(x.t for x in xs)


def jacobi_suite(space: SplitSpace, trials: int, rng: np.random.Generator) -> float:
    err = 0.0
    for _ in range(trials):
        x, y, z = (_ext(space, rng) for _ in range(3))
        terms = (
            extended_bracket(x, extended_bracket(y, z)),
            extended_bracket(y, extended_bracket(z, x)),
            extended_bracket(z, extended_bracket(x, y)),
        )
        mat, t = _ext_add(*terms)
        err = max(err, float(np.abs(mat).max()), abs(t))
    return err


def sigma_suite(space: SplitSpace, trials: int, rng: np.random.Generator) -> float:
    """sigma(g1 g2) = g1 sigma(g2) g1* + sigma(g1), and g1.(g2.x) = (g1 g2).x."""
    err = 0.0
    for _ in range(trials):
        g1, g2 = random_unitary(space, rng), random_unitary(space, rng)
        g12 = g1 @ g2
        lhs = sigma(g12).entries
        rhs = g1.entries @ sigma(g2).entries @ g1.entries.conj().T + sigma(g1).entries
        err = max(err, float(np.abs(lhs - rhs).max()))
        x = ExtendedElement(random_predual(space, rng), float(rng.standard_normal()))
        seq = affine_action(g1, affine_action(g2, x))
        once = affine_action(g12, x)
        err = max(err, float(np.abs(seq.mu.entries - once.mu.entries).max()), abs(seq.gamma - once.gamma))
    return err


def _gamma(rng: np.random.Generator) -> float:
    g = float(rng.uniform(0.25, 3.0))
    return g if rng.random() < 0.5 else -g


def equivariance_suite(space: SplitSpace, trials: int, rng: np.random.Generator) -> float:
    """Phi_gamma(g . W) = g . Phi_gamma(W)."""
    err = 0.0
    for _ in range(trials):
        k = int(rng.integers(0, space.dim + 1))
        w = grassmann_from_basis(random_columns(space.dim, k, rng), space)
        g = random_unitary(space, rng)
        gamma = _gamma(rng)
        lhs = phi_gamma(act(g, w), gamma)
        rhs = affine_action(g, phi_gamma(w, gamma))
        err = max(err, float(np.abs(lhs.mu.entries - rhs.mu.entries).max()))
    return err


def pullback_suite(space: SplitSpace, trials: int, rng: np.random.Generator) -> float:
    """Orbit form at (0, gamma) against (gamma/2) Omega_Gr, for every gamma in PULLBACK_GAMMAS."""
    err = 0.0
    for _ in range(trials):
        a, b = random_offdiagonal(space, rng), random_offdiagonal(space, rng)
        for gamma in PULLBACK_GAMMAS:
            rep = pullback_check(gamma, a, b)
            err = max(err, abs(rep.lhs - rep.rhs))
    return err


@dataclass(frozen=True)
class Identity:
    name: str
    run: Callable[[SplitSpace, int, np.random.Generator], float]
    threshold: float


IDENTITIES: tuple[Identity, ...] = (
    Identity("cocycle", cocycle_suite, 1e-10),
    Identity("jacobi", jacobi_suite, 1e-10),
    Identity("sigma_homomorphism", sigma_suite, 1e-10),
    Identity("equivariance", equivariance_suite, 1e-10),
    Identity("pullback", pullback_suite, 1e-12),
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    size: str
    max_error: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_error < self.threshold

    def to_json(self) -> dict:
        return {
            "identity": self.name,
            "size": self.size,
            "max_error": self.max_error,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def run_identities(
    sizes: Sequence[SplitSpace],
    trials: int,
    seed: int,
    identities: Sequence[Identity] = IDENTITIES,
) -> list[SuiteResult]:
    """Every identity on every size; each (identity, size) gets its own stream."""
    results = []
    for i, ident in enumerate(identities):
        for j, space in enumerate(sizes):
            rng = np.random.default_rng([seed, i, j])
            err = ident.run(space, trials, rng)
            results.append(SuiteResult(ident.name, str(space), err, ident.threshold))
    return results

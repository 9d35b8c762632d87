"""Trace pairing, the Schwinger cocycle, the centrally extended bracket and the
Lie-Poisson structure on the extended predual (mu, gamma).

Sign conventions.  The group acts by

    g . (mu, gamma) = (g mu g* + gamma sigma(g), gamma),  sigma(g) = g d g* - d,

and -ad*_A mu = [mu, A] is read off the trace pairing.  With these, the
infinitesimal action, the coadjoint action of the algebra and the Hamiltonian
vector fields all reduce to commutators with the shifted element mu + gamma d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_TOL,
    BlockOperator,
    PredualElement,
    RestrictedElement,
    SplitSpace,
    Tolerances,
    UnitaryElement,
    check_same_space,
    commutator,
    d_commutator,
    operator_from_json,
    operator_to_json,
    predual_norm,
)
from .errors import NonFiniteEvaluation, ShapeMismatch


@dataclass(frozen=True)
class ExtendedElement:
    """Point (mu, gamma) of the centrally extended predual."""

    mu: PredualElement
    gamma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", PredualElement.of(self.mu))
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def space(self) -> SplitSpace:
        return self.mu.space

    @classmethod
    def base(cls, space: SplitSpace, gamma: float) -> "ExtendedElement":
        """The point (0, gamma)."""
        return cls(PredualElement(space, np.zeros((space.dim, space.dim))), gamma)

    def norm(self) -> float:
        """Sum norm predual_norm(mu) + |gamma|."""
        return predual_norm(self.mu) + abs(self.gamma)

    def shifted(self) -> BlockOperator:
        """mu + gamma d; every infinitesimal operation is a commutator with it."""
        return self.mu + self.gamma * self.space.d

    def to_json(self) -> dict:
        return {"mu": operator_to_json(self.mu), "gamma": self.gamma}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "ExtendedElement":
        try:
            return cls(PredualElement.of(operator_from_json(data["mu"])), float(data["gamma"]))
        except (KeyError, TypeError) as exc:
            raise ShapeMismatch(f"malformed ExtendedElement JSON: {exc}") from exc


@dataclass(frozen=True)
class ExtendedAlgebraElement:
    a: RestrictedElement
    t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", RestrictedElement.of(self.a))
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True)
class ScalarField:
    """Smooth function on the extended predual; derivatives are numerical."""

    eval: Callable[[ExtendedElement], float]
    fd_step: float = 1e-6

    def __call__(self, x: ExtendedElement) -> float:
        return self.eval(x)


def _real_trace(product: np.ndarray, scale: float) -> float:
    tr = np.trace(product)
    assert abs(tr.imag) <= 1e-12 * max(1.0, scale), f"trace not real: {tr}"
    return float(tr.real)


def pairing(rho: BlockOperator, a: BlockOperator) -> float:
    """<rho, a> = Re Tr(rho a); the imaginary part vanishes for skew inputs."""
    check_same_space(rho, a)
    scale = float(np.linalg.norm(rho.entries) * np.linalg.norm(a.entries))
    return _real_trace(rho.entries @ a.entries, scale)


def cocycle_s(a: BlockOperator, b: BlockOperator) -> float:
    """s(A, B) = Tr(A [d, B])."""
    check_same_space(a, b)
    db = d_commutator(b)
    scale = float(np.linalg.norm(a.entries) * np.linalg.norm(db.entries))
    return _real_trace(a.entries @ db.entries, scale)


def extended_bracket(x: ExtendedAlgebraElement, y: ExtendedAlgebraElement) -> ExtendedAlgebraElement:
    """[(A, a), (B, b)] = ([A, B], -s(A, B))."""
    return ExtendedAlgebraElement(
        RestrictedElement.of(commutator(x.a, y.a)), -cocycle_s(x.a, y.a)
    )


def extended_pairing(x: ExtendedElement, y: ExtendedAlgebraElement) -> float:
    return pairing(x.mu, y.a) + x.gamma * y.t


def coad(a: BlockOperator, x: ExtendedElement) -> ExtendedElement:
    """Coadjoint action of A: ([mu, A] + gamma [d, A], 0)."""
    check_same_space(a, x.mu)
    return ExtendedElement(PredualElement.of(commutator(x.shifted(), a)), 0.0)


def fundamental_field(a: BlockOperator, x: ExtendedElement) -> ExtendedElement:
    """d/dt at 0 of exp(tA) . x, i.e. ([A, mu + gamma d], 0)."""
    check_same_space(a, x.mu)
    return ExtendedElement(PredualElement.of(commutator(a, x.shifted())), 0.0)


def sigma(g: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> PredualElement:
    """g d g* - d."""
    g = UnitaryElement.of(g, tol)
    d = g.space.d.entries
    out = g.entries @ d @ g.entries.conj().T - d
    rho = PredualElement(g.space, out)
    assert math.isfinite(predual_norm(rho))
    return rho


def affine_action(g: BlockOperator, x: ExtendedElement, tol: Tolerances = DEFAULT_TOL) -> ExtendedElement:
    """g . (mu, gamma) = (g mu g* + gamma sigma(g), gamma)."""
    g = UnitaryElement.of(g, tol)
    check_same_space(g, x.mu)
    u = g.entries
    conj = u @ x.mu.entries @ u.conj().T
    return ExtendedElement(PredualElement(g.space, conj + x.gamma * sigma(g, tol).entries), x.gamma)


# ---------------------------------------------------------------------------
# derivatives, bracket, Hamiltonian fields
# ---------------------------------------------------------------------------

def _shift(x: ExtendedElement, direction: np.ndarray, eps: float) -> ExtendedElement:
    return ExtendedElement(PredualElement(x.space, x.mu.entries + eps * direction), x.gamma)


def fd_gradient(h: ScalarField, x: ExtendedElement, step: float | None = None) -> RestrictedElement:
    """Partial derivative D_mu h at x as an element of the algebra.

    Central differences along the orthonormal real basis of the predual
    determine the pairings <delta, G>; since <delta, G> = -Re Tr(delta* G),
    the coordinates of G are the negated directional derivatives.
    """
    eps = h.fd_step if step is None else step
    n = x.space.dim
    basis = _kernels.skew_basis(n)
    slopes = np.empty(n * n)
    for i, delta in enumerate(basis):
        up = h(_shift(x, delta, eps))
        down = h(_shift(x, delta, -eps))
        if not (math.isfinite(up) and math.isfinite(down)):
            raise NonFiniteEvaluation(f"non-finite value along basis direction {i}")
        slopes[i] = (up - down) / (2.0 * eps)
    return RestrictedElement(x.space, _kernels.skew_from_coords(-slopes, n))


def fd_gradient_richardson(h: ScalarField, x: ExtendedElement) -> tuple[RestrictedElement, float]:
    """Richardson-extrapolated gradient and the step-halving discrepancy."""
    coarse = fd_gradient(h, x, h.fd_step)
    fine = fd_gradient(h, x, h.fd_step / 2)
    extrapolated = (4.0 * fine.entries - coarse.entries) / 3.0
    return RestrictedElement(x.space, extrapolated), float(np.linalg.norm(fine.entries - coarse.entries))


def poisson_bracket(f: ScalarField, g: ScalarField, x: ExtendedElement) -> float:
    """{f, g}(mu, gamma) = <mu, [Df, Dg]> - gamma s(Df, Dg)."""
    gf = fd_gradient(f, x)
    gg = fd_gradient(g, x)
    return pairing(x.mu, commutator(gf, gg)) - x.gamma * cocycle_s(gf, gg)


def hamiltonian_field(h: ScalarField, x: ExtendedElement) -> ExtendedElement:
    """X_h(mu, gamma) = ([mu, Dh] - gamma [Dh, d], 0).

    With this sign, <X_h, Df> = {h, f} for every f.
    """
    return coad(fd_gradient(h, x), x)


def linear_field(a: BlockOperator, fd_step: float = 1e-6) -> ScalarField:
    """mu -> <mu, A>."""
    return ScalarField(lambda x: pairing(x.mu, a), fd_step)


# ---------------------------------------------------------------------------
# isotropy and characteristic subspaces
# ---------------------------------------------------------------------------

def _ad_svd(x: ExtendedElement, tol: Tolerances):
    n = x.space.dim
    mat = _kernels.ad_matrix(np.ascontiguousarray(x.shifted().entries))
    u, sv, vh = np.linalg.svd(mat)
    top = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > tol.rank * top)) if top > 0 else 0
    return n, u, vh, rank


def isotropy_algebra(x: ExtendedElement, tol: Tolerances = DEFAULT_TOL) -> list[RestrictedElement]:
    """Orthonormal real basis of {X in u : [X, mu + gamma d] = 0}."""
    n, _, vh, rank = _ad_svd(x, tol)
    return [RestrictedElement(x.space, _kernels.skew_from_coords(row, n)) for row in vh[rank:]]


def characteristic_subspace(x: ExtendedElement, tol: Tolerances = DEFAULT_TOL) -> list[PredualElement]:
    """Orthonormal real basis of the tangent space {[X, mu + gamma d] : X in u}."""
    n, u, _, rank = _ad_svd(x, tol)
    return [PredualElement(x.space, _kernels.skew_from_coords(np.ascontiguousarray(u[:, j]), n)) for j in range(rank)]


def span_projector(elements: list[BlockOperator], dim: int) -> np.ndarray:
    """Orthogonal projector, in real u(dim) coordinates, onto the span of skew elements."""
    if not elements:
        return np.zeros((dim * dim, dim * dim))
    coords = np.stack([_kernels.skew_coords(np.ascontiguousarray(e.entries)) for e in elements], axis=1)
    q, sv, _ = np.linalg.svd(coords, full_matrices=False)
    rank = int(np.sum(sv > 1e-9 * sv[0])) if sv.size and sv[0] > 0 else 0
    q = q[:, :rank]
    return q @ q.T

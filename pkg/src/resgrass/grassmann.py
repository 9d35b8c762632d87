"""Points of the (truncated) restricted Grassmannian stored as projectors,
the embedding W -> (2 i gamma (p_W - p+), gamma) into the extended predual,
the Kaehler form at H+, geodesics and a principal-angle logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

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
    expm,
    operator_from_json,
    operator_to_json,
)
from .errors import (
    DimensionMismatch,
    NotReachable,
    NotTransverse,
    RankDeficient,
    ShapeMismatch,
    SpaceMismatch,
    ZeroGamma,
)
from .lie_poisson import (
    ExtendedAlgebraElement,
    ExtendedElement,
    cocycle_s,
    extended_bracket,
    extended_pairing,
)

# principal angles closer than this to pi/2 are treated as the cut locus
ANGLE_CUTOFF = math.pi / 2 - 1e-8


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    projector: BlockOperator
    dim_W: int

    @classmethod
    def from_projector(cls, p: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> "GrassmannPoint":
        arr = p.entries
        if np.abs(arr - arr.conj().T).max() > tol.unit or np.abs(arr @ arr - arr).max() > tol.unit:
            raise ShapeMismatch("not an orthogonal projector")
        tr = float(np.trace(arr).real)
        dim = int(round(tr))
        if abs(tr - dim) >= tol.unit:
            raise ShapeMismatch(f"projector trace {tr} is not an integer")
        return cls(BlockOperator(p.space, (arr + arr.conj().T) / 2), dim)

    @classmethod
    def h_plus(cls, space: SplitSpace) -> "GrassmannPoint":
        return cls(BlockOperator(space, space.p_plus), space.n_plus)

    @property
    def space(self) -> SplitSpace:
        return self.projector.space

    def basis(self) -> np.ndarray:
        """Orthonormal columns spanning W."""
        w, v = np.linalg.eigh(self.projector.entries)
        return v[:, w.size - self.dim_W:]

    def to_json(self) -> dict:
        return {"projector": operator_to_json(self.projector)}

    @classmethod
    def from_json(cls, data: dict[str, Any], space: SplitSpace | None = None) -> "GrassmannPoint":
        if "projector" in data:
            return cls.from_projector(operator_from_json(data["projector"]))
        if "columns" in data:
            cols = np.asarray(data["columns"]["re"], dtype=float) + 1j * np.asarray(data["columns"]["im"], dtype=float)
            if space is None:
                space = SplitSpace(int(data["n_plus"]), int(data["n_minus"]))
            return grassmann_from_basis(cols, space)
        raise ShapeMismatch("GrassmannPoint JSON needs 'projector' or 'columns'")


def grassmann_from_basis(columns, space: SplitSpace, tol: Tolerances = DEFAULT_TOL) -> GrassmannPoint:
    cols = np.asarray(columns, dtype=complex)
    if cols.ndim == 1:
        cols = cols[:, None]
    if cols.shape[0] != space.dim:
        raise ShapeMismatch(f"columns need {space.dim} rows, got {cols.shape[0]}")
    k = cols.shape[1]
    if k:
        sv = np.linalg.svd(cols, compute_uv=False)
        if sv[-1] <= tol.sing * max(1.0, sv[0]):
            raise RankDeficient(f"smallest singular value {sv[-1]:.3e}")
        q, _ = np.linalg.qr(cols)
        p = q @ q.conj().T
    else:
        p = np.zeros((space.dim, space.dim), dtype=complex)
    return GrassmannPoint(BlockOperator(space, (p + p.conj().T) / 2), k)


def component_index(w: GrassmannPoint) -> int:
    """dim W - n+ (finite stand-in for the Fredholm index of p+|_W)."""
    return w.dim_W - w.space.n_plus


def act(g: BlockOperator, w: GrassmannPoint, tol: Tolerances = DEFAULT_TOL) -> GrassmannPoint:
    g = UnitaryElement.of(g, tol)
    check_same_space(g, w.projector)
    p = g.entries @ w.projector.entries @ g.entries.conj().T
    return GrassmannPoint(BlockOperator(w.space, (p + p.conj().T) / 2), w.dim_W)


def phi_gamma(w: GrassmannPoint, gamma: float) -> ExtendedElement:
    """W -> (2 i gamma (p_W - p+), gamma)."""
    if gamma == 0:
        raise ZeroGamma("gamma must be nonzero")
    mu = 2j * gamma * (w.projector.entries - w.space.p_plus)
    return ExtendedElement(PredualElement(w.space, mu), gamma)


# ---------------------------------------------------------------------------
# symplectic forms
# ---------------------------------------------------------------------------

def omega_gr(x, y) -> float:
    """2 Im Tr(X* Y) for X, Y in S2(H+, H-)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ShapeMismatch(f"{x.shape} vs {y.shape}")
    return float(2.0 * np.trace(x.conj().T @ y).imag)


def omega_gr_hom(a: BlockOperator, b: BlockOperator) -> float:
    """-2 s(A, B)."""
    return -2.0 * cocycle_s(a, b)


def tangent_at_base(a: BlockOperator) -> np.ndarray:
    """Lower off-diagonal block A-+ used as the tangent vector at H+."""
    return np.array(a.mp)


def orbit_form(x: ExtendedElement, a: BlockOperator, b: BlockOperator) -> float:
    """Orbit symplectic form on the tangent vectors generated by A and B:
    <(mu, gamma), [(A, 0), (B, 0)]>."""
    bracket = extended_bracket(ExtendedAlgebraElement(a, 0.0), ExtendedAlgebraElement(b, 0.0))
    return extended_pairing(x, bracket)


@dataclass(frozen=True)
class PullbackReport:
    lhs: float
    rhs: float


def pullback_check(gamma: float, a: BlockOperator, b: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> PullbackReport:
    """Orbit form at (0, gamma) against (gamma/2) Omega_Gr on off-diagonal A, B."""
    if gamma == 0:
        raise ZeroGamma("gamma must be nonzero")
    space = check_same_space(a, b)
    for op in (a, b):
        if max(np.abs(op.pp).max(), np.abs(op.mm).max()) > tol.herm * max(1.0, np.abs(op.entries).max()):
            raise NotTransverse("pullback_check expects off-diagonal A and B")
    lhs = orbit_form(ExtendedElement.base(space, gamma), a, b)
    rhs = 0.5 * gamma * omega_gr_hom(a, b)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs)), (lhs, rhs)
    return PullbackReport(lhs, rhs)


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

def _transverse_defect(w: GrassmannPoint, x: BlockOperator) -> float:
    p = w.projector.entries
    q = np.eye(w.space.dim) - p
    xe = x.entries
    return max(np.linalg.norm(p @ xe @ p, 2), np.linalg.norm(q @ xe @ q, 2))


def geodesic(w: GrassmannPoint, x: BlockOperator, t: float, tol: Tolerances = DEFAULT_TOL) -> GrassmannPoint:
    """exp(tX) . W for X in the complement m_W of the isotropy algebra of W."""
    check_same_space(w.projector, x)
    x = RestrictedElement.of(x, tol)
    defect = _transverse_defect(w, x)
    if defect > tol.herm * max(1.0, float(np.linalg.norm(x.entries, 2))):
        raise NotTransverse(f"X has a component along the isotropy algebra of W ({defect:.3e})")
    return act(expm(t * x, tol), w, tol)


def principal_angles(w1: GrassmannPoint, w2: GrassmannPoint) -> np.ndarray:
    q1, q2 = w1.basis(), w2.basis()
    m = q1.conj().T @ q2
    _, c, vh = np.linalg.svd(m)
    y2 = q2 @ vh.conj().T
    r = y2 - w1.projector.entries @ y2
    s = np.linalg.norm(r, axis=0)
    return np.sort(np.arctan2(s, c))


def grassmann_log(w1: GrassmannPoint, w2: GrassmannPoint, tol: Tolerances = DEFAULT_TOL) -> RestrictedElement:
    """X in m_{W1} with exp(X) . W1 = W2, from principal vectors.

    With Q1* Q2 = U cos(theta) V*, Y1 = Q1 U and Y2 = Q2 V, the residual
    Y2 - p_{W1} Y2 = Z sin(theta) has orthogonal columns; X rotates each
    plane span(y1_j, z_j) by theta_j.
    """
    if w1.space != w2.space:
        raise SpaceMismatch(f"{w1.space} vs {w2.space}")
    if w1.dim_W != w2.dim_W:
        raise DimensionMismatch(f"dim W1 = {w1.dim_W}, dim W2 = {w2.dim_W}")
    space = w1.space
    if w1.dim_W == 0:
        return RestrictedElement(space, np.zeros((space.dim, space.dim)))
    q1, q2 = w1.basis(), w2.basis()
    u, c, vh = np.linalg.svd(q1.conj().T @ q2)
    y1 = q1 @ u
    y2 = q2 @ vh.conj().T
    r = y2 - w1.projector.entries @ y2
    s = np.linalg.norm(r, axis=0)
    theta = np.arctan2(s, c)
    if np.any(theta >= ANGLE_CUTOFF):
        raise NotReachable(f"principal angle {theta.max():.12f} at the cut locus")
    moving = s > 1e-300
    z = np.zeros_like(r)
    z[:, moving] = r[:, moving] / s[moving]
    x = (z * theta) @ y1.conj().T
    x = x - x.conj().T
    return RestrictedElement(space, x)

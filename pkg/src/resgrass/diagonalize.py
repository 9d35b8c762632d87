"""Block diagonalization of restricted elements through the operator Riccati
equation, the V0 neighbourhood test, the Hinkkanen coefficient test, the
Carey invariance conditions and the spectral subalgebra of ad(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_TOL,
    BlockOperator,
    PredualElement,
    RestrictedElement,
    Tolerances,
    UnitaryElement,
    d_commutator,
    polar,
    schatten_norm,
)
from .errors import BadParameters, GapViolation, NoConvergence
from .grassmann import GrassmannPoint


@dataclass
class RiccatiReport:
    k: np.ndarray
    residual: float
    iterations: int
    gap: float
    history: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "k": {"re": self.k.real.tolist(), "im": self.k.imag.tolist()},
            "residual": self.residual,
            "iterations": self.iterations,
            "gap": self.gap,
        }


def _skew_eig(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a skew-Hermitian block: block = V diag(lam) V*."""
    herm = -0.5j * (block - block.conj().T)
    w, v = np.linalg.eigh(herm)
    return 1j * w, v


def spectral_gap(rho: BlockOperator) -> float:
    """Distance between the spectra of rho++ and rho--."""
    lam, _ = _skew_eig(np.asarray(rho.pp))
    mu, _ = _skew_eig(np.asarray(rho.mm))
    return float(_kernels.min_pair_distance(lam, mu))


def riccati_residual(rho: BlockOperator, k: np.ndarray) -> float:
    """|| k rho+- k + k rho++ - rho-- k - rho-+ ||_2."""
    res = k @ rho.pm @ k + k @ rho.pp - rho.mm @ k - rho.mp
    return float(np.linalg.norm(res))


def riccati_solve(
    rho: BlockOperator,
    tol: float = 1e-12,
    max_iter: int = 200,
    force: bool = False,
) -> RiccatiReport:
    """Solve k rho+- k + k rho++ - rho-- k = rho-+ by fixed-point iteration.

    Each step solves the Sylvester equation k rho++ - rho-- k = rho-+ - k rho+- k
    exactly in the eigenbases of the (normal) diagonal blocks.
    """
    rho = RestrictedElement.of(rho)
    gap = spectral_gap(rho)
    off = schatten_norm(rho.pm, 2)
    if not force and not (gap > 0 and off < gap / 2):
        raise GapViolation(f"need ||rho+-||_2 = {off:.6g} < gap/2 = {gap / 2:.6g}")

    lam, up = _skew_eig(np.asarray(rho.pp))
    mu, um = _skew_eig(np.asarray(rho.mm))
    rhs0 = np.asarray(rho.mp)
    pm = np.asarray(rho.pm)
    k = np.zeros_like(rhs0)
    history: list[float] = []
    residual = math.inf
    for it in range(1, max_iter + 1):
        c = um.conj().T @ (rhs0 - k @ pm @ k) @ up
        k = um @ _kernels.sylvester_divide(np.ascontiguousarray(c), lam, mu) @ up.conj().T
        residual = riccati_residual(rho, k)
        history.append(residual)
        if not math.isfinite(residual):
            break
        if residual < tol:
            return RiccatiReport(k, residual, it, gap, history)
    raise NoConvergence(f"residual {residual:.3e} after {len(history)} iterations")


@dataclass
class DiagonalizationResult:
    u: UnitaryElement
    diag: RestrictedElement
    k: np.ndarray
    report: RiccatiReport


def _spectrum(x: np.ndarray) -> np.ndarray:
    lam, _ = _skew_eig(x)
    return np.sort(lam.imag)


def block_diagonalize(
    rho: BlockOperator,
    tol: Tolerances = DEFAULT_TOL,
    riccati_tol: float = 1e-12,
    max_iter: int = 200,
    force: bool = False,
) -> DiagonalizationResult:
    """u unitary with [d, u* rho u] = 0, via g = (1, k*; k, -1) and g = u s."""
    rho = RestrictedElement.of(rho, tol)
    space = rho.space
    report = riccati_solve(rho, riccati_tol, max_iter, force)
    k = report.k
    g = BlockOperator.from_blocks(space, pp=np.eye(space.n_plus), pm=k.conj().T, mp=k, mm=-np.eye(space.n_minus))
    g2 = g @ g
    assert schatten_norm(d_commutator(g2), 2) < 1e-10, "g^2 does not commute with d"
    u, s = polar(g, tol)
    assert schatten_norm(d_commutator(s), 2) < 1e-10, "|g| does not commute with d"
    conj = u.entries.conj().T @ rho.entries @ u.entries
    diag = RestrictedElement(space, (conj - conj.conj().T) / 2)
    off = schatten_norm(d_commutator(diag), 2)
    assert off < 1e-8, f"||[d, u* rho u]||_2 = {off:.3e}"
    spec_err = float(np.abs(_spectrum(diag.entries) - _spectrum(rho.entries)).max())
    assert spec_err < 1e-10, f"spectrum moved by {spec_err:.3e}"
    return DiagonalizationResult(u, diag, k, report)


def in_neighborhood_v0(rho: BlockOperator) -> bool:
    """Spectra of rho++ / rho-- within 1/3 of +i / -i, off-diagonal S2 norms < 2/3."""
    lam, _ = _skew_eig(np.asarray(rho.pp))
    mu, _ = _skew_eig(np.asarray(rho.mm))
    return bool(
        np.all(np.abs(lam - 1j) < 1 / 3)
        and np.all(np.abs(mu + 1j) < 1 / 3)
        and schatten_norm(rho.pm, 2) < 2 / 3
        and schatten_norm(rho.mp, 2) < 2 / 3
    )


@dataclass(frozen=True)
class HinkkanenReport:
    ok: bool
    first_violation: tuple[int, int] | None


def hinkkanen_check(rho: BlockOperator, order=None, t: float = 0.5, s: float = 0.01) -> HinkkanenReport:
    """Matrix-coefficient hypotheses of the Hinkkanen diagonalization criterion.

    ``order`` lists standard basis indices in the order they become e_1, e_2, ...
    Violations are reported 1-based, matching the indices in the bound
    |rho_mn|^2 <= s^2 / (mn)^2 |rho_mm rho_nn|.
    """
    if not (0 < t < 1) or not (0 < s <= 3 * (1 - t) / 100):
        raise BadParameters(f"need 0 < t < 1 and 0 < s <= 3(1 - t)/100, got t={t}, s={s}")
    n = rho.space.dim
    perm = np.arange(n) if order is None else np.asarray(order, dtype=int)
    if sorted(perm.tolist()) != list(range(n)):
        raise BadParameters("order must be a permutation of the basis indices")
    absr = np.ascontiguousarray(np.abs(rho.entries[np.ix_(perm, perm)]))
    m, q = _kernels.hinkkanen_scan(absr, float(t), float(s))
    if m < 0:
        return HinkkanenReport(True, None)
    return HinkkanenReport(False, (int(m) + 1, int(q) + 1))


@dataclass(frozen=True)
class CareyReport:
    commutes: bool
    invariant: bool


def carey_conditions(rho: BlockOperator, w: GrassmannPoint) -> CareyReport:
    p = w.projector.entries
    r = rho.entries
    commutes = float(np.linalg.norm(p @ r - r @ p)) < 1e-10
    invariant = float(np.linalg.norm((np.eye(p.shape[0]) - p) @ r @ p)) < 1e-10
    # for normal rho, invariance of W and commutation with p_W coincide
    assert commutes == invariant, (commutes, invariant)
    return CareyReport(commutes, invariant)


# ---------------------------------------------------------------------------
# spectral subalgebra
# ---------------------------------------------------------------------------

@dataclass
class SubalgebraChecks:
    bracket_closed: bool
    intersection_ok: bool
    sum_ok: bool


@dataclass
class SubalgebraReport:
    h0_basis: list[np.ndarray]
    k_basis: list[np.ndarray]
    checks: SubalgebraChecks

    def to_json(self) -> dict:
        return {
            "h0_dim": len(self.h0_basis),
            "k_dim": len(self.k_basis),
            "checks": {
                "bracket_closed": self.checks.bracket_closed,
                "intersection_ok": self.checks.intersection_ok,
                "sum_ok": self.checks.sum_ok,
            },
        }


def _orth(cols: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    u, sv, _ = np.linalg.svd(cols, full_matrices=False)
    if sv[0] == 0:
        return u[:, :0]
    return u[:, : int(np.sum(sv > rel * sv[0]))]


def _vec(mats: list[np.ndarray], n: int) -> np.ndarray:
    if not mats:
        return np.zeros((n * n, 0), dtype=complex)
    return np.stack([m.reshape(-1) for m in mats], axis=1)


def _intersection(a: np.ndarray, b: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of span(a) ∩ span(b) for orthonormal a, b."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return a[:, :0]
    u, sv, _ = np.linalg.svd(a.conj().T @ b)
    return a @ u[:, : int(np.sum(sv > 1 - rel))]


def _same_span(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if a.shape[1] != b.shape[1]:
        return False
    return bool(np.abs(a @ a.conj().T - b @ b.conj().T).max() < tol) if a.shape[1] else True


def spectral_subalgebra(
    a: BlockOperator,
    tol: Tolerances = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    samples: int = 50,
) -> SubalgebraReport:
    """k = Ran E([0, inf)) for -i ad(a) and h0 = ker ad(a), with the three
    structural checks on gl(N)."""
    n = a.space.dim
    lam, v = _skew_eig(a.entries)
    theta = lam.imag
    rng = np.random.default_rng(0) if rng is None else rng
    scale = max(1.0, float(np.abs(theta).max()))
    cut = tol.rank * scale

    k_basis: list[np.ndarray] = []
    h0_basis: list[np.ndarray] = []
    for j in range(n):
        for l in range(n):
            diff = theta[j] - theta[l]
            if diff >= -cut:
                k_basis.append(np.outer(v[:, j], v[:, l].conj()))
            if abs(diff) <= cut and j <= l:
                ej, el = v[:, j], v[:, l]
                if j == l:
                    h0_basis.append(1j * np.outer(ej, ej.conj()))
                else:
                    e = np.outer(ej, el.conj())
                    h0_basis.append((e - e.conj().T) / math.sqrt(2))
                    h0_basis.append(1j * (e + e.conj().T) / math.sqrt(2))

    kmat = _orth(_vec(k_basis, n))
    # conjugation relative to the real form u: X -> -X*
    kbar = _orth(_vec([-m.conj().T for m in k_basis], n))

    closed = True
    for _ in range(samples):
        c1 = kmat @ (rng.standard_normal(kmat.shape[1]) + 1j * rng.standard_normal(kmat.shape[1]))
        c2 = kmat @ (rng.standard_normal(kmat.shape[1]) + 1j * rng.standard_normal(kmat.shape[1]))
        x1, x2 = c1.reshape(n, n), c2.reshape(n, n)
        br = (x1 @ x2 - x2 @ x1).reshape(-1)
        resid = br - kmat @ (kmat.conj().T @ br)
        if np.linalg.norm(resid) > 1e-10 * max(1.0, float(np.linalg.norm(br))):
            closed = False
            break

    h0c = _orth(_vec(h0_basis, n))
    inter = _intersection(kmat, kbar)
    intersection_ok = _same_span(inter, h0c, 1e-9)
    sum_ok = _orth(np.concatenate([kmat, kbar], axis=1)).shape[1] == n * n

    return SubalgebraReport(h0_basis, k_basis, SubalgebraChecks(closed, intersection_ok, sum_ok))

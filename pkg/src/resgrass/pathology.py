"""Finite-size counterexample machinery: an unbounded family in the unitary
group, the cone/norm comparison, and the Cartan non-conjugacy witness.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    BlockOperator,
    PredualElement,
    RestrictedElement,
    SplitSpace,
    Tolerances,
    UnitaryElement,
    assemble_offdiagonal,
    exp_offdiagonal,
    predual_norm,
    restricted_norm,
    schatten_norm,
)
from .errors import BadStructure, RankTooLarge
from .sampling import random_cone_element


# ---------------------------------------------------------------------------
# unbounded family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnboundedReport:
    n: int
    res_norm: float
    lower_bound: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class UnboundedFamily:
    rho_n: RestrictedElement
    u_n: UnitaryElement
    report: UnboundedReport


def build_unbounded_family(n: int, space: SplitSpace, tol: Tolerances = DEFAULT_TOL) -> UnboundedFamily:
    """a_n = (pi/2) v_n with v_n the partial isometry e-_j -> e+_j, j < n."""
    if n < 1 or n > min(space.n_plus, space.n_minus):
        raise RankTooLarge(f"n = {n} outside 1..{min(space.n_plus, space.n_minus)}")
    v = np.zeros((space.n_plus, space.n_minus))
    v[np.arange(n), np.arange(n)] = 1.0
    a = 0.5 * math.pi * v
    rho = assemble_offdiagonal(a, space)
    u = exp_offdiagonal(a, space, tol)
    report = UnboundedReport(n, restricted_norm(u), math.sqrt(n))
    assert report.res_norm >= report.lower_bound, report
    return UnboundedFamily(rho, u, report)


def unbounded_closed_form(n: int) -> float:
    """Restricted norm of exp(rho_n): 1 + 2 sqrt(2n)."""
    return 1.0 + 2.0 * math.sqrt(2.0 * n)


# ---------------------------------------------------------------------------
# cone demo
# ---------------------------------------------------------------------------

def cone_ratio(rho: BlockOperator) -> float:
    """predual_norm / s1_norm."""
    return predual_norm(rho) / schatten_norm(rho, 1)


def balanced_rank_one(space: SplitSpace) -> PredualElement:
    """rho = -i psi psi* with psi = (e+_1 + e-_1)/sqrt 2; its ratio is 2."""
    psi = np.zeros(space.dim, dtype=complex)
    psi[0] = psi[space.n_plus] = 1 / math.sqrt(2.0)
    return PredualElement(space, -1j * np.outer(psi, psi.conj()))


@dataclass
class ConeDemo:
    max_ratio: float
    witness: PredualElement
    witness_ratio: float

    def to_json(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "witness_ratio": self.witness_ratio,
            "upper_constant": 1 + math.sqrt(2.0),
        }


def cone_span_demo(samples: int, space: SplitSpace, seed: int) -> ConeDemo:
    """Largest observed predual/s1 ratio over random cone elements i rho >= 0.

    Ranks are drawn uniformly so that rank-one elements, where the
    off-diagonal weight is largest, are well represented.  The witness is the
    balanced rank-one element, which attains the sharp value 2.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        rank = int(rng.integers(1, space.dim + 1))
        best = max(best, cone_ratio(random_cone_element(space, rng, rank)))
    assert best <= 1 + math.sqrt(2.0) + 1e-9, best
    witness = balanced_rank_one(space)
    return ConeDemo(best, witness, cone_ratio(witness))


# ---------------------------------------------------------------------------
# Cartan witness
# ---------------------------------------------------------------------------

def _default_pairing(space: SplitSpace) -> list[tuple[int, int]]:
    if space.n_plus != space.n_minus:
        raise BadStructure(f"default pairing needs n+ = n-, got {space}")
    n = space.n_plus
    return [(k, n + k) for k in range(n)]


def paired_coefficients(j: BlockOperator, pairing: Sequence[tuple[int, int]] | None = None) -> np.ndarray:
    """Coefficients c_k with J[p, m] = c_k and J[m, p] = -c_k for each pair (p, m).

    Raises BadStructure unless J is real and supported on the paired anti-diagonal
    with nonzero coefficients.
    """
    space = j.space
    pairs = _default_pairing(space) if pairing is None else [(int(p), int(m)) for p, m in pairing]
    flat = [i for pair in pairs for i in pair]
    if sorted(flat) != list(range(space.dim)):
        raise BadStructure("pairing must partition the basis")
    if any(p >= space.n_plus or m < space.n_plus for p, m in pairs):
        raise BadStructure("each pair must be (index in H+, index in H-)")
    arr = j.entries
    scale = max(1.0, float(np.abs(arr).max()))
    mask = np.ones(arr.shape, dtype=bool)
    coeffs = np.empty(len(pairs))
    for k, (p, m) in enumerate(pairs):
        c, c_back = arr[p, m], arr[m, p]
        if abs(c.imag) > 1e-12 * scale or abs(c + c_back) > 1e-12 * scale:
            raise BadStructure(f"pair {k}: entries {c}, {c_back} are not (c, -c) with c real")
        if abs(c) <= 1e-12 * scale:
            raise BadStructure(f"pair {k}: zero coefficient")
        coeffs[k] = c.real
        mask[p, m] = mask[m, p] = False
    if np.abs(arr[mask]).max(initial=0.0) > 1e-12 * scale:
        raise BadStructure("J has entries outside the paired anti-diagonal")
    return coeffs


def centralizer_of_J(
    j: BlockOperator,
    pairing: Sequence[tuple[int, int]] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> list[RestrictedElement]:
    """Real orthonormal basis of the centralizer in u of the abelian family
    spanned by the pair components J_k of J.

    The family centralizer is the kernel of ad(J_gen) for J_gen = sum r_k J_k
    with pairwise distinct weights r_k |c_k|, which is read off the spectral
    decomposition of J_gen.
    """
    space = j.space
    pairs = _default_pairing(space) if pairing is None else list(pairing)
    coeffs = paired_coefficients(j, pairs)
    gen = np.zeros((space.dim, space.dim))
    for k, ((p, m), c) in enumerate(zip(pairs, coeffs)):
        w = (k + 1) * np.sign(c)
        gen[p, m], gen[m, p] = w, -w
    theta, v = np.linalg.eigh(-1j * gen)
    cut = tol.rank * max(1.0, float(np.abs(theta).max()))
    basis: list[RestrictedElement] = []
    n = space.dim
    for a in range(n):
        for b in range(a, n):
            if abs(theta[a] - theta[b]) > cut:
                continue
            if a == b:
                basis.append(RestrictedElement(space, 1j * np.outer(v[:, a], v[:, a].conj())))
                continue
            e = np.outer(v[:, a], v[:, b].conj())
            basis.append(RestrictedElement(space, (e - e.conj().T) / math.sqrt(2.0)))
            basis.append(RestrictedElement(space, 1j * (e + e.conj().T) / math.sqrt(2.0)))
    jarr = j.entries
    for b in basis:
        resid = np.linalg.norm(b.entries @ jarr - jarr @ b.entries)
        assert resid < 1e-10 * max(1.0, float(np.linalg.norm(jarr))), resid
    return basis


def build_J(n: int, coeff: Callable[[int], float] | None = None) -> RestrictedElement:
    """J on the paired space (n, n): e-_k -> c_k e+_k, e+_k -> -c_k e-_k (k = 1..n)."""
    coeff = (lambda k: 1.0 / k) if coeff is None else coeff
    space = SplitSpace(n, n)
    c = np.array([float(coeff(k)) for k in range(1, n + 1)])
    if np.any(c == 0):
        raise BadStructure("coefficients must be nonzero")
    return RestrictedElement(
        space, BlockOperator.from_blocks(space, pm=np.diag(c), mp=-np.diag(c)).entries
    )


@dataclass(frozen=True)
class CartanReport:
    N: int
    j_s2: float
    j_s1: float
    diag_s1: float
    offblock_s2: float
    offblock_lower: float
    bound_ok: bool

    def to_json(self) -> dict:
        return asdict(self)


def cartan_witness(n: int, coeff: Callable[[int], float] | None = None) -> CartanReport:
    """Diagonalize J exactly and compare the trace norm of the diagonal form
    with the off-diagonal size of the conjugator."""
    if n < 1:
        raise ValueError("N must be >= 1")
    j = build_J(n, coeff)
    _, v = np.linalg.eigh(-1j * j.entries)
    g = v.conj().T
    diag = g @ j.entries @ g.conj().T
    space = j.space
    gb = BlockOperator(space, g)
    j_s2 = schatten_norm(j, 2)
    j_s1 = schatten_norm(j, 1)
    diag_s1 = schatten_norm(diag, 1)
    off = schatten_norm(gb.pm, 2) + schatten_norm(gb.mp, 2)
    return CartanReport(
        N=n,
        j_s2=j_s2,
        j_s1=j_s1,
        diag_s1=diag_s1,
        offblock_s2=off,
        offblock_lower=j_s1 / (2.0 * j_s2),
        bound_ok=bool(diag_s1 <= 2.0 * j_s2 * off * (1 + 1e-10)),
    )

"""Block operators on a truncated split space H+ (+) H-, Schatten norms,
exponentials, polar decomposition and the positivity and norm inequalities.

Matrices are ``(n_plus + n_minus)``-square complex arrays; the first
``n_plus`` coordinates span H+.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Union

import numpy as np
import scipy.linalg

from .errors import (
    NotHermitian,
    NotSkewHermitian,
    NotUnitary,
    ShapeMismatch,
    SingularInput,
    SpaceMismatch,
)


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-12
    unit: float = 1e-10
    exp: float = 1e-10
    pos: float = 1e-10
    sing: float = 1e-12
    rank: float = 1e-9

    def override(self, **kwargs: float) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SplitSpace:
    n_plus: int
    n_minus: int

    def __post_init__(self) -> None:
        if int(self.n_plus) < 1 or int(self.n_minus) < 1:
            raise ValueError(f"n_plus and n_minus must be >= 1, got {self.n_plus}, {self.n_minus}")

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def d(self) -> "BlockOperator":
        """The element i(p+ - p-)."""
        diag = np.concatenate([np.full(self.n_plus, 1j), np.full(self.n_minus, -1j)])
        return BlockOperator(self, np.diag(diag))

    @property
    def p_plus(self) -> np.ndarray:
        return np.diag(np.concatenate([np.ones(self.n_plus), np.zeros(self.n_minus)])).astype(complex)

    def identity(self) -> "BlockOperator":
        return BlockOperator(self, np.eye(self.dim, dtype=complex))

    def zeros(self) -> "BlockOperator":
        return BlockOperator(self, np.zeros((self.dim, self.dim), dtype=complex))

    @classmethod
    def parse(cls, text: str) -> "SplitSpace":
        """Parse ``"a+b"``."""
        left, _, right = text.partition("+")
        return cls(int(left), int(right))

    def __str__(self) -> str:
        return f"{self.n_plus}+{self.n_minus}"


Operand = Union["BlockOperator", complex, float, int]


@dataclass(frozen=True, eq=False)
class BlockOperator:
    space: SplitSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        n = self.space.dim
        if arr.shape != (n, n):
            raise ShapeMismatch(f"expected {(n, n)} entries for space {self.space}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    # block views
    @property
    def pp(self) -> np.ndarray:
        return self.entries[: self.space.n_plus, : self.space.n_plus]

    @property
    def pm(self) -> np.ndarray:
        return self.entries[: self.space.n_plus, self.space.n_plus :]

    @property
    def mp(self) -> np.ndarray:
        return self.entries[self.space.n_plus :, : self.space.n_plus]

    @property
    def mm(self) -> np.ndarray:
        return self.entries[self.space.n_plus :, self.space.n_plus :]

    @classmethod
    def from_blocks(cls, space: SplitSpace, pp=None, pm=None, mp=None, mm=None) -> "BlockOperator":
        np_, nm = space.n_plus, space.n_minus

        def blk(x, shape):
            return np.zeros(shape, dtype=complex) if x is None else np.asarray(x, dtype=complex).reshape(shape)

        full = np.block([
            [blk(pp, (np_, np_)), blk(pm, (np_, nm))],
            [blk(mp, (nm, np_)), blk(mm, (nm, nm))],
        ])
        return cls(space, full)

    @property
    def H(self) -> "BlockOperator":
        return BlockOperator(self.space, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def _other(self, other: Operand) -> np.ndarray | complex:
        if isinstance(other, BlockOperator):
            if other.space != self.space:
                raise SpaceMismatch(f"{self.space} vs {other.space}")
            return other.entries
        return other

    def __add__(self, other: Operand) -> "BlockOperator":
        o = self._other(other)
        if not isinstance(other, BlockOperator):
            o = o * np.eye(self.space.dim)
        return BlockOperator(self.space, self.entries + o)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "BlockOperator":
        return self + (-other)

    def __neg__(self) -> "BlockOperator":
        return BlockOperator(self.space, -self.entries)

    def __mul__(self, scalar: complex) -> "BlockOperator":
        return BlockOperator(self.space, self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "BlockOperator":
        return BlockOperator(self.space, self.entries / scalar)

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(self.space, self.entries @ self._other(other))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(space={self.space}, entries=\n{self.entries})"

    def to_json(self) -> dict:
        return operator_to_json(self)


def _skew_defect(x: np.ndarray) -> float:
    return float(np.linalg.norm(x + x.conj().T))


class _SkewElement(BlockOperator):
    """Skew-Hermitian operator; small defects are symmetrized away."""

    def __init__(self, space: SplitSpace, entries, tol: Tolerances = DEFAULT_TOL) -> None:
        arr = np.array(entries, dtype=complex)
        defect = _skew_defect(arr) if arr.ndim == 2 and arr.shape[0] == arr.shape[1] else math.inf
        scale = max(1.0, float(np.linalg.norm(arr))) if np.isfinite(defect) else 1.0
        if defect > tol.herm * scale:
            raise NotSkewHermitian(f"skew-Hermitian defect {defect:.3e} exceeds {tol.herm:.1e}")
        super().__init__(space, (arr - arr.conj().T) / 2)

    @classmethod
    def of(cls, op: BlockOperator, tol: Tolerances = DEFAULT_TOL):
        if isinstance(op, cls):
            return op
        return cls(op.space, op.entries, tol)


class RestrictedElement(_SkewElement):
    """Element of the truncated restricted algebra u_res."""

    @property
    def norm(self) -> float:
        return restricted_norm(self)


class PredualElement(_SkewElement):
    """Element of the truncated predual (u_res)_*."""

    @property
    def norm(self) -> float:
        return predual_norm(self)


class UnitaryElement(BlockOperator):
    def __init__(self, space: SplitSpace, entries, tol: Tolerances = DEFAULT_TOL) -> None:
        super().__init__(space, entries)
        eye = np.eye(space.dim)
        u = self.entries
        err = max(np.abs(u.conj().T @ u - eye).max(), np.abs(u @ u.conj().T - eye).max())
        if err > tol.unit:
            raise NotUnitary(f"unitarity defect {err:.3e} exceeds {tol.unit:.1e}")

    @classmethod
    def of(cls, op: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> "UnitaryElement":
        if isinstance(op, cls):
            return op
        return cls(op.space, op.entries, tol)


def check_same_space(*ops: BlockOperator) -> SplitSpace:
    space = ops[0].space
    for op in ops[1:]:
        if op.space != space:
            raise SpaceMismatch(f"{space} vs {op.space}")
    return space


def commutator(a: BlockOperator, b: BlockOperator) -> BlockOperator:
    check_same_space(a, b)
    return BlockOperator(a.space, a.entries @ b.entries - b.entries @ a.entries)


def d_commutator(a: BlockOperator) -> BlockOperator:
    """[d, a]: blocks (0, 2i a+-; -2i a-+, 0), formed without multiplication."""
    return BlockOperator.from_blocks(a.space, pm=2j * a.pm, mp=-2j * a.mp)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _as_array(x) -> np.ndarray:
    return x.entries if isinstance(x, BlockOperator) else np.asarray(x, dtype=complex)


def schatten_norm(x, p: float | str = 2) -> float:
    """Schatten p-norm for p in {1, 2, inf}."""
    arr = _as_array(x)
    if arr.size == 0:
        return 0.0
    if p == 2:
        return float(np.linalg.norm(arr))
    sv = np.linalg.svd(arr, compute_uv=False)
    if p == 1:
        return float(sv.sum())
    if p in (math.inf, "inf"):
        return float(sv[0])
    raise ValueError(f"unsupported Schatten index {p!r}")


def restricted_norm(a: BlockOperator) -> float:
    """||a|| + ||[d, a]||_2."""
    return schatten_norm(a, math.inf) + schatten_norm(d_commutator(a), 2)


def predual_norm(rho: BlockOperator) -> float:
    """||rho++||_1 + ||rho--||_1 + 2 ||rho-+||_2."""
    return schatten_norm(rho.pp, 1) + schatten_norm(rho.mm, 1) + 2.0 * schatten_norm(rho.mp, 2)


# ---------------------------------------------------------------------------
# exponentials and polar decomposition
# ---------------------------------------------------------------------------

def _is_skew(arr: np.ndarray, tol: float) -> bool:
    return _skew_defect(arr) <= tol * max(1.0, float(np.linalg.norm(arr)))


def expm(a: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> BlockOperator:
    """Matrix exponential.

    Skew-Hermitian input goes through the eigendecomposition of the
    Hermitian matrix -i a, so the result is unitary to rounding; anything
    else uses scaling and squaring.
    """
    arr = a.entries
    if _is_skew(arr, tol.herm):
        herm = -0.5j * (arr - arr.conj().T)
        w, v = np.linalg.eigh((herm + herm.conj().T) / 2)
        return BlockOperator(a.space, (v * np.exp(1j * w)) @ v.conj().T)
    return BlockOperator(a.space, scipy.linalg.expm(arr))


@dataclass(frozen=True)
class OffDiagonalPolar:
    """Polar data a = v|a|, a* = w|a*| of an H- -> H+ block."""

    v: np.ndarray
    abs_a: np.ndarray
    w: np.ndarray
    abs_a_star: np.ndarray


def offdiagonal_polar(a_block: np.ndarray) -> tuple[OffDiagonalPolar, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    u, sv, vh = np.linalg.svd(a_block, full_matrices=False)
    v = u @ vh
    w = v.conj().T
    abs_a = (vh.conj().T * sv) @ vh
    abs_a_star = (u * sv) @ u.conj().T
    return OffDiagonalPolar(v, abs_a, w, abs_a_star), (u, sv, vh)


def exp_offdiagonal(a_block, space: SplitSpace, tol: Tolerances = DEFAULT_TOL) -> UnitaryElement:
    """exp of (0, a; -a*, 0) in closed form from the polar data of a.

    Blocks: cos|a*|, v sin|a|, -w sin|a*|, cos|a|.  v and w vanish on the
    kernels of |a| and |a*|, where the cosines act as the identity.
    """
    a_block = np.asarray(a_block, dtype=complex)
    if a_block.shape != (space.n_plus, space.n_minus):
        raise ShapeMismatch(f"expected block shape {(space.n_plus, space.n_minus)}, got {a_block.shape}")
    polar_data, (u, sv, vh) = offdiagonal_polar(a_block)
    # functions of |a| and |a*| through their eigenbases; identity on the kernels
    cos_abs_a = np.eye(space.n_minus) + (vh.conj().T * (np.cos(sv) - 1.0)) @ vh
    cos_abs_a_star = np.eye(space.n_plus) + (u * (np.cos(sv) - 1.0)) @ u.conj().T
    sin_abs_a = (vh.conj().T * np.sin(sv)) @ vh
    sin_abs_a_star = (u * np.sin(sv)) @ u.conj().T
    out = BlockOperator.from_blocks(
        space,
        pp=cos_abs_a_star,
        pm=polar_data.v @ sin_abs_a,
        mp=-polar_data.w @ sin_abs_a_star,
        mm=cos_abs_a,
    )
    return UnitaryElement(space, out.entries, tol)


def assemble_offdiagonal(a_block, space: SplitSpace) -> RestrictedElement:
    """(0, a; -a*, 0)."""
    a_block = np.asarray(a_block, dtype=complex)
    return RestrictedElement(space, BlockOperator.from_blocks(space, pm=a_block, mp=-a_block.conj().T).entries)


def polar(g: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> tuple[UnitaryElement, BlockOperator]:
    """g = u s with s = (g* g)^{1/2}; raises SingularInput for non-invertible g."""
    w, sv, vh = np.linalg.svd(g.entries)
    if sv[-1] <= tol.sing:
        raise SingularInput(f"smallest singular value {sv[-1]:.3e} <= {tol.sing:.1e}")
    s = (vh.conj().T * sv) @ vh
    s = (s + s.conj().T) / 2
    u = w @ vh
    return UnitaryElement(g.space, u, tol), BlockOperator(g.space, s)


# ---------------------------------------------------------------------------
# positivity inequalities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityReport:
    is_positive: bool
    t_norm: float
    bound: float


@dataclass(frozen=True)
class ConeReport:
    i_rho_positive: bool
    s1: float
    pd: float


def _check_hermitian(arr: np.ndarray, tol: float) -> None:
    defect = float(np.linalg.norm(arr - arr.conj().T))
    if defect > tol * max(1.0, float(np.linalg.norm(arr))):
        raise NotHermitian(f"Hermitian defect {defect:.3e}")


def positivity_bound_check(a: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> PositivityReport:
    """Off-diagonal S2 bound ||t||_2 <= Tr(a)/sqrt(2) for positive a."""
    arr = a.entries
    _check_hermitian(arr, tol.herm)
    lam_min = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2)[0])
    report = PositivityReport(
        is_positive=lam_min >= -tol.pos,
        t_norm=schatten_norm(a.pm, 2),
        bound=float(np.trace(arr).real) / math.sqrt(2.0),
    )
    if report.is_positive:
        assert report.t_norm <= report.bound + tol.pos, report
    return report


def cone_pair_check(rho: BlockOperator, tol: Tolerances = DEFAULT_TOL) -> ConeReport:
    """Norm comparison s1 <= predual <= (1 + sqrt 2) s1 on the cone i rho >= 0."""
    herm = 1j * rho.entries
    lam_min = float(np.linalg.eigvalsh((herm + herm.conj().T) / 2)[0])
    report = ConeReport(
        i_rho_positive=lam_min >= -tol.pos,
        s1=schatten_norm(rho, 1),
        pd=predual_norm(rho),
    )
    if report.i_rho_positive:
        assert report.s1 - tol.pos <= report.pd <= (1 + math.sqrt(2.0)) * report.s1 + tol.pos, report
    return report


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def operator_to_json(op: BlockOperator) -> dict:
    return {
        "n_plus": op.space.n_plus,
        "n_minus": op.space.n_minus,
        "re": op.entries.real.tolist(),
        "im": op.entries.imag.tolist(),
    }


def operator_from_json(data: dict[str, Any] | str) -> BlockOperator:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        space = SplitSpace(int(data["n_plus"]), int(data["n_minus"]))
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed BlockOperator JSON: {exc}") from exc
    shape = (space.dim, space.dim)
    if re.shape != shape or im.shape != shape:
        raise ShapeMismatch(f"expected {shape} re/im arrays, got {re.shape} and {im.shape}")
    return BlockOperator(space, re + 1j * im)

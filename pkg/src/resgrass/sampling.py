"""Random test objects on a split space. All take an explicit Generator."""

from __future__ import annotations

import numpy as np

from .core import (
    BlockOperator,
    PredualElement,
    RestrictedElement,
    SplitSpace,
    UnitaryElement,
)


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_skew(space: SplitSpace, rng: np.random.Generator, scale: float = 1.0) -> RestrictedElement:
    g = ginibre(rng, space.dim, space.dim) * scale
    return RestrictedElement(space, (g - g.conj().T) / 2)


def random_predual(space: SplitSpace, rng: np.random.Generator, scale: float = 1.0) -> PredualElement:
    return PredualElement(space, random_skew(space, rng, scale).entries)


def random_offdiagonal(space: SplitSpace, rng: np.random.Generator, scale: float = 1.0) -> RestrictedElement:
    a = ginibre(rng, space.n_plus, space.n_minus) * scale
    return RestrictedElement(space, BlockOperator.from_blocks(space, pm=a, mp=-a.conj().T).entries)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, n, n))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_unitary(space: SplitSpace, rng: np.random.Generator) -> UnitaryElement:
    return UnitaryElement(space, haar_unitary(space.dim, rng))


def random_diagonal_unitary(space: SplitSpace, rng: np.random.Generator) -> UnitaryElement:
    """Haar unitary commuting with d (block diagonal)."""
    return UnitaryElement(
        space,
        BlockOperator.from_blocks(
            space, pp=haar_unitary(space.n_plus, rng), mm=haar_unitary(space.n_minus, rng)
        ).entries,
    )


def random_psd(space: SplitSpace, rng: np.random.Generator, rank: int | None = None) -> BlockOperator:
    """b* b with b of the given row count (full rank by default)."""
    b = ginibre(rng, rank or space.dim, space.dim)
    m = b.conj().T @ b
    return BlockOperator(space, (m + m.conj().T) / 2)


def random_cone_element(space: SplitSpace, rng: np.random.Generator, rank: int | None = None) -> PredualElement:
    """rho with i rho = b* b >= 0."""
    return PredualElement(space, -1j * random_psd(space, rng, rank).entries)


def random_columns(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return ginibre(rng, n, k)


def random_admissible(
    space: SplitSpace,
    rng: np.random.Generator,
    spread: float = 0.3,
    off_norm: float | None = None,
) -> RestrictedElement:
    """Skew element with rho++ spectrum near i, rho-- near -i and a small
    off-diagonal block.

    ``off_norm`` fixes ||rho-+||_2; by default it is drawn below half the
    smallest possible gap 2 - 2 spread.
    """
    lam_p = 1j * (1.0 + rng.uniform(-spread, spread, space.n_plus))
    lam_m = -1j * (1.0 + rng.uniform(-spread, spread, space.n_minus))
    up = haar_unitary(space.n_plus, rng)
    um = haar_unitary(space.n_minus, rng)
    pp = (up * lam_p) @ up.conj().T
    mm = (um * lam_m) @ um.conj().T
    x = ginibre(rng, space.n_minus, space.n_plus)
    if off_norm is None:
        off_norm = rng.uniform(0.0, 0.9) * (1.0 - spread)
    x *= off_norm / np.linalg.norm(x)
    return RestrictedElement(
        space, BlockOperator.from_blocks(space, pp=pp, pm=-x.conj().T, mp=x, mm=mm).entries
    )


def random_v0_element(space: SplitSpace, rng: np.random.Generator) -> RestrictedElement:
    """Uniform-ish sample from the neighbourhood V0 of d."""
    spread = 1.0 / 3.0
    lam_p = 1j * (1.0 + rng.uniform(-spread, spread, space.n_plus))
    lam_m = -1j * (1.0 + rng.uniform(-spread, spread, space.n_minus))
    up = haar_unitary(space.n_plus, rng)
    um = haar_unitary(space.n_minus, rng)
    x = ginibre(rng, space.n_minus, space.n_plus)
    x *= rng.uniform(0.0, 2.0 / 3.0) / np.linalg.norm(x)
    return RestrictedElement(
        space,
        BlockOperator.from_blocks(
            space,
            pp=(up * lam_p) @ up.conj().T,
            pm=-x.conj().T,
            mp=x,
            mm=(um * lam_m) @ um.conj().T,
        ).entries,
    )

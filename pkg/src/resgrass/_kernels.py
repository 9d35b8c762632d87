"""Inner loops with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``RESGRASS_DISABLE_NUMBA`` is
unset (or "0").  Both paths are always importable as ``<name>_jit`` and
``<name>_numpy`` so they can be cross-checked and benchmarked; the bare
``<name>`` is the selected one.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

DISABLED_BY_ENV = os.environ.get("RESGRASS_DISABLE_NUMBA", "").strip() not in ("", "0")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

_SQRT2 = math.sqrt(2.0)


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# real coordinates on u(N)
#
# Orthonormal basis for Re Tr(X* Y), ordered: i E_kk (k = 0..N-1), then for
# each k < l in row-major order (E_kl - E_lk)/sqrt2, i(E_kl + E_lk)/sqrt2.
# ---------------------------------------------------------------------------

@_njit
def skew_coords_jit(y):
    n = y.shape[0]
    out = np.empty(n * n)
    for k in range(n):
        out[k] = y[k, k].imag
    pos = n
    for k in range(n):
        for l in range(k + 1, n):
            out[pos] = (y[k, l].real - y[l, k].real) / _SQRT2
            out[pos + 1] = (y[k, l].imag + y[l, k].imag) / _SQRT2
            pos += 2
    return out


@_njit
def skew_from_coords_jit(v, n):
    y = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        y[k, k] = 1j * v[k]
    pos = n
    for k in range(n):
        for l in range(k + 1, n):
            re = v[pos] / _SQRT2
            im = v[pos + 1] / _SQRT2
            y[k, l] = re + 1j * im
            y[l, k] = -re + 1j * im
            pos += 2
    return y


@_njit
def ad_matrix_jit(c):
    """Real matrix of X -> [C, X] on u(N), using the 2-sparse basis."""
    n = c.shape[0]
    m = n * n
    out = np.empty((m, m))
    work = np.zeros((n, n), dtype=np.complex128)
    pos = n
    for k in range(n):
        for l in range(k, n):
            nvar = 1 if k == l else 2
            for var in range(nvar):
                if k == l:
                    alpha = 1j
                    beta = 0j
                    idx = k
                elif var == 0:
                    alpha = (1.0 / _SQRT2) + 0j
                    beta = -alpha
                    idx = pos
                else:
                    alpha = 1j / _SQRT2
                    beta = alpha
                    idx = pos + 1
                work[:, :] = 0.0
                # basis element B = alpha E_kl + beta E_lk (alpha E_kk on the diagonal)
                for i in range(n):
                    work[i, l] += c[i, k] * alpha
                    work[k, i] -= alpha * c[l, i]
                    if k != l:
                        work[i, k] += c[i, l] * beta
                        work[l, i] -= beta * c[k, i]
                coords = skew_coords_jit(work)
                for r in range(m):
                    out[r, idx] = coords[r]
            if k != l:
                pos += 2
    return out


@_njit
def sylvester_divide_jit(c, lam, mu):
    rows, cols = c.shape
    out = np.empty((rows, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = c[i, j] / (lam[j] - mu[i])
    return out


@_njit
def min_pair_distance_jit(lam, mu):
    best = np.inf
    for i in range(lam.shape[0]):
        for j in range(mu.shape[0]):
            dist = abs(lam[i] - mu[j])
            if dist < best:
                best = dist
    return best


@_njit
def hinkkanen_scan_jit(absr, t, s):
    """First (m, n), 0-based, violating either coefficient condition."""
    n = absr.shape[0]
    for m in range(n):
        for q in range(n):
            if m + 1 < n and q + 1 < n:
                if absr[m + 1, q + 1] > t * absr[m, q]:
                    return m, q
            if m != q:
                scale = float((m + 1) * (q + 1)) ** 2
                rhs = (s * s) / scale * absr[m, m] * absr[q, q]
                if absr[m, q] * absr[m, q] > rhs:
                    return m, q
    return -1, -1


# ---------------------------------------------------------------------------
# numpy versions
# ---------------------------------------------------------------------------

def _upper_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def skew_coords_numpy(y: np.ndarray) -> np.ndarray:
    n = y.shape[0]
    ku, lu = _upper_pairs(n)
    out = np.empty(n * n)
    out[:n] = np.diagonal(y).imag
    out[n::2] = (y[ku, lu].real - y[lu, ku].real) / _SQRT2
    out[n + 1::2] = (y[ku, lu].imag + y[lu, ku].imag) / _SQRT2
    return out


def skew_from_coords_numpy(v: np.ndarray, n: int) -> np.ndarray:
    ku, lu = _upper_pairs(n)
    y = np.zeros((n, n), dtype=complex)
    y[np.arange(n), np.arange(n)] = 1j * v[:n]
    re = v[n::2] / _SQRT2
    im = v[n + 1::2] / _SQRT2
    y[ku, lu] = re + 1j * im
    y[lu, ku] = -re + 1j * im
    return y


def skew_basis(n: int) -> np.ndarray:
    """Stack of the N^2 orthonormal basis matrices of u(N), in coordinate order."""
    eye = np.eye(n * n)
    return np.stack([skew_from_coords_numpy(eye[i], n) for i in range(n * n)])


def ad_matrix_numpy(c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    basis = skew_basis(n)
    images = c[None, :, :] @ basis - basis @ c[None, :, :]
    ku, lu = _upper_pairs(n)
    m = n * n
    out = np.empty((m, m))
    out[:n] = np.diagonal(images, axis1=1, axis2=2).imag.T
    out[n::2] = ((images[:, ku, lu].real - images[:, lu, ku].real) / _SQRT2).T
    out[n + 1::2] = ((images[:, ku, lu].imag + images[:, lu, ku].imag) / _SQRT2).T
    return out


def sylvester_divide_numpy(c: np.ndarray, lam: np.ndarray, mu: np.ndarray) -> np.ndarray:
    return c / (lam[None, :] - mu[:, None])


def min_pair_distance_numpy(lam: np.ndarray, mu: np.ndarray) -> float:
    if lam.size == 0 or mu.size == 0:
        return math.inf
    return float(np.min(np.abs(lam[:, None] - mu[None, :])))


def hinkkanen_scan_numpy(absr: np.ndarray, t: float, s: float) -> tuple[int, int]:
    n = absr.shape[0]
    bad = np.zeros((n, n), dtype=bool)
    bad[:-1, :-1] = absr[1:, 1:] > t * absr[:-1, :-1]
    idx = np.arange(1, n + 1, dtype=float)
    diag = np.diagonal(absr)
    rhs = (s * s) / np.outer(idx, idx) ** 2 * np.outer(diag, diag)
    off = absr * absr > rhs
    np.fill_diagonal(off, False)
    bad |= off
    hits = np.argwhere(bad)
    if hits.size == 0:
        return -1, -1
    return int(hits[0, 0]), int(hits[0, 1])


if USE_NUMBA:
    skew_coords = skew_coords_jit
    skew_from_coords = skew_from_coords_jit
    ad_matrix = ad_matrix_jit
    sylvester_divide = sylvester_divide_jit
    min_pair_distance = min_pair_distance_jit
    hinkkanen_scan = hinkkanen_scan_jit
else:
    skew_coords = skew_coords_numpy
    skew_from_coords = skew_from_coords_numpy
    ad_matrix = ad_matrix_numpy
    sylvester_divide = sylvester_divide_numpy
    min_pair_distance = min_pair_distance_numpy
    hinkkanen_scan = hinkkanen_scan_numpy

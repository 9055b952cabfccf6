"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype complex128 (2-d, explicit
rows/cols). Vectors are column matrices. The Hermitian eigensolver is a
cyclic Jacobi method with round-robin pair ordering, so each sweep
applies ``n/2`` disjoint rotations at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NoConvergence, NotHermitian, SizeLimit

MAX_ENTRIES = 2**20
JACOBI_MAX_SWEEPS = 60


def as_mat(a) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise DimMismatch(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def eye(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


def ket(i: int, d: int) -> np.ndarray:
    v = np.zeros((d, 1), dtype=np.complex128)
    v[i, 0] = 1.0
    return v


def dag(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def kron(a, b, max_entries: int = MAX_ENTRIES) -> np.ndarray:
    """Tensor product with row index ``i1*b.rows + i2`` and column index ``j1*b.cols + j2``."""
    a = as_mat(a)
    b = as_mat(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > max_entries:
        raise SizeLimit(f"kron result {rows}x{cols} exceeds {max_entries} entries")
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(rows, cols)


def kron_all(*mats, max_entries: int = MAX_ENTRIES) -> np.ndarray:
    out = as_mat(mats[0])
    for m in mats[1:]:
        out = kron(out, m, max_entries=max_entries)
    return out


def partial_trace(m, dims: tuple[int, int], which: str) -> np.ndarray:
    """Trace out the ``"first"`` or ``"second"`` factor of a bipartite square matrix."""
    m = as_mat(m)
    d1, d2 = dims
    n = d1 * d2
    if m.shape != (n, n):
        raise DimMismatch(f"partial_trace: matrix {m.shape} does not match dims {dims}")
    t = m.reshape(d1, d2, d1, d2)
    if which == "first":
        return np.einsum("iaib->ab", t)
    if which == "second":
        return np.einsum("aibi->ab", t)
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


def swap(d1: int, d2: int) -> np.ndarray:
    """Permutation S with S (u ⊗ v) = v ⊗ u for u in C^d1, v in C^d2."""
    if d1 < 0 or d2 < 0:
        raise ValueError("dimensions must be non-negative")
    n = d1 * d2
    s = np.zeros((n, n), dtype=np.complex128)
    i, j = np.meshgrid(np.arange(d1), np.arange(d2), indexing="ij")
    s[(j * d1 + i).ravel(), (i * d2 + j).ravel()] = 1.0
    return s


def frob_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def frob_dist(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimMismatch(f"frob_dist: shapes {a.shape} and {b.shape} differ")
    return float(np.linalg.norm(a - b))


def inner(a, b) -> complex:
    """Frobenius inner product <a, b> = Tr(a† b)."""
    return complex(np.vdot(np.asarray(a), np.asarray(b)))


@dataclass(frozen=True)
class HermEigResult:
    eigenvalues: np.ndarray  # descending, real
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


def _round_robin(m: int):
    """Yield (p, q) index arrays for the m-1 rounds of a round-robin tournament on m players."""
    players = list(range(m))
    half = m // 2
    for _ in range(m - 1):
        top = players[:half]
        bottom = players[half:][::-1]
        yield np.array(top), np.array(bottom)
        players = [players[0], players[-1]] + players[1:-1]


def herm_eig(a, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    The input is symmetrized before solving. Eigenvalues are returned in
    descending order with ties kept in the order of the converged diagonal.
    """
    a = as_mat(a)
    n, ncols = a.shape
    if n != ncols:
        raise DimMismatch(f"herm_eig needs a square matrix, got {a.shape}")
    scale = frob_norm(a)
    if frob_dist(a, dag(a)) > 1e-9 * (1.0 + scale):
        raise NotHermitian(f"matrix is not Hermitian (|a - a^H| = {frob_dist(a, dag(a)):.3e})")
    a = 0.5 * (a + dag(a))
    v = eye(n)
    if n <= 1 or scale == 0.0:
        w = np.real(np.diag(a)).copy()
        return _sorted(w, v)

    m = n + (n % 2)
    tiny = np.finfo(float).tiny
    converged = False
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= 1e-15 * scale:
            converged = True
            break
        for p, q in _round_robin(m):
            keep = (p < n) & (q < n)
            p, q = p[keep], q[keep]
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > tiny
            if not np.any(active):
                continue
            p, q, apq, mag = p[active], q[active], apq[active], mag[active]
            phase = apq / mag
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (aqq - app) / (2.0 * mag)
            sgn = np.where(tau >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ph = np.conj(phase)
            u00, u01, u10, u11 = c, s, -s * ph, c * ph

            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = ap * u00 + aq * u10
            a[:, q] = ap * u01 + aq * u11
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = np.conj(u00)[:, None] * rp + np.conj(u10)[:, None] * rq
            a[q, :] = np.conj(u01)[:, None] * rp + np.conj(u11)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * u00 + vq * u10
            v[:, q] = vp * u01 + vq * u11
    if not converged:
        off = _off_norm(a)
        if off > 1e-13 * scale:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
    return _sorted(np.real(np.diag(a)).copy(), v)


def _off_norm(a: np.ndarray) -> float:
    return frob_norm(a - np.diag(np.diag(a)))


def _sorted(w: np.ndarray, v: np.ndarray) -> HermEigResult:
    order = np.argsort(-w, kind="stable")
    return HermEigResult(eigenvalues=w[order], eigenvectors=np.ascontiguousarray(v[:, order]))


def fix_phase(a: np.ndarray) -> np.ndarray:
    """Multiply by the global phase that makes the largest-magnitude entry real positive.

    Ties go to the lowest row-major index. The zero matrix is returned unchanged.
    """
    flat = a.ravel()
    if flat.size == 0:
        return a.copy()
    mags = np.abs(flat)
    k = int(np.argmax(mags))
    if mags[k] == 0.0:
        return a.copy()
    return a * (np.conj(flat[k]) / mags[k])


def wrap_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]."""
    t = float(np.angle(np.exp(1j * theta)))
    if t <= -np.pi:
        t += 2 * np.pi
    return t

"""Completely positive maps in Kraus form.

Conventions
-----------
* Choi matrix: ``choi(phi) = sum_ij E_ij ⊗ phi(E_ij)``, input factor first.
  For a Kraus operator ``A`` (out x in) its Choi vector is ``A.T.ravel()``,
  i.e. entry ``i*out + r`` holds ``A[r, i]``.
* Purification environment is the second tensor factor: ``K ⊗ E``.
* Pure parts are phase-fixed so that the largest-magnitude entry is real positive.

A CpMap never materializes its Choi matrix unless asked; equality tests and
Kraus recompression work on the stacked Choi vectors directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import DimMismatch, NotCP, NotFactorizable, NotPure

KRAUS_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class CpMap:
    in_dim: int
    out_dim: int
    kraus: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        ops = tuple(la.as_mat(k) for k in self.kraus)
        if not ops:
            ops = (np.zeros((self.out_dim, self.in_dim), dtype=np.complex128),)
        for k in ops:
            if k.shape != (self.out_dim, self.in_dim):
                raise DimMismatch(
                    f"Kraus operator of shape {k.shape}, expected {(self.out_dim, self.in_dim)}"
                )
        object.__setattr__(self, "kraus", ops)

    @property
    def rank(self) -> int:
        return len(self.kraus)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Choi vectors of the Kraus operators as columns, shape (in*out, rank)."""
        return np.stack([k.T.ravel() for k in self.kraus], axis=1)

    @cached_property
    def choi(self) -> np.ndarray:
        m = self.vectors
        return m @ la.dag(m)

    def apply(self, rho) -> np.ndarray:
        rho = la.as_mat(rho)
        if rho.shape != (self.in_dim, self.in_dim):
            raise DimMismatch(f"state of shape {rho.shape} for map on dim {self.in_dim}")
        out = np.zeros((self.out_dim, self.out_dim), dtype=np.complex128)
        for k in self.kraus:
            out += k @ rho @ la.dag(k)
        return out

    def __repr__(self):
        return f"CpMap(in_dim={self.in_dim}, out_dim={self.out_dim}, rank={self.rank})"


@dataclass(frozen=True)
class PurityVerdict:
    is_pure: bool
    pure_part: np.ndarray | None
    residual: float


def _unvec(v: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    return v.reshape(in_dim, out_dim).T.copy()


def cpm_double(f) -> CpMap:
    f = la.as_mat(f)
    return CpMap(f.shape[1], f.shape[0], (f,))


def identity_channel(d: int) -> CpMap:
    return cpm_double(la.eye(d))


def zero_map(in_dim: int, out_dim: int) -> CpMap:
    return CpMap(in_dim, out_dim, ())


def discard(d: int) -> CpMap:
    if d < 1:
        raise ValueError("discard needs d >= 1")
    return CpMap(d, 1, tuple(la.ket(i, d).T for i in range(d)))


def choi(phi: CpMap) -> np.ndarray:
    return phi.choi


def from_choi(c, in_dim: int, out_dim: int) -> CpMap:
    """Kraus form from the eigendecomposition of a Choi matrix."""
    c = la.as_mat(c)
    n = in_dim * out_dim
    if c.shape != (n, n):
        raise DimMismatch(f"Choi matrix {c.shape} for signature {in_dim}->{out_dim}")
    if n == 0:
        return zero_map(in_dim, out_dim)
    eig = la.herm_eig(c)
    w, u = eig.eigenvalues, eig.eigenvectors
    if w[-1] < -1e-9 * la.frob_norm(c):
        raise NotCP(f"Choi matrix has eigenvalue {w[-1]:.3e}")
    keep = w > KRAUS_CUTOFF * max(w[0], 0.0)
    if w[0] <= 0.0 or not np.any(keep):
        return zero_map(in_dim, out_dim)
    ops = tuple(_unvec(np.sqrt(w[k]) * u[:, k], in_dim, out_dim) for k in np.flatnonzero(keep))
    return CpMap(in_dim, out_dim, ops)


def _gram_eig(phi: CpMap):
    m = phi.vectors
    eig = la.herm_eig(la.dag(m) @ m)
    return m, eig.eigenvalues, eig.eigenvectors


def minimal_kraus(phi: CpMap) -> CpMap:
    """Recompress to a minimal, mutually orthogonal Kraus set.

    Diagonalizes the Gram matrix of the Choi vectors, which has the same
    non-zero spectrum as the Choi matrix; eigenvalues below the cutoff
    relative to the largest are discarded.
    """
    m, w, u = _gram_eig(phi)
    if m.shape[0] == 0 or w[0] <= 0.0:
        return zero_map(phi.in_dim, phi.out_dim)
    keep = np.flatnonzero(w > KRAUS_CUTOFF * w[0])
    vecs = m @ u[:, keep]
    ops = tuple(_unvec(vecs[:, j], phi.in_dim, phi.out_dim) for j in range(vecs.shape[1]))
    return CpMap(phi.in_dim, phi.out_dim, ops)


def _maybe_compress(phi: CpMap) -> CpMap:
    if phi.rank > max(phi.in_dim * phi.out_dim, 1):
        return minimal_kraus(phi)
    return phi


def compose(g: CpMap, f: CpMap) -> CpMap:
    """g after f."""
    if f.out_dim != g.in_dim:
        raise DimMismatch(f"compose: {f.in_dim}->{f.out_dim} then {g.in_dim}->{g.out_dim}")
    ops = tuple(b @ a for b in g.kraus for a in f.kraus)
    return _maybe_compress(CpMap(f.in_dim, g.out_dim, ops))


def compose_all(*maps: CpMap) -> CpMap:
    """Compose right to left: compose_all(h, g, f) = h ∘ g ∘ f."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def tensor(f: CpMap, g: CpMap) -> CpMap:
    ops = tuple(la.kron(a, b) for a in f.kraus for b in g.kraus)
    return _maybe_compress(CpMap(f.in_dim * g.in_dim, f.out_dim * g.out_dim, ops))


def dagger(f: CpMap) -> CpMap:
    return CpMap(f.out_dim, f.in_dim, tuple(la.dag(a) for a in f.kraus))


def add(maps: Sequence[CpMap], weights: Sequence[float] | None = None) -> CpMap:
    """Positive combination sum_i w_i * maps[i]."""
    maps = list(maps)
    if not maps:
        raise ValueError("add needs at least one map")
    if weights is None:
        weights = [1.0] * len(maps)
    if len(weights) != len(maps):
        raise DimMismatch("one weight per map")
    sig = (maps[0].in_dim, maps[0].out_dim)
    ops = []
    for phi, w in zip(maps, weights):
        if (phi.in_dim, phi.out_dim) != sig:
            raise DimMismatch("add: maps have different signatures")
        if w < 0:
            raise ValueError("add: weights must be non-negative")
        ops.extend(np.sqrt(w) * a for a in phi.kraus)
    return _maybe_compress(CpMap(sig[0], sig[1], tuple(ops)))


def scale(phi: CpMap, w: float) -> CpMap:
    return add([phi], [w])


def choi_distance(a: CpMap, b: CpMap) -> float:
    """Frobenius distance between Choi matrices, computed without forming them.

    With X = [vectors(a), vectors(b)] = QR, the Choi difference is
    Q (R_a R_a† - R_b R_b†) Q†, so its norm is that of an r x r matrix.
    """
    if (a.in_dim, a.out_dim) != (b.in_dim, b.out_dim):
        raise DimMismatch(
            f"choi_distance: {a.in_dim}->{a.out_dim} vs {b.in_dim}->{b.out_dim}"
        )
    x = np.concatenate([a.vectors, b.vectors], axis=1)
    if x.shape[0] == 0:
        return 0.0
    if x.shape[0] <= x.shape[1]:
        return la.frob_dist(a.choi, b.choi)
    _, r = np.linalg.qr(x)
    ra, rb = r[:, : a.rank], r[:, a.rank:]
    return la.frob_norm(ra @ la.dag(ra) - rb @ la.dag(rb))


def choi_norm(a: CpMap) -> float:
    g = la.dag(a.vectors) @ a.vectors
    return la.frob_norm(g)


def superop_trace(phi: CpMap) -> float:
    """Trace of the map as a linear operator on matrices: sum_k |Tr A_k|^2."""
    if phi.in_dim != phi.out_dim:
        raise DimMismatch("superop_trace needs an endomorphism")
    return float(sum(abs(np.trace(a)) ** 2 for a in phi.kraus))


def is_pure(phi: CpMap, rel_tol: float = 1e-8) -> PurityVerdict:
    """Rank-1 test on the Choi matrix.

    The spectrum is taken from the Kraus Gram matrix (same non-zero
    eigenvalues as the Choi matrix, much smaller).
    """
    m, w, u = _gram_eig(phi)
    if m.shape[0] == 0 or w[0] <= 0.0:
        return PurityVerdict(True, np.zeros((phi.out_dim, phi.in_dim), dtype=np.complex128), 0.0)
    w = np.clip(w, 0.0, None)
    total = float(np.sqrt(np.sum(w**2)))
    residual = float(np.sqrt(np.sum(w[1:] ** 2))) / total
    second = w[1] if w.size > 1 else 0.0
    if second > rel_tol * w[0]:
        return PurityVerdict(False, None, residual)
    f = _unvec(m @ u[:, 0], phi.in_dim, phi.out_dim)
    return PurityVerdict(True, la.fix_phase(f), residual)


def purify(phi: CpMap) -> tuple[np.ndarray, int]:
    """Pure psi: H -> K ⊗ E with phi = (1_K ⊗ discard_E) ∘ CPM(psi)."""
    ops = minimal_kraus(phi).kraus
    env = len(ops)
    psi = np.zeros((phi.out_dim * env, phi.in_dim), dtype=np.complex128)
    for k, a in enumerate(ops):
        psi[k::env, :] = a
    return psi, env


def discard_environment(psi, env_dim: int) -> CpMap:
    psi = la.as_mat(psi)
    out_dim = psi.shape[0] // env_dim
    if out_dim * env_dim != psi.shape[0]:
        raise DimMismatch(f"psi has {psi.shape[0]} rows, not divisible by env_dim={env_dim}")
    return compose(tensor(identity_channel(out_dim), discard(env_dim)), cpm_double(psi))


def purity_witness(psi, env_dim: int, f_claim: CpMap) -> np.ndarray:
    """Normalized environment state v with psi = g ⊗ v, where CPM(g) = f_claim."""
    psi = la.as_mat(psi)
    verdict = is_pure(f_claim)
    if not verdict.is_pure:
        raise NotPure(f"claimed marginal is not pure (residual {verdict.residual:.3e})")
    g = verdict.pure_part
    out_dim, in_dim = g.shape
    if psi.shape != (out_dim * env_dim, in_dim):
        raise DimMismatch(f"psi shape {psi.shape} vs g {g.shape} and env_dim {env_dim}")

    marginal = discard_environment(psi, env_dim)
    dist = choi_distance(marginal, f_claim)
    if dist > 1e-8 * (1.0 + choi_norm(f_claim)):
        raise NotFactorizable(f"marginal differs from the claimed map (Choi distance {dist:.3e})")

    gg = la.inner(g, g).real
    if gg == 0.0:
        v = np.zeros((env_dim, 1), dtype=np.complex128)
        v[0, 0] = 1.0
        return v
    blocks = psi.reshape(out_dim, env_dim, in_dim)
    v = np.einsum("oi,oki->k", np.conj(g), blocks).reshape(env_dim, 1) / gg
    resid = la.frob_dist(psi, la.kron(g, v))
    if resid > 1e-7 * (1.0 + la.frob_norm(psi)):
        raise NotFactorizable(f"psi is not a product g ⊗ v (residual {resid:.3e})")
    return v / np.linalg.norm(v)

"""Seeded random instances for the tests and the experiment scripts."""

from __future__ import annotations

import numpy as np

from . import cpmap as cp
from . import frobenius as fb
from . import linalg as la


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rng, rows: int, cols: int) -> np.ndarray:
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def random_hermitian(rng, n: int) -> np.ndarray:
    x = ginibre(rng, n, n)
    return (x + la.dag(x)) / 2


def random_psd(rng, n: int, rank: int | None = None) -> np.ndarray:
    x = ginibre(rng, n, rank or n)
    return x @ la.dag(x)


def random_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unit_vector(rng, n: int) -> np.ndarray:
    v = ginibre(rng, n, 1)
    return v / np.linalg.norm(v)


def orthogonal_isometries(rng, k: int, in_dim: int, out_dim: int) -> list[np.ndarray]:
    """k isometries in_dim -> out_dim with pairwise orthogonal images (Gram-Schmidt via QR)."""
    if k * in_dim > out_dim:
        raise ValueError("need k * in_dim <= out_dim")
    q, _ = np.linalg.qr(ginibre(rng, out_dim, k * in_dim))
    return [q[:, i * in_dim : (i + 1) * in_dim] for i in range(k)]


def random_isometry(rng, in_dim: int, out_dim: int) -> np.ndarray:
    return orthogonal_isometries(rng, 1, in_dim, out_dim)[0]


def random_sphere_coeffs(rng, k: int) -> np.ndarray:
    """Positive q with Σ q² = 1."""
    q = np.abs(rng.normal(size=k)) + 0.05
    return q / np.linalg.norm(q)


def isometric_combination(rng, k: int, in_dim: int, out_dim: int):
    """Σ q_i CPM(V_i) with orthogonal-image isometries V_i; returns (map, q, V)."""
    vs = orthogonal_isometries(rng, k, in_dim, out_dim)
    q = random_sphere_coeffs(rng, k)
    phi = cp.add([cp.cpm_double(v) for v in vs], list(q))
    return phi, q, vs


def random_channel(rng, in_dim: int, out_dim: int, n_kraus: int) -> cp.CpMap:
    """Trace-preserving map with n_kraus random Kraus operators."""
    if in_dim > out_dim * n_kraus:
        raise ValueError("a trace-preserving map needs in_dim <= out_dim * n_kraus")
    ops = [ginibre(rng, out_dim, in_dim) for _ in range(n_kraus)]
    s = sum(la.dag(a) @ a for a in ops)
    eig = la.herm_eig(s)
    inv_sqrt = eig.eigenvectors @ np.diag(eig.eigenvalues**-0.5) @ la.dag(eig.eigenvectors)
    return cp.CpMap(in_dim, out_dim, tuple(a @ inv_sqrt for a in ops))


def depolarizing(p: float, d: int = 2) -> cp.CpMap:
    """ρ ↦ (1-p) ρ + p Tr(ρ) 1/d, via the d² Weyl-Heisenberg unitaries."""
    x = np.roll(la.eye(d), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = []
    for a in range(d):
        for b in range(d):
            w = np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
            coeff = 1 - p + p / d**2 if (a, b) == (0, 0) else p / d**2
            ops.append(np.sqrt(coeff) * w)
    return cp.CpMap(d, d, tuple(ops))


GENERATOR_FAMILIES = ("spider", "matrix", "cyclic")


def generator_instance(family: str, n: int) -> fb.FrobeniusAlgebra:
    if family == "spider":
        return fb.spider(n)
    if family == "matrix":
        return fb.matrix_algebra(n)
    if family == "cyclic":
        return fb.cyclic_group_algebra(n)
    raise ValueError(f"unknown generator family {family!r}")


def random_ssfa(rng) -> fb.FrobeniusAlgebra:
    """A generated †-SSFA transported to a random basis."""
    family = GENERATOR_FAMILIES[rng.integers(len(GENERATOR_FAMILIES))]
    n = {"spider": rng.integers(1, 5), "matrix": rng.integers(1, 3), "cyclic": rng.integers(1, 5)}[family]
    a = generator_instance(family, int(n))
    return fb.change_basis(a, random_unitary(rng, a.dim))


def mub_mixture(rng, d: int, weight: float | None = None) -> fb.CpComonoid:
    """Convex mixture of doubled spiders in the computational and Fourier bases."""
    w = float(rng.uniform(0.1, 0.9)) if weight is None else weight
    a = fb.double_algebra(fb.spider(d))
    b = fb.double_algebra(fb.change_basis(fb.spider(d), fb.fourier(d)))
    return fb.mix_comonoids([a, b], [w, 1 - w])

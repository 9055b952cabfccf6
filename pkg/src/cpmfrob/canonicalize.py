"""Decomposition of CP isometries and canonicalization of CP Frobenius comonoids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cpmap as cp
from . import linalg as la
from .cpmap import CpMap
from .errors import (
    CounitNotPure,
    HypothesesFailed,
    NotIsometry,
    NumericalDegeneracy,
    TheoremViolationDiagnostic,
)
from .frobenius import (
    COMONOID_HYPOTHESES,
    AxiomReport,
    CpComonoid,
    FrobeniusAlgebra,
    check_cp_comonoid,
    check_fhilb_algebra,
    measure_phases,
    normalize_phases,
)


@dataclass
class IsometryDecomposition:
    """Φ = Σ_i q_i CPM(V_i) with V_j† V_i = δ_ij 1 and Σ_i q_i² = 1."""

    coeffs: list[float]
    isometries: list[np.ndarray]

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def reconstruct(self) -> CpMap:
        return cp.add([cp.cpm_double(v) for v in self.isometries], self.coeffs)

    def orthogonality_residuals(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n, n))
        for i, vi in enumerate(self.isometries):
            one = la.eye(vi.shape[1])
            for j, vj in enumerate(self.isometries):
                out[i, j] = la.frob_dist(la.dag(vj) @ vi, one if i == j else 0 * one)
        return out


@dataclass
class CanonicalizationResult:
    algebra: FrobeniusAlgebra
    lambda_used: float
    residual_delta: float
    residual_epsilon: float
    report: AxiomReport
    decomposition: IsometryDecomposition | None = None


def isometry_defect(phi: CpMap) -> float:
    """Choi distance between Φ†∘Φ and the identity channel."""
    return cp.choi_distance(cp.compose(cp.dagger(phi), phi), cp.identity_channel(phi.in_dim))


def decompose_cp_isometry(phi: CpMap, tol: float = 1e-8) -> IsometryDecomposition:
    """Write a CP isometry as a positive combination of pure isometries with orthogonal images.

    The Kraus operators of an isometric Φ satisfy A_j† A_i = c_ij 1. The
    Gram matrix C = (c_ij) is diagonalized, C = U Λ U†; rotating the Kraus
    set by conj(U) gives B_i with B_j† B_i = λ_i δ_ij 1. Then q_i = λ_i and
    V_i = B_i / √λ_i, and Φ†Φ = 1 reads Σ q_i² = 1.
    """
    d = phi.in_dim
    if d == 0:
        return IsometryDecomposition([], [])
    defect = isometry_defect(phi)
    if defect > tol:
        raise NotIsometry(f"Φ†Φ differs from the identity (Choi distance {defect:.3e})", defect)

    ops = cp.minimal_kraus(phi).kraus
    r = len(ops)
    gram = np.empty((r, r), dtype=np.complex128)
    one = la.eye(d)
    worst = 0.0
    for i, ai in enumerate(ops):
        for j, aj in enumerate(ops):
            prod = la.dag(aj) @ ai
            gram[i, j] = np.trace(prod) / d
            worst = max(worst, la.frob_dist(prod, gram[i, j] * one))
    if worst > tol:
        raise NotIsometry(
            f"Kraus products are not multiples of the identity (residual {worst:.3e})", defect
        )

    eig = la.herm_eig(gram)
    lam, u = eig.eigenvalues, eig.eigenvectors
    if lam.size == 0 or lam[0] <= 0.0:
        raise NumericalDegeneracy("no positive Gram eigenvalue for a non-zero isometry")
    keep = np.flatnonzero(lam > tol * lam[0])
    coeffs, isos = [], []
    wbar = np.conj(u)
    for i in keep:
        b = sum(wbar[k, i] * ops[k] for k in range(r))
        coeffs.append(float(lam[i]))
        isos.append(b / np.sqrt(lam[i]))
    return IsometryDecomposition(coeffs, isos)


def _zero_result(c: CpComonoid, report: AxiomReport) -> CanonicalizationResult:
    algebra = FrobeniusAlgebra(0, np.zeros((0, 0)), np.zeros((1, 0)), verified=True)
    return CanonicalizationResult(algebra, 0.0, 0.0, 0.0, report, IsometryDecomposition([], []))


def canonicalize_comonoid(c: CpComonoid, tol: float = 1e-8) -> CanonicalizationResult:
    """Recover the fHilb †-SSFA whose doubling is the given CP comonoid.

    Unit laws, speciality and both snake equations are required at ``tol``;
    associativity is reported only.
    """
    report = check_cp_comonoid(c, tol=tol)
    failing = report.failing(tol, COMONOID_HYPOTHESES)
    if failing:
        raise HypothesesFailed(report, failing, tol)
    if c.dim == 0:
        return _zero_result(c, report)

    dec = decompose_cp_isometry(c.delta, tol=tol)
    if dec.n != 1:
        raise TheoremViolationDiagnostic(dec.n, dec.coeffs)
    delta = la.fix_phase(np.sqrt(dec.coeffs[0]) * dec.isometries[0])

    verdict = cp.is_pure(c.counit, rel_tol=tol)
    if not verdict.is_pure:
        raise CounitNotPure(verdict.residual)
    eps_raw = verdict.pure_part

    lam = measure_phases(delta, eps_raw).lambda_
    algebra = normalize_phases(delta, eps_raw, tol=tol)
    return CanonicalizationResult(
        algebra=algebra,
        lambda_used=lam,
        residual_delta=cp.choi_distance(cp.cpm_double(algebra.delta), c.delta),
        residual_epsilon=cp.choi_distance(cp.cpm_double(algebra.epsilon), c.counit),
        report=report,
        decomposition=dec,
    )


def verify_canonical(result: CanonicalizationResult, c: CpComonoid) -> AxiomReport:
    """Recompute the fHilb law report and both doubling residuals from scratch."""
    a = result.algebra
    report = check_fhilb_algebra(a)
    if a.dim == 0 and c.dim == 0:
        report.doubling = {"delta": 0.0, "epsilon": 0.0}
        return report
    report.doubling = {
        "delta": cp.choi_distance(cp.cpm_double(a.delta), c.delta),
        "epsilon": cp.choi_distance(cp.cpm_double(a.epsilon), c.counit),
    }
    return report


def canonicalize(c: CpComonoid, tol: float = 1e-8) -> tuple[CanonicalizationResult, AxiomReport]:
    """Canonicalize and independently re-verify."""
    result = canonicalize_comonoid(c, tol=tol)
    return result, verify_canonical(result, c)

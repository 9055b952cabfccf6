"""Frobenius structures in fHilb and CPM(fHilb): types, law checkers, phases, generators.

Law residuals are Frobenius distances between the two sides of each law
(matrix level for fHilb, Choi level for CP maps). With cup = δ∘ε† and
cap = ε∘δ† the laws are

=========== ===============================================
assoc       (δ⊗1)δ  vs  (1⊗δ)δ
left_unit   (ε⊗1)δ  vs  1
right_unit  (1⊗ε)δ  vs  1
symmetry    cap∘swap  vs  cap
speciality  δ†δ  vs  1
snake_left  (cap⊗1)(1⊗cup)  vs  1
snake_right (1⊗cap)(cup⊗1)  vs  1
frobenius   max of (1⊗δ†)(δ⊗1) and (δ†⊗1)(1⊗δ)  vs  δδ†
=========== ===============================================

Symmetry is the symmetric-algebra law for the multiplication δ† (its
dagger is swap∘cup = cup), so noncommutative matrix algebras pass it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import cpmap as cp
from . import linalg as la
from .cpmap import CpMap
from .errors import DimMismatch, NotFrobenius, NotProjectiveAlgebra

LAWS = (
    "assoc",
    "left_unit",
    "right_unit",
    "symmetry",
    "speciality",
    "snake_left",
    "snake_right",
    "frobenius",
)

# laws canonicalization needs; associativity is reported but not required
COMONOID_HYPOTHESES = ("left_unit", "right_unit", "speciality", "snake_left", "snake_right")

PROJECTIVE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    dim: int
    delta: np.ndarray
    epsilon: np.ndarray
    verified: bool = False

    def __post_init__(self):
        d = self.dim
        delta = la.as_mat(self.delta) if d else np.zeros((0, 0), dtype=np.complex128)
        eps = la.as_mat(self.epsilon) if d else np.zeros((1, 0), dtype=np.complex128)
        if delta.shape != (d * d, d) or eps.shape != (1, d):
            raise DimMismatch(
                f"delta {delta.shape} / epsilon {eps.shape} do not fit dim {d}"
            )
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True, eq=False)
class CpComonoid:
    dim: int
    delta: CpMap
    counit: CpMap

    def __post_init__(self):
        d = self.dim
        if (self.delta.in_dim, self.delta.out_dim) != (d, d * d):
            raise DimMismatch(f"Delta is {self.delta.in_dim}->{self.delta.out_dim}, need {d}->{d * d}")
        if (self.counit.in_dim, self.counit.out_dim) != (d, 1):
            raise DimMismatch(f"E is {self.counit.in_dim}->{self.counit.out_dim}, need {d}->1")


@dataclass
class AxiomReport:
    residuals: dict[str, float]
    snake_trace: float
    lambda_matrix: np.ndarray | None = None
    rho_matrix: np.ndarray | None = None
    doubling: dict[str, float] | None = None

    def failing(self, tol: float, laws: Sequence[str] = LAWS) -> list[str]:
        return [k for k in laws if self.residuals[k] > tol]

    def passes(self, tol: float, laws: Sequence[str] = LAWS) -> bool:
        return not self.failing(tol, laws)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


@dataclass(frozen=True)
class PhaseReport:
    alpha: float
    rho: float
    sigma: float
    phi: float
    lambda_: float = field(metadata={"name": "lambda"})

    def as_dict(self) -> dict[str, float]:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "sigma": self.sigma,
            "phi": self.phi,
            "lambda": self.lambda_,
        }


# -- fHilb level ---------------------------------------------------------


def _law_sides(delta: np.ndarray, epsilon: np.ndarray) -> dict[str, tuple]:
    """(LHS, RHS) pairs of every law; 'frobenius' carries two LHS candidates."""
    d = delta.shape[1]
    one = la.eye(d)
    mult = la.dag(delta)
    cup = delta @ la.dag(epsilon)
    cap = epsilon @ mult
    return {
        "assoc": (la.kron(delta, one) @ delta, la.kron(one, delta) @ delta),
        "left_unit": (la.kron(epsilon, one) @ delta, one),
        "right_unit": (la.kron(one, epsilon) @ delta, one),
        "symmetry": (cap @ la.swap(d, d), cap),
        "speciality": (mult @ delta, one),
        "snake_left": (la.kron(cap, one) @ la.kron(one, cup), one),
        "snake_right": (la.kron(one, cap) @ la.kron(cup, one), one),
        "frobenius": (
            (la.kron(one, mult) @ la.kron(delta, one), la.kron(mult, one) @ la.kron(one, delta)),
            delta @ mult,
        ),
    }


def check_fhilb_algebra(a: FrobeniusAlgebra, tol: float = 1e-9) -> AxiomReport:
    """Residual of every law at phase zero.

    ``snake_trace`` is the doubled scalar |Tr(left snake)|^2, so it is
    directly comparable with the CP-level value dim^2.
    """
    if a.dim == 0:
        return AxiomReport({k: 0.0 for k in LAWS}, 0.0)
    sides = _law_sides(a.delta, a.epsilon)
    res = {}
    for law, (lhs, rhs) in sides.items():
        if law == "frobenius":
            res[law] = max(la.frob_dist(x, rhs) for x in lhs)
        else:
            res[law] = la.frob_dist(lhs, rhs)
    snake = sides["snake_left"][0]
    return AxiomReport(res, float(abs(np.trace(snake)) ** 2))


# -- CPM level -----------------------------------------------------------


def _cp_snakes(delta: CpMap, counit: CpMap, d: int):
    one = cp.identity_channel(d)
    cup = cp.compose(delta, cp.dagger(counit))
    cap = cp.compose(counit, cp.dagger(delta))
    left = cp.compose(cp.tensor(cap, one), cp.tensor(one, cup))
    right = cp.compose(cp.tensor(one, cap), cp.tensor(cup, one))
    return cup, cap, left, right


def check_cp_comonoid(c: CpComonoid, tol: float = 1e-8) -> AxiomReport:
    """Choi-level residuals of every law for a candidate CP comonoid.

    When Δ passes the isometry test the λ/ρ snake-coefficient matrices are
    attached: with Δ = Σ q_i CPM(V_i), entry (i, j) is the superoperator
    trace of the left (right) snake built from V_i in the cup and V_j in
    the cap, divided by dim².
    """
    d = c.dim
    if d == 0:
        return AxiomReport({k: 0.0 for k in LAWS}, 0.0)
    D, E = c.delta, c.counit
    one = cp.identity_channel(d)
    Dd = cp.dagger(D)
    cup, cap, left, right = _cp_snakes(D, E, d)
    dist = cp.choi_distance
    res = {
        "assoc": dist(cp.compose(cp.tensor(D, one), D), cp.compose(cp.tensor(one, D), D)),
        "left_unit": dist(cp.compose(cp.tensor(E, one), D), one),
        "right_unit": dist(cp.compose(cp.tensor(one, E), D), one),
        "symmetry": dist(cp.compose(cap, cp.cpm_double(la.swap(d, d))), cap),
        "speciality": dist(cp.compose(Dd, D), one),
        "snake_left": dist(left, one),
        "snake_right": dist(right, one),
    }
    dd = cp.compose(D, Dd)
    res["frobenius"] = max(
        dist(cp.compose(cp.tensor(one, Dd), cp.tensor(D, one)), dd),
        dist(cp.compose(cp.tensor(Dd, one), cp.tensor(one, D)), dd),
    )
    report = AxiomReport(res, cp.superop_trace(left))
    if res["speciality"] <= tol:
        report.lambda_matrix, report.rho_matrix = _snake_coefficients(c, tol)
    return report


def _snake_coefficients(c: CpComonoid, tol: float):
    from .canonicalize import decompose_cp_isometry
    from .errors import CpmFrobError

    try:
        dec = decompose_cp_isometry(c.delta, tol=tol)
    except CpmFrobError:
        return None, None
    d = c.dim
    one = cp.identity_channel(d)
    Ed = cp.dagger(c.counit)
    pure = [cp.cpm_double(v) for v in dec.isometries]
    cups = [cp.compose(v, Ed) for v in pure]
    caps = [cp.compose(c.counit, cp.dagger(v)) for v in pure]
    n = dec.n
    lam = np.zeros((n, n))
    rho = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            left = cp.compose(cp.tensor(caps[j], one), cp.tensor(one, cups[i]))
            right = cp.compose(cp.tensor(one, caps[j]), cp.tensor(cups[i], one))
            lam[i, j] = cp.superop_trace(left) / d**2
            rho[i, j] = cp.superop_trace(right) / d**2
    return lam, rho


# -- phases --------------------------------------------------------------


def _phase(law: str, lhs: np.ndarray, rhs: np.ndarray) -> float:
    """θ with lhs ≈ e^{iθ} rhs, θ = arg <rhs, lhs>."""
    ip = la.inner(rhs, lhs)
    theta = la.wrap_angle(float(np.angle(ip))) if ip != 0 else 0.0
    resid = la.frob_dist(lhs, np.exp(1j * theta) * rhs)
    if resid > PROJECTIVE_TOL * (1.0 + la.frob_norm(rhs)):
        raise NotProjectiveAlgebra(law, resid)
    return theta


def measure_phases(delta, epsilon) -> PhaseReport:
    """Phase by which each law fails, under LHS = e^{iθ} RHS.

    Scaling ε by e^{iθ} shows up as lambda = rho = θ; scaling δ by
    e^{iθ} gives lambda = rho = θ as well while alpha, sigma and phi stay
    zero (both sides of those laws pick up the same factor).
    """
    delta = la.as_mat(delta)
    epsilon = la.as_mat(epsilon)
    d = delta.shape[1]
    if delta.shape != (d * d, d) or epsilon.shape != (1, d):
        raise DimMismatch(f"delta {delta.shape} / epsilon {epsilon.shape}")
    if d == 0:
        return PhaseReport(0.0, 0.0, 0.0, 0.0, 0.0)
    sides = _law_sides(delta, epsilon)
    frob_lhs, frob_rhs = sides["frobenius"]
    phi = _phase("frobenius", frob_lhs[0], frob_rhs)
    _phase("frobenius", frob_lhs[1], frob_rhs)
    return PhaseReport(
        alpha=_phase("assoc", *sides["assoc"]),
        rho=_phase("right_unit", *sides["right_unit"]),
        sigma=_phase("symmetry", *sides["symmetry"]),
        phi=phi,
        lambda_=_phase("left_unit", *sides["left_unit"]),
    )


def normalize_phases(delta, epsilon, tol: float = 1e-8) -> FrobeniusAlgebra:
    """Rescale ε by e^{-iλ} so the left unit law holds exactly; then every law holds."""
    delta = la.as_mat(delta)
    epsilon = la.as_mat(epsilon)
    phases = measure_phases(delta, epsilon)
    eps = np.exp(-1j * phases.lambda_) * epsilon
    out = FrobeniusAlgebra(delta.shape[1], delta, eps)
    report = check_fhilb_algebra(out)
    bad = report.failing(tol)
    if bad:
        raise NotFrobenius(f"laws {bad} still fail after phase normalization", report.residuals)
    return FrobeniusAlgebra(out.dim, out.delta, out.epsilon, verified=True)


# -- generators ----------------------------------------------------------


def _verified(d: int, delta: np.ndarray, epsilon: np.ndarray) -> FrobeniusAlgebra:
    a = FrobeniusAlgebra(d, delta, epsilon)
    ok = check_fhilb_algebra(a).passes(1e-9 * max(d, 1))
    return FrobeniusAlgebra(d, a.delta, a.epsilon, verified=ok)


def spider(d: int) -> FrobeniusAlgebra:
    """Classical structure of the computational basis."""
    if d < 1:
        raise ValueError("spider needs d >= 1")
    delta = np.zeros((d * d, d), dtype=np.complex128)
    idx = np.arange(d)
    delta[idx * d + idx, idx] = 1.0
    return _verified(d, delta, np.ones((1, d), dtype=np.complex128))


def matrix_algebra(n: int) -> FrobeniusAlgebra:
    """M_n on C^{n^2}: δ(E_ij) = n^{-1/2} Σ_k E_ik ⊗ E_kj, ε(a) = √n Tr(a)."""
    if n < 1:
        raise ValueError("matrix_algebra needs n >= 1")
    d = n * n
    delta = np.zeros((d * d, d), dtype=np.complex128)
    epsilon = np.zeros((1, d), dtype=np.complex128)
    c = 1.0 / np.sqrt(n)
    for i in range(n):
        epsilon[0, i * n + i] = np.sqrt(n)
        for j in range(n):
            for k in range(n):
                delta[(i * n + k) * d + (k * n + j), i * n + j] = c
    return _verified(d, delta, epsilon)


def cyclic_group_algebra(n: int) -> FrobeniusAlgebra:
    """Group algebra of Z_n: δ(g) = n^{-1/2} Σ_h h ⊗ (g - h), ε(g) = √n [g = 0]."""
    if n < 1:
        raise ValueError("cyclic_group_algebra needs n >= 1")
    delta = np.zeros((n * n, n), dtype=np.complex128)
    c = 1.0 / np.sqrt(n)
    for g in range(n):
        for h in range(n):
            delta[h * n + (g - h) % n, g] = c
    epsilon = np.zeros((1, n), dtype=np.complex128)
    epsilon[0, 0] = np.sqrt(n)
    return _verified(n, delta, epsilon)


def direct_sum(a: FrobeniusAlgebra, b: FrobeniusAlgebra) -> FrobeniusAlgebra:
    da, db = a.dim, b.dim
    d = da + db
    delta = np.zeros((d * d, d), dtype=np.complex128)
    ia, ib = np.arange(da), da + np.arange(db)
    rows_a = (ia[:, None] * d + ia[None, :]).ravel()
    rows_b = (ib[:, None] * d + ib[None, :]).ravel()
    delta[np.ix_(rows_a, ia)] = a.delta
    delta[np.ix_(rows_b, ib)] = b.delta
    epsilon = np.concatenate([a.epsilon, b.epsilon], axis=1)
    return _verified(d, delta, epsilon)


def change_basis(a: FrobeniusAlgebra, u) -> FrobeniusAlgebra:
    """Transport along a unitary u: δ ↦ (u⊗u) δ u†, ε ↦ ε u†."""
    u = la.as_mat(u)
    if u.shape != (a.dim, a.dim):
        raise DimMismatch(f"unitary {u.shape} for dim {a.dim}")
    return _verified(a.dim, la.kron(u, u) @ a.delta @ la.dag(u), a.epsilon @ la.dag(u))


def fourier(d: int) -> np.ndarray:
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def perturb_phases(a: FrobeniusAlgebra, thetas) -> tuple[np.ndarray, np.ndarray]:
    """(e^{iθ_δ} δ, e^{iθ_ε} ε); a scalar ``thetas`` perturbs ε only."""
    if np.ndim(thetas) == 0:
        t_delta, t_eps = 0.0, float(thetas)
    else:
        t_delta, t_eps = (float(t) for t in thetas)
    return np.exp(1j * t_delta) * a.delta, np.exp(1j * t_eps) * a.epsilon


def double_algebra(a: FrobeniusAlgebra) -> CpComonoid:
    if a.dim == 0:
        return CpComonoid(0, cp.zero_map(0, 0), cp.zero_map(0, 1))
    return CpComonoid(a.dim, cp.cpm_double(a.delta), cp.cpm_double(a.epsilon))


def mix_comonoids(comonoids: Sequence[CpComonoid], weights: Sequence[float]) -> CpComonoid:
    """Convex combination of comonoids; generally not a comonoid (adversarial inputs)."""
    comonoids = list(comonoids)
    d = comonoids[0].dim
    if any(c.dim != d for c in comonoids):
        raise DimMismatch("mix_comonoids: dimensions differ")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    return CpComonoid(
        d,
        cp.add([c.delta for c in comonoids], weights),
        cp.add([c.counit for c in comonoids], weights),
    )

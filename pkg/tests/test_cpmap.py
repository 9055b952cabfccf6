import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpmfrob import cpmap as cp
from cpmfrob import linalg as la
from cpmfrob import randomgen as rg
from cpmfrob.errors import DimMismatch, NotCP, NotFactorizable, NotPure

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)


def choi_oracle(phi):
    """Σ_ij E_ij ⊗ Φ(E_ij), built entry by entry."""
    d, k = phi.in_dim, phi.out_dim
    out = np.zeros((d * k, d * k), dtype=complex)
    for i in range(d):
        for j in range(d):
            eij = np.zeros((d, d))
            eij[i, j] = 1
            out[i * k:(i + 1) * k, j * k:(j + 1) * k] = phi.apply(eij)
    return out


def test_cpm_double_identity_channel(rng):
    phi = cp.cpm_double(la.eye(3))
    rho = rg.random_psd(rng, 3)
    assert np.allclose(phi.apply(rho), rho)
    assert (phi.in_dim, phi.out_dim, phi.rank) == (3, 3, 1)


def test_cpm_double_phase_blind(rng):
    f = rg.ginibre(rng, 3, 2)
    a, b = cp.cpm_double(f), cp.cpm_double(np.exp(0.83j) * f)
    assert la.frob_dist(a.choi, b.choi) < 1e-14


def test_cpm_double_hadamard():
    rho0 = np.array([[1, 0], [0, 0]])
    out = cp.cpm_double(HADAMARD).apply(rho0)
    assert np.allclose(out, HADAMARD @ rho0 @ HADAMARD.T)
    assert np.allclose(out, np.full((2, 2), 0.5))


def test_choi_matches_definition(rng):
    phi = rg.random_channel(rng, 2, 3, 3)
    assert np.allclose(cp.choi(phi), choi_oracle(phi), atol=1e-13)


def test_choi_identity_and_discard():
    c = cp.choi(cp.identity_channel(2))
    omega = np.zeros((4, 1))
    omega[[0, 3]] = 1
    assert np.array_equal(c, omega @ omega.T)
    assert np.trace(c) == 2
    assert np.array_equal(cp.choi(cp.discard(3)), la.eye(3))


def test_choi_round_trip(rng):
    phi = cp.CpMap(3, 2, tuple(rg.ginibre(rng, 2, 3) for _ in range(4)))
    back = cp.from_choi(cp.choi(phi), 3, 2)
    assert la.frob_dist(back.choi, phi.choi) <= 1e-10 * la.frob_norm(phi.choi)
    assert back.rank == 4


def test_from_choi_rejects_non_cp():
    with pytest.raises(NotCP):
        cp.from_choi(-la.eye(4), 2, 2)
    with pytest.raises(DimMismatch):
        cp.from_choi(la.eye(4), 2, 3)


def test_compose_isometry_dagger_is_identity(rng):
    v = rg.random_isometry(rng, 2, 5)
    phi = cp.cpm_double(v)
    assert cp.choi_distance(cp.compose(cp.dagger(phi), phi), cp.identity_channel(2)) <= 1e-10


def test_tensor_with_trivial(rng):
    f = rg.random_channel(rng, 2, 3, 2)
    assert cp.choi_distance(cp.tensor(cp.identity_channel(1), f), f) < 1e-14
    assert cp.choi_distance(cp.tensor(f, cp.identity_channel(1)), f) < 1e-14


def test_add_is_choi_linear(rng):
    a, b = rg.random_channel(rng, 2, 2, 2), rg.random_channel(rng, 2, 2, 3)
    mixed = cp.add([a, b], [0.5, 0.5])
    assert np.allclose(mixed.choi, 0.5 * (a.choi + b.choi), atol=1e-14)


def test_signature_errors(rng):
    a = rg.random_channel(rng, 2, 3, 1)
    with pytest.raises(DimMismatch):
        cp.compose(a, a)
    with pytest.raises(DimMismatch):
        cp.add([a, cp.dagger(a)])
    with pytest.raises(DimMismatch):
        cp.CpMap(2, 2, (np.ones((3, 2)),))


def test_kraus_recompression(rng):
    a = rg.random_channel(rng, 2, 2, 4)
    big = cp.add([a, a, a], [0.2, 0.3, 0.5])
    assert big.rank <= 4
    assert cp.choi_distance(big, a) < 1e-12


def test_discard():
    assert cp.choi_distance(cp.discard(1), cp.identity_channel(1)) == 0.0


def test_discard_gives_trace(rng):
    rho = rg.ginibre(rng, 3, 3)
    assert abs(cp.discard(3).apply(rho)[0, 0] - np.trace(rho)) < 1e-14


def test_discard_after_isometry(rng):
    v = rg.random_isometry(rng, 2, 4)
    lhs = cp.compose(cp.discard(4), cp.cpm_double(v))
    assert cp.choi_distance(lhs, cp.discard(2)) < 1e-12


def test_choi_distance_matches_dense(rng):
    a = rg.random_channel(rng, 2, 3, 2)
    b = rg.random_channel(rng, 2, 3, 3)
    assert cp.choi_distance(a, b) == pytest.approx(la.frob_dist(a.choi, b.choi), rel=1e-12)
    assert cp.choi_distance(a, a) < 1e-14


def test_superop_trace(rng):
    assert cp.superop_trace(cp.identity_channel(3)) == pytest.approx(9)
    f = rg.ginibre(rng, 3, 3)
    assert cp.superop_trace(cp.cpm_double(f)) == pytest.approx(abs(np.trace(f)) ** 2)


def test_is_pure_recovers_pure_part(rng):
    f = rg.ginibre(rng, 3, 2)
    v = cp.is_pure(cp.cpm_double(f))
    assert v.is_pure
    assert abs(abs(la.inner(v.pure_part, f)) - la.inner(f, f).real) <= 1e-8 * la.inner(f, f).real
    assert la.frob_dist(cp.cpm_double(v.pure_part).choi, cp.cpm_double(f).choi) <= 1e-8 * la.frob_norm(
        cp.cpm_double(f).choi
    )


def test_is_pure_rejects_mixture():
    # Choi rank 2 by construction: the vectorizations of 1 and σ_x are independent
    mixed = cp.add([cp.cpm_double(la.eye(2)), cp.cpm_double(SX)], [0.5, 0.5])
    v = cp.is_pure(mixed)
    assert not v.is_pure and v.pure_part is None
    assert v.residual == pytest.approx(np.sqrt(0.5), rel=1e-12)


def test_is_pure_zero_map():
    v = cp.is_pure(cp.zero_map(2, 3))
    assert v.is_pure and np.array_equal(v.pure_part, np.zeros((3, 2)))


def test_is_pure_phase_rule():
    f = np.array([[0.1, -3j], [1.0, 0.2]])
    v = cp.is_pure(cp.cpm_double(f))
    k = np.argmax(np.abs(v.pure_part))
    assert v.pure_part.ravel()[k].imag == pytest.approx(0, abs=1e-14)
    assert v.pure_part.ravel()[k].real > 0


def _purified_marginal(psi, env):
    return cp.discard_environment(psi, env)


def test_purify_pure_map(rng):
    f = rg.ginibre(rng, 2, 3)
    psi, env = cp.purify(cp.cpm_double(f))
    assert env == 1
    assert abs(abs(la.inner(psi, f)) - la.frob_norm(f) ** 2) < 1e-10


def test_purify_discard():
    psi, env = cp.purify(cp.discard(3))
    assert env == 3
    assert cp.choi_distance(_purified_marginal(psi, env), cp.discard(3)) <= 1e-9


def test_purify_depolarizing():
    phi = rg.depolarizing(0.4)
    psi, env = cp.purify(phi)
    assert env == 4
    assert psi.shape == (2 * 4, 2)
    assert cp.choi_distance(_purified_marginal(psi, env), phi) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_purify_round_trip(din, dout, nk, seed):
    r = np.random.default_rng(seed)
    phi = cp.CpMap(din, dout, tuple(rg.ginibre(r, dout, din) for _ in range(nk)))
    psi, env = cp.purify(phi)
    assert cp.choi_distance(_purified_marginal(psi, env), phi) <= 1e-9 * max(1.0, cp.choi_norm(phi))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_doubling_functorial(a, b, c, seed):
    r = np.random.default_rng(seed)
    f, g = rg.ginibre(r, b, a), rg.ginibre(r, c, b)
    lhs = cp.compose(cp.cpm_double(g), cp.cpm_double(f))
    assert la.frob_dist(lhs.choi, cp.cpm_double(g @ f).choi) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_choi_kraus_duality(din, dout, nk, seed):
    r = np.random.default_rng(seed)
    phi = cp.CpMap(din, dout, tuple(rg.ginibre(r, dout, din) for _ in range(nk)))
    back = cp.from_choi(phi.choi, din, dout)
    assert cp.choi_distance(back, phi) <= 1e-10 * max(1.0, cp.choi_norm(phi))


def test_sums_version_coefficients(rng):
    f = cp.cpm_double(rg.ginibre(rng, 2, 2))
    p = np.array([0.2, 0.5, 0.3])
    parts = [cp.scale(f, pi) for pi in p]
    total = cp.add(parts)
    assert cp.is_pure(total).is_pure
    recovered = [np.trace(q.choi).real / np.trace(total.choi).real for q in parts]
    assert np.allclose(recovered, p, atol=1e-12)
    for q, pi in zip(parts, recovered):
        assert la.frob_dist(q.choi, pi * total.choi) < 1e-12


def test_purity_witness_recovers_state(rng):
    g = rg.ginibre(rng, 3, 2)
    v = rg.random_unit_vector(rng, 4)
    out = cp.purity_witness(la.kron(g, v), 4, cp.cpm_double(g))
    assert abs(abs(la.inner(out, v)) - 1) < 1e-10
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-15)


def test_purity_witness_trivial_environment(rng):
    g = la.fix_phase(rg.ginibre(rng, 2, 2))
    out = cp.purity_witness(g, 1, cp.cpm_double(g))
    assert out.shape == (1, 1) and abs(out[0, 0] - 1) < 1e-12


def test_purity_witness_rejects_subnormalized(rng):
    g = rg.ginibre(rng, 2, 2)
    v = 0.5 * rg.random_unit_vector(rng, 3)
    with pytest.raises(NotFactorizable):
        cp.purity_witness(la.kron(g, v), 3, cp.cpm_double(g))


def test_purity_witness_rejects_entangled(rng):
    g1, g2 = rg.ginibre(rng, 2, 2), rg.ginibre(rng, 2, 2)
    psi = (la.kron(g1, la.ket(0, 2)) + la.kron(g2, la.ket(1, 2)))
    with pytest.raises(NotPure):
        cp.purity_witness(psi, 2, cp.discard_environment(psi, 2))
    with pytest.raises(NotFactorizable):
        cp.purity_witness(psi, 2, cp.cpm_double(g1))

import numpy as np
import pytest

from gstab.caps import CapExceededError
from gstab.f2core import F2Subspace, span_members, symp
from gstab.pauli import canonicalize_subgroup
from gstab.stabilizer import (
    GF2k,
    LagrangianSubspace,
    argmax_shift_in_subgroup,
    coset_mass,
    coset_mass_all_shifts,
    coset_mass_mean,
    enumerate_lagrangians,
    extend_to_lagrangian,
    fact_b1_check,
    lagrangian_count,
    lagrangian_mass,
    small_k_check,
    stabilizer_basis,
    stabilizer_covering,
    stabilizer_fidelity_bruteforce,
    symplectic_spread,
)
from gstab.state import (
    T_STATE,
    StateVector,
    char_table,
    haar_random_state,
    make_stabilizer_state,
    random_stabilizer_state,
    tensor,
)

from oracles import all_stabilizer_states_dense, span

T_FID = (2 + np.sqrt(2)) / 4


def _random_subspace(n_amb, dim, rng):
    V = F2Subspace(n_amb, ())
    while V.dim < dim:
        V = F2Subspace.from_generators(list(V.basis) + [int(rng.integers(1, 1 << n_amb))], n_amb)
    return V


def test_lagrangian_validation():
    with pytest.raises(ValueError):
        LagrangianSubspace.from_basis(1, [1, 2])
    with pytest.raises(ValueError):
        LagrangianSubspace.from_basis(2, [0b0001])
    with pytest.raises(ValueError):
        LagrangianSubspace.from_basis(2, [0b0001, 0b0100])
    T = LagrangianSubspace.from_basis(2, [0b0001, 0b0010])
    assert T.labels() == ["ZI", "IZ"]


@pytest.mark.parametrize("n,count", [(1, 3), (2, 15), (3, 135)])
def test_enumeration_counts_and_validity(n, count):
    lags = enumerate_lagrangians(n)
    assert len(lags) == count == lagrangian_count(n)
    keys = {tuple(sorted(span_members(T.subspace).tolist())) for T in lags}
    assert len(keys) == count
    for T in lags:
        ms = T.members()
        assert len(ms) == 2 ** n
        assert all(symp(int(a), int(b), n) == 0 for a in T.basis for b in T.basis)


def test_enumeration_n1_labels():
    labels = sorted(T.labels()[0] for T in enumerate_lagrangians(1))
    assert labels == ["X", "Y", "Z"]


def test_enumeration_brute_force_n2():
    # every isotropic 2-dim subspace of F_2^4, found by scanning all pairs
    found = set()
    for a in range(1, 16):
        for b in range(a + 1, 16):
            if symp(a, b, 2) == 0 and len(span([a, b])) == 4:
                found.add(tuple(sorted(span([a, b]))))
    lags = {tuple(sorted(span_members(T.subspace).tolist())) for T in enumerate_lagrangians(2)}
    assert lags == found


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        enumerate_lagrangians(5)


@pytest.mark.parametrize("n", [1, 2])
def test_stabilizer_states_match_gate_orbit(n):
    ours = np.concatenate([stabilizer_basis(T) for T in enumerate_lagrangians(n)], axis=1)
    dense = all_stabilizer_states_dense(n)
    assert ours.shape[1] == len(dense) == {1: 6, 2: 60}[n]
    for v in dense:
        assert np.max(np.abs(ours.conj().T @ v) ** 2) == pytest.approx(1.0, abs=1e-10)


def test_stabilizer_basis_is_orthonormal():
    for T in enumerate_lagrangians(3)[:20]:
        B = stabilizer_basis(T)
        np.testing.assert_allclose(B.conj().T @ B, np.eye(8), atol=1e-10)


def test_fidelity_examples():
    psi = random_stabilizer_state(3, 5)
    val, best = stabilizer_fidelity_bruteforce(psi)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert best.state().fidelity(psi) == pytest.approx(1.0, abs=1e-10)
    val, best = stabilizer_fidelity_bruteforce(T_STATE)
    assert val == pytest.approx(T_FID, abs=1e-12)
    assert abs(best.state().fidelity(T_STATE) - val) < 1e-12
    bell_t = StateVector.normalized(np.array([1, 0, 0, np.exp(1j * np.pi / 4)]))
    assert stabilizer_fidelity_bruteforce(bell_t)[0] == pytest.approx(T_FID, abs=1e-12)
    with pytest.raises(CapExceededError):
        stabilizer_fidelity_bruteforce(haar_random_state(5, 0))


def test_fidelity_matches_gate_orbit_oracle_n2():
    dense = np.stack(all_stabilizer_states_dense(2), axis=1)
    for seed in range(5):
        psi = haar_random_state(2, seed)
        ref = float(np.max(np.abs(dense.conj().T @ psi.amps) ** 2))
        assert stabilizer_fidelity_bruteforce(psi)[0] == pytest.approx(ref, abs=1e-12)


def test_generators_of_argmax():
    psi = make_stabilizer_state(["-XX", "ZZ"])
    val, best = stabilizer_fidelity_bruteforce(psi)
    assert val == pytest.approx(1.0)
    again = make_stabilizer_state(best.generators())
    assert again.fidelity(psi) == pytest.approx(1.0)


def test_lagrangian_mass_examples():
    zero = StateVector.basis(1)
    Tx = LagrangianSubspace.from_basis(1, [0b10])
    Tz = LagrangianSubspace.from_basis(1, [0b01])
    assert lagrangian_mass(zero, Tx) == pytest.approx(0.5)
    assert lagrangian_mass(zero, Tz) == pytest.approx(1.0)
    with pytest.raises(TypeError):
        lagrangian_mass(zero, F2Subspace(2, (1,)))
    with pytest.raises(ValueError):
        lagrangian_mass(haar_random_state(2, 0), Tx)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lagrangian_mass_lower_bounds_fidelity(n):
    lags = enumerate_lagrangians(n)
    for seed in range(4):
        psi = haar_random_state(n, seed)
        ct = char_table(psi)
        fid = stabilizer_fidelity_bruteforce(psi)[0]
        assert max(lagrangian_mass(ct, T) for T in lags) <= fid + 1e-9


def test_coset_mass_examples():
    psi = random_stabilizer_state(3, 0)
    ct = char_table(psi)
    full = F2Subspace.full(6)
    assert coset_mass(ct, full, 5) == pytest.approx(8.0)
    V = F2Subspace.from_generators(np.flatnonzero(ct.p > 1e-12).tolist(), 6)
    assert V.dim == 3
    assert coset_mass_mean(ct, V, 0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        coset_mass(ct, F2Subspace.full(4), 0)


def test_coset_mass_all_shifts_matches_pointwise():
    rng = np.random.default_rng(0)
    ct = char_table(haar_random_state(3, 2))
    V = _random_subspace(6, 3, rng)
    R = coset_mass_all_shifts(ct, V)
    for z in range(64):
        assert R[z] == pytest.approx(coset_mass(ct, V, z), abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_argmax_in_subgroup_small(n):
    rng = np.random.default_rng(n)
    for seed in range(10):
        ct = char_table(haar_random_state(n, seed))
        V = _random_subspace(2 * n, int(rng.integers(0, 2 * n + 1)), rng)
        ok, inside, overall = argmax_shift_in_subgroup(ct, V)
        assert ok and inside <= overall + 1e-15


def test_gf2k_field_axioms():
    for k in (1, 2, 3, 4, 5):
        F = GF2k(k)
        q = 1 << k
        for a in range(1, q):
            assert any(F.mul(a, b) == 1 for b in range(1, q))
        assert sum(F.trace(a) for a in range(q)) == q // 2


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_symplectic_spread(k):
    spread = symplectic_spread(k)
    assert len(spread) == 2 ** k + 1
    sets = []
    for L in spread:
        assert len(L) == k
        assert all(symp(a, b, k) == 0 for a in L for b in L)
        sets.append(span(L))
        assert len(sets[-1]) == 2 ** k
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            assert sets[i] & sets[j] == {0}
    assert set().union(*sets) == set(range(4 ** k))


def test_extend_to_lagrangian():
    basis = extend_to_lagrangian([0b000011], 3)
    T = LagrangianSubspace.from_basis(3, basis)
    assert 0b000011 in T
    with pytest.raises(ValueError):
        extend_to_lagrangian([0b10, 0b01], 1)


def test_covering_examples():
    cov = stabilizer_covering(F2Subspace.full(2), "mub")
    assert len(cov) == 3
    assert sorted(g.labels()[0] for g in cov.groups) == ["X", "Y", "Z"]
    iso = F2Subspace.from_generators([0b0011], 4)
    cov = stabilizer_covering(iso)
    assert len(cov) == 1 and cov.covers_target()
    # P^1 on qubit 1 with Z on qubit 2
    V = F2Subspace.from_generators([0b0100, 0b0001, 0b0010], 4)
    cov = stabilizer_covering(V)
    assert (cov.k, cov.m, len(cov)) == (1, 1, 3)
    assert cov.covers_target()
    assert len(stabilizer_covering(V, "paulis")) == 4
    with pytest.raises(ValueError):
        stabilizer_covering(V, "bogus")
    d = cov.to_dict()
    assert d["mode"] == "mub" and len(d["groups"]) == 3 and len(d["groups"][0][0]) == 4


@pytest.mark.parametrize("n", [2, 3])
def test_covering_random(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        V = _random_subspace(2 * n, int(rng.integers(0, 2 * n + 1)), rng)
        k = canonicalize_subgroup(V).k
        for mode, size in (("mub", 2 ** k + 1 if k else 1), ("paulis", 4 ** k)):
            cov = stabilizer_covering(V, mode)
            assert len(cov) == size
            assert cov.covers_target()


def test_fact_b1_examples():
    psi = random_stabilizer_state(3, 3)
    ct = char_table(psi)
    V = F2Subspace.from_generators(np.flatnonzero(ct.p > 1e-12).tolist(), 6)
    lhs, rhs, ok = fact_b1_check(psi, V)
    assert ok and lhs == pytest.approx(rhs) and rhs == 8
    psi = haar_random_state(3, 0)
    lhs, rhs, ok = fact_b1_check(psi, F2Subspace.full(6))
    # summing <W>^2 over every Pauli gives 2^n times the purity
    assert ok and rhs == 8 and lhs == pytest.approx(8.0)


def test_fact_b1_random_and_coset_mass_agree():
    rng = np.random.default_rng(4)
    for seed in range(10):
        psi = haar_random_state(4, seed)
        V = _random_subspace(8, int(rng.integers(1, 9)), rng)
        lhs, rhs, ok = fact_b1_check(psi, V)
        assert ok
        assert lhs == pytest.approx(coset_mass(psi, V, 0), abs=1e-9)


def test_small_k_check():
    # product of a stabilizer with |T> has mass concentrated on a k=0 group
    psi = tensor(T_STATE, random_stabilizer_state(2, 1))
    ct = char_table(psi)
    V = F2Subspace.from_generators(np.flatnonzero(ct.p > 0.05).tolist(), 6)
    gamma, k, ok = small_k_check(ct, V)
    assert ok and gamma > 0

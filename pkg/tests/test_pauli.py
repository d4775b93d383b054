import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstab.f2core import F2Subspace, SymplecticPoint, rank, span_members, symp
from gstab.pauli import (
    SymplecticMap,
    anticommuting_family,
    apply_clifford,
    apply_weyl,
    canonicalize_subgroup,
    clifford_matrix,
    commutes,
    symplectic_gram_schmidt,
    transvect,
    transvection_decomposition,
    weyl_matrix,
)
from gstab.state import StateVector, char_table, haar_random_state

from oracles import pauli_dense

Y = np.array([[0, -1j], [1j, 0]])


def test_weyl_matrix_single_qubit():
    np.testing.assert_allclose(weyl_matrix(SymplecticPoint(1, 1, 1)), Y)
    np.testing.assert_allclose(weyl_matrix(SymplecticPoint(1, 0, 0)), np.eye(2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weyl_matrix_matches_kron_oracle(n):
    for x in range(4 ** n):
        np.testing.assert_allclose(weyl_matrix(SymplecticPoint.from_index(n, x)), pauli_dense(x, n), atol=1e-14)


def test_weyl_matrix_properties_n2():
    n = 2
    mats = [weyl_matrix(SymplecticPoint.from_index(n, x)) for x in range(16)]
    for x, W in enumerate(mats):
        np.testing.assert_allclose(W, W.conj().T)
        np.testing.assert_allclose(W @ W, np.eye(4), atol=1e-14)
        assert abs(np.trace(W) - (4 if x == 0 else 0)) < 1e-12
    for x in range(16):
        for y in range(16):
            sign = (-1) ** symp(x, y, n)
            np.testing.assert_allclose(mats[x] @ mats[y], sign * mats[y] @ mats[x], atol=1e-14)
            assert abs(np.trace(mats[x] @ mats[y]) - (4 if x == y else 0)) < 1e-12


def test_weyl_matrix_commutation_random_n3():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y = (int(t) for t in rng.integers(0, 64, 2))
        A = weyl_matrix(SymplecticPoint.from_index(3, x))
        B = weyl_matrix(SymplecticPoint.from_index(3, y))
        np.testing.assert_allclose(A @ B, (-1) ** symp(x, y, 3) * B @ A, atol=1e-14)


def test_weyl_matrix_cap():
    with pytest.raises(ValueError):
        weyl_matrix(SymplecticPoint(11))


def test_apply_weyl_matches_matrix():
    rng = np.random.default_rng(0)
    a = rng.normal(size=8) + 1j * rng.normal(size=8)
    for x in range(64):
        np.testing.assert_allclose(apply_weyl(x, a, 3), pauli_dense(x, 3) @ a, atol=1e-13)


def test_commutes_examples():
    X, Z = SymplecticPoint.from_label("X"), SymplecticPoint.from_label("Z")
    assert not commutes(X, Z)
    assert commutes(X, X)
    pts = [SymplecticPoint.from_index(2, x) for x in range(16)]
    for a in pts:
        for b in pts:
            A, B = pauli_dense(a.index, 2), pauli_dense(b.index, 2)
            assert commutes(a, b) == np.allclose(A @ B, B @ A)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_anticommuting_family(k):
    fam = anticommuting_family(k)
    assert len(fam) == 2 * k + 1
    assert len({p.index for p in fam}) == 2 * k + 1
    for i, a in enumerate(fam):
        for b in fam[i + 1:]:
            assert not commutes(a, b)
    if k == 1:
        assert sorted(p.label() for p in fam) == ["X", "Y", "Z"]


def test_canonical_form_examples():
    cf = canonicalize_subgroup(F2Subspace(2, (SymplecticPoint.from_label("Z").index,)))
    assert (cf.k, cf.m) == (0, 1)
    cf = canonicalize_subgroup(F2Subspace.full(2))
    assert (cf.k, cf.m) == (1, 0)


def _check_form(V):
    n = V.n_ambient // 2
    cf = canonicalize_subgroup(V)
    M = cf.map
    assert M.is_symplectic()
    assert 2 * cf.k + cf.m == V.dim
    assert cf.k + cf.m <= n
    image = {M(int(x)) for x in span_members(V)}
    assert image == set(span_members(cf.image()).tolist())
    # k is half the rank of the restricted form
    gram = [sum(symp(a, b, n) << j for j, b in enumerate(V.basis)) for a in V.basis]
    rk = rank(gram)
    assert rk == 2 * cf.k
    return cf


def test_canonical_form_random_4dim_in_F2_8():
    rng = np.random.default_rng(8)
    for _ in range(50):
        V = F2Subspace(8, ())
        while V.dim < 4:
            V = F2Subspace.from_generators(list(V.basis) + [int(rng.integers(1, 256))], 8)
        _check_form(V)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 5), data=st.data())
def test_canonical_form_property(n, data):
    gens = data.draw(st.lists(st.integers(0, 4 ** n - 1), max_size=2 * n + 1))
    _check_form(F2Subspace.from_generators(gens, 2 * n))


def test_gram_schmidt_prefers_lowest_partner():
    pairs, iso = symplectic_gram_schmidt([1, 2, 4], 1)
    # Z (1) pairs with X (2); the remaining vector is reduced to the span of the pair
    assert pairs[0] == (1, 2)


def test_symplectic_map_inverse_and_compose():
    rng = np.random.default_rng(1)
    V = F2Subspace.from_generators([int(t) for t in rng.integers(1, 64, 3)], 6)
    M = canonicalize_subgroup(V).map
    Minv = M.inverse()
    assert M.compose(Minv) == SymplecticMap.identity(3)
    xs = np.arange(64)
    np.testing.assert_array_equal(M.apply_array(xs), [M(int(x)) for x in xs])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transvection_decomposition_and_clifford(n):
    rng = np.random.default_rng(20 + n)
    for _ in range(10):
        gens = [int(t) for t in rng.integers(0, 4 ** n, size=int(rng.integers(1, 2 * n + 1)))]
        M = canonicalize_subgroup(F2Subspace.from_generators(gens, 2 * n)).map
        hs = transvection_decomposition(M)
        for x in range(4 ** n):
            y = x
            for h in reversed(hs):
                y = transvect(y, h, n)
            assert y == M(x)
        U = clifford_matrix(M)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(2 ** n), atol=1e-12)
        for x in range(4 ** n):
            lhs = U @ pauli_dense(x, n) @ U.conj().T
            rhs = pauli_dense(M(x), n)
            assert np.allclose(lhs, rhs, atol=1e-12) or np.allclose(lhs, -rhs, atol=1e-12)


def test_clifford_moves_characteristic_table():
    n = 4
    psi = haar_random_state(n, 5)
    rng = np.random.default_rng(2)
    M = canonicalize_subgroup(F2Subspace.from_generators([int(t) for t in rng.integers(1, 256, 5)], 8)).map
    p = char_table(psi).p
    q = char_table(StateVector.normalized(apply_clifford(M, psi.amps))).p
    np.testing.assert_allclose(q[M.apply_array(np.arange(256))], p, atol=1e-12)

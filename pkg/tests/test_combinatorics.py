import io

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstab.f2core import F2Subspace, symp
from gstab.pauli import anticommuting_family
from gstab.combinatorics import (
    PointSet,
    build_choice_set,
    closure_probability,
    conjecture_search,
    covered_by,
    doubling,
    greedy_cover,
    iterated_sumset,
    max_clique,
    nac,
    nac_translate_bound_check,
    plunnecke_check,
    ruzsa_packing,
    sumset,
    uncertainty_sum,
    write_search_csv,
)
from gstab.state import T_STATE, char_table, gowers3_pow8, haar_random_state, random_stabilizer_state, t_state

from oracles import closure_naive, is_subgroup, span, sumset_naive


def point_sets(n_max=3, max_size=20):
    return st.integers(1, n_max).flatmap(
        lambda n: st.builds(lambda pts: PointSet(n, pts), st.lists(st.integers(0, 4 ** n - 1), min_size=1, max_size=max_size))
    )


def nac_oracle(A):
    g = nx.Graph()
    pts = A.members.tolist()
    g.add_nodes_from(pts)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if symp(a, b, A.n):
                g.add_edge(a, b)
    return max(len(c) for c in nx.find_cliques(g))


def test_point_set_basics():
    A = PointSet.from_labels(["X", "Z", "X"])
    assert len(A) == 2 and A.labels() == ["Z", "X"]
    assert 0b10 in A and 0 not in A
    assert A == PointSet(1, [1, 2]) and hash(A) == hash(PointSet(1, [2, 1]))
    assert A.issubset(PointSet(1, [0, 1, 2, 3]))
    with pytest.raises(ValueError):
        PointSet(1, [4])


def test_closure_examples():
    V = PointSet.from_subspace(F2Subspace(4, (1, 4)))
    assert closure_probability(V) == 1.0
    assert closure_probability(PointSet(1, [1, 2])) == 0.0
    with pytest.raises(ValueError):
        closure_probability(PointSet(1, []))


@settings(max_examples=60, deadline=None)
@given(point_sets())
def test_closure_matches_naive(A):
    assert closure_probability(A) == pytest.approx(closure_naive(A.members.tolist()))
    if closure_probability(A) == 1.0:
        assert is_subgroup(A.members.tolist())


@settings(max_examples=60, deadline=None)
@given(point_sets(), st.data())
def test_sumset_matches_naive(A, data):
    B = PointSet(A.n, data.draw(st.lists(st.integers(0, 4 ** A.n - 1), min_size=1, max_size=10)))
    assert set(sumset(A, B).members.tolist()) == sumset_naive(A.members.tolist(), B.members.tolist())
    assert len(sumset(A, B)) >= max(len(A), len(B))


def test_sumset_examples():
    V = PointSet.from_subspace(F2Subspace(4, (1, 2)))
    assert sumset(V, V) == V
    assert doubling(V) == 1.0
    A = PointSet(2, [1, 2, 4])
    assert iterated_sumset(A, 1) == A
    assert set(iterated_sumset(A, 2).members.tolist()) == {0, 3, 5, 6}
    with pytest.raises(ValueError):
        sumset(A, PointSet(1, [1]))
    with pytest.raises(ValueError):
        iterated_sumset(A, 0)


@settings(max_examples=60, deadline=None)
@given(point_sets(max_size=12))
def test_plunnecke(A):
    lhs, rhs, ok = plunnecke_check(A)
    assert ok and lhs <= rhs


def test_max_clique_small_graphs():
    assert max_clique([]) == []
    # triangle plus a pendant vertex
    adj = [0b0110, 0b0101, 0b1011, 0b0100]
    assert max_clique(adj) == [0, 1, 2]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2 ** 32))
def test_max_clique_matches_networkx(nv, seed):
    r = np.random.default_rng(seed)
    adj = [0] * nv
    g = nx.Graph()
    g.add_nodes_from(range(nv))
    for i in range(nv):
        for j in range(i + 1, nv):
            if r.random() < 0.5:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                g.add_edge(i, j)
    clique = max_clique(adj)
    assert len(clique) == max(len(c) for c in nx.find_cliques(g))
    assert all(adj[a] >> b & 1 for a in clique for b in clique if a != b)


def test_nac_examples():
    assert nac(PointSet(1, [0])).size == 1
    assert nac(PointSet(1, [])).size == 0
    assert nac(PointSet.from_labels(["X", "Y", "Z"])).size == 3
    assert nac(PointSet.from_subspace(F2Subspace(4, (1, 2)))).size == 1
    for k in (1, 2, 3):
        fam = PointSet.of(k, anticommuting_family(k))
        assert nac(fam).size == 2 * k + 1
        assert nac(PointSet(k, np.arange(4 ** k))).size == 2 * k + 1


@settings(max_examples=80, deadline=None)
@given(point_sets(n_max=3, max_size=30))
def test_nac_matches_networkx(A):
    r = nac(A)
    assert r.exact and r.size == nac_oracle(A)
    w = list(r.witness)
    assert all(symp(a, b, A.n) for i, a in enumerate(w) for b in w[i + 1:])


def test_nac_greedy_mode_is_flagged():
    A = PointSet(2, np.arange(16))
    r = nac(A, exact_max=4)
    assert not r.exact and 1 <= r.size <= 5


@settings(max_examples=40, deadline=None)
@given(point_sets(n_max=3, max_size=20), st.data())
def test_nac_monotone(A, data):
    extra = data.draw(st.lists(st.integers(0, 4 ** A.n - 1), max_size=10))
    B = PointSet(A.n, np.concatenate([A.members, np.array(extra, dtype=np.int64)]))
    assert nac(A).size <= nac(B).size


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_uncertainty_relation(n):
    for seed in range(5):
        psi = haar_random_state(n, seed)
        r = nac(PointSet(n, np.arange(1, 4 ** n)))
        assert uncertainty_sum(psi, r.witness) <= 1 + 1e-10
    # |T> has <X>^2 = <Y>^2 = 1/2 and <Z> = 0, so X, Y, Z saturate the bound
    assert uncertainty_sum(T_STATE, [1, 2, 3]) == pytest.approx(1.0)


def test_translate_cover_examples():
    V = PointSet.from_subspace(F2Subspace(4, (1, 2)))
    A = PointSet(2, np.concatenate([V.members, V.members ^ 4]))
    shifts = greedy_cover(A, V)
    assert len(shifts) == 2 and covered_by(A, shifts, V)
    X = ruzsa_packing(A, V)
    assert covered_by(V, X, sumset(A, A))
    assert len(X) <= len(sumset(A, V)) / len(A)
    assert greedy_cover(PointSet(2, []), V) == []
    with pytest.raises(ValueError):
        greedy_cover(A, PointSet(2, []))


@settings(max_examples=40, deadline=None)
@given(point_sets(n_max=3, max_size=12), st.data())
def test_translate_bound_checks(A, data):
    B = PointSet(A.n, data.draw(st.lists(st.integers(0, 4 ** A.n - 1), min_size=1, max_size=12)))
    r = nac_translate_bound_check(A, B)
    for key in ("greedy_covers", "ruzsa_covers", "ruzsa_size_ok", "greedy_holds", "ruzsa_holds"):
        assert r[key], key


def test_choice_set_examples():
    psi = random_stabilizer_state(3, 0)
    rep = build_choice_set(psi, 0.5, 1)
    # every label of a stabilizer state has 2^n p = 1 on its group
    assert rep.S_size == rep.X_size == 8
    assert rep.L_value == 1.0 and rep.contains_zero
    assert rep.min_expectation == pytest.approx(1.0)
    with pytest.raises(ValueError):
        build_choice_set(psi, 0.0, 0)


def test_choice_set_t_states():
    ct = char_table(t_state(3))
    gamma = gowers3_pow8(ct) ** 2
    reps = [build_choice_set(ct, gamma, s) for s in range(20)]
    assert all(r.contains_zero for r in reps)
    assert all(r.S.issubset(r.X) for r in reps)
    assert np.mean([r.L_value for r in reps]) > 0
    M = 8 * ct.p
    assert all(M[r.X.members].min() >= gamma / 4 - 1e-12 for r in reps)
    assert build_choice_set(ct, gamma, 3).to_dict() == build_choice_set(ct, gamma, 3).to_dict()


def test_conjecture_search_is_deterministic():
    a = conjecture_search(3, trials=10, seed=4)
    b = conjecture_search(3, trials=10, seed=4)
    assert a == b
    for row in a:
        assert row["K"] <= 8.0
        assert row["flagged"] == (row["nac_2S"] > (row["K"] * row["nac_S"]) ** 3)
    buf = io.StringIO()
    write_search_csv(buf, a)
    lines = buf.getvalue().split("\r\n")
    assert lines[0] == "trial,seed,K,size_S,size_2S,nac_S,nac_2S,flagged"
    assert len(lines) == 12
    with pytest.raises(ValueError):
        conjecture_search(6, trials=1)


def test_conjecture_prefix_stable():
    a = conjecture_search(3, trials=6, seed=2)
    b = conjecture_search(3, trials=3, seed=2)
    assert a[:3] == b


def test_span_helper_matches_subspace():
    assert span([1, 2]) == set(PointSet.from_subspace(F2Subspace(2, (1, 2))).members.tolist())

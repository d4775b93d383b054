"""Finite sets of Weyl labels: closure, sumsets, anticommutation numbers, covers.

Sets are stored as sorted arrays of packed points ``(v << n) | w``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels, rng
from .f2core import F2Subspace, SymplecticPoint, as_index, span_members
from .pauli import symplectic_gram_schmidt
from .state import _table

PAIR_BUDGET = 10 ** 8
NAC_EXACT_MAX = 2000


@dataclass(frozen=True, eq=False)
class PointSet:
    n: int
    members: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.unique(np.asarray(self.members, dtype=np.int64).reshape(-1))
        if m.size and (m[0] < 0 or m[-1] >> (2 * self.n)):
            raise ValueError(f"points outside F_2^{2 * self.n}")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, n: int, points: Iterable) -> "PointSet":
        return cls(n, np.array([as_index(p) for p in points], dtype=np.int64))

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "PointSet":
        pts = [SymplecticPoint.from_label(s) for s in labels]
        return cls.of(pts[0].n, pts)

    @classmethod
    def from_subspace(cls, V: F2Subspace) -> "PointSet":
        return cls(V.n_ambient // 2, span_members(V))

    def __len__(self) -> int:
        return int(self.members.shape[0])

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.members, as_index(x))
        return bool(i < len(self) and self.members[i] == as_index(x))

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.n == other.n and np.array_equal(self.members, other.members)

    def __hash__(self):
        return hash((self.n, self.members.tobytes()))

    def issubset(self, other: "PointSet") -> bool:
        return bool(np.isin(self.members, other.members).all())

    def indicator(self) -> np.ndarray:
        out = np.zeros(1 << (2 * self.n), dtype=bool)
        out[self.members] = True
        return out

    def labels(self) -> list[str]:
        return [SymplecticPoint.from_index(self.n, int(x)).label() for x in self.members]


def _same_n(A: PointSet, B: PointSet) -> None:
    if A.n != B.n:
        raise ValueError("point sets live on different qubit counts")


# ---------------------------------------------------------------------------
# closure and the choice set


def closure_probability(S: PointSet) -> float:
    """Pr over uniform ordered pairs (a, b) in S x S that a + b lies in S."""
    if len(S) == 0:
        raise ValueError("empty set")
    ind = S.indicator()
    hits = 0
    m = S.members
    for s in range(0, len(S), 1024):
        hits += int(ind[np.bitwise_xor.outer(m[s:s + 1024], m)].sum())
    return hits / len(S) ** 2


@dataclass(frozen=True, eq=False)
class ChoiceSetReport:
    gamma: float
    X_size: int
    S_size: int
    L_value: float
    contains_zero: bool
    min_expectation: float
    X: PointSet = field(repr=False)
    S: PointSet = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "X_size": self.X_size,
            "S_size": self.S_size,
            "L_value": self.L_value,
            "contains_zero": self.contains_zero,
            "min_expectation": self.min_expectation,
        }


def build_choice_set(t, gamma: float, seed: int) -> ChoiceSetReport:
    """X = {x : 2^n p(x) >= gamma/4}; keep each x in X with probability 2^n p(x)."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    n, p = _table(t)
    M = np.clip((1 << n) * p, 0.0, 1.0)
    M[0] = 1.0
    X = np.flatnonzero(M >= gamma / 4 - 1e-12)
    u = rng.uniform_block(seed, rng.TAG_CHOICE, 0, X.shape[0])
    S = X[u < M[X]]
    Sset = PointSet(n, S)
    return ChoiceSetReport(
        gamma=float(gamma),
        X_size=int(X.shape[0]),
        S_size=len(Sset),
        L_value=closure_probability(Sset),
        contains_zero=0 in Sset,
        min_expectation=float(M[S].min()),
        X=PointSet(n, X),
        S=Sset,
    )


# ---------------------------------------------------------------------------
# sumsets


def sumset(A: PointSet, B: PointSet) -> PointSet:
    _same_n(A, B)
    if len(A) * len(B) > PAIR_BUDGET:
        raise ValueError(f"|A||B| = {len(A) * len(B)} exceeds the pair budget {PAIR_BUDGET}")
    ind = kernels.sumset_indicator(A.members, B.members, 1 << (2 * A.n))
    return PointSet(A.n, np.flatnonzero(ind))


def iterated_sumset(A: PointSet, t: int) -> PointSet:
    """tA = A + ... + A (t summands)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    out = A
    for _ in range(t - 1):
        out = sumset(out, A)
    return out


def doubling(A: PointSet) -> float:
    return len(sumset(A, A)) / len(A)


def plunnecke_check(A: PointSet) -> tuple[float, float, bool]:
    """(|4A|/|2A|, (|2A|/|A|)^4, lhs <= rhs)."""
    A2 = sumset(A, A)
    A4 = sumset(A2, A2)
    lhs = len(A4) / len(A2)
    rhs = (len(A2) / len(A)) ** 4
    return lhs, rhs, lhs <= rhs + 1e-12


# ---------------------------------------------------------------------------
# anticommutation number


def max_clique(adj: list[int], upper: int | None = None) -> list[int]:
    """Maximum clique of a graph given by neighbour bitsets.

    Branch and bound with a greedy-colouring bound; vertices are tried in
    order of decreasing degree so the returned witness is deterministic.
    ``upper`` is a known bound on the clique number; the search stops once
    a clique of that size is found.
    """
    nv = len(adj)
    if nv == 0:
        return []
    order = sorted(range(nv), key=lambda v: (-adj[v].bit_count(), v))
    pos = {v: i for i, v in enumerate(order)}
    # relabel so that bit i is the i-th vertex in the search order
    radj = [0] * nv
    for v in range(nv):
        bits = adj[v]
        r = 0
        while bits:
            low = bits & -bits
            r |= 1 << pos[low.bit_length() - 1]
            bits ^= low
        radj[pos[v]] = r

    best: list[int] = [0]

    def colour(P: int) -> tuple[list[int], list[int]]:
        verts, cols = [], []
        c = 0
        while P:
            c += 1
            Q = P
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~radj[v] & ~low
                P &= ~low
                verts.append(v)
                cols.append(c)
        return verts, cols

    cap = nv if upper is None else upper

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        verts, cols = colour(P)
        for i in range(len(verts) - 1, -1, -1):
            if len(R) + cols[i] <= len(best) or len(best) >= cap:
                return
            v = verts[i]
            NP = P & radj[v]
            if NP:
                expand(R + [v], NP)
            elif len(R) + 1 > len(best):
                best = R + [v]
            P &= ~(1 << v)

    expand([], (1 << nv) - 1)
    return sorted(order[i] for i in best)


def anticommutation_graph(A: PointSet) -> list[int]:
    mat = kernels.anticommutation_matrix(A.members, A.n)
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


@dataclass(frozen=True)
class NacResult:
    size: int
    witness: tuple[int, ...]
    exact: bool


def nac(A: PointSet, exact_max: int = NAC_EXACT_MAX) -> NacResult:
    """Largest pairwise anticommuting subset of A.

    Exact maximum clique for |A| <= exact_max; beyond that a greedy clique,
    which is only a lower bound (``exact`` is False).
    """
    if len(A) == 0:
        return NacResult(0, (), True)
    adj = anticommutation_graph(A)
    if len(A) <= exact_max:
        # vertices with equal neighbourhoods are never adjacent, so a clique
        # uses at most one of them: keep the first of each class
        first: dict[int, int] = {}
        for v, row in enumerate(adj):
            first.setdefault(row, v)
        keep = sorted(first.values())
        idx = {v: i for i, v in enumerate(keep)}
        small = []
        for v in keep:
            row, r = adj[v], 0
            for u in keep:
                if row >> u & 1:
                    r |= 1 << idx[u]
            small.append(r)
        k = len(symplectic_gram_schmidt(F2Subspace.from_generators(A.members, 2 * A.n).basis, A.n)[0])
        clique = [keep[i] for i in max_clique(small, upper=2 * k + 1)]
        exact = True
    else:
        clique = []
        cur = (1 << len(A)) - 1
        for v in sorted(range(len(A)), key=lambda v: (-adj[v].bit_count(), v)):
            if cur >> v & 1:
                clique.append(v)
                cur &= adj[v]
        exact = False
    return NacResult(len(clique), tuple(int(A.members[i]) for i in clique), exact)


def uncertainty_sum(t_or_psi, witness: Iterable[int]) -> float:
    """sum_j <W_{P_j}>^2 = 2^n sum_j p(P_j)."""
    n, p = _table(t_or_psi)
    return float((1 << n) * sum(p[int(x)] for x in witness))


# ---------------------------------------------------------------------------
# translate covers


@dataclass(frozen=True)
class TranslateCover:
    greedy: tuple[int, ...]
    ruzsa: tuple[int, ...]
    ruzsa_bound: float

    @property
    def greedy_size(self) -> int:
        return len(self.greedy)

    @property
    def ruzsa_size(self) -> int:
        return len(self.ruzsa)


def greedy_cover(A: PointSet, B: PointSet) -> list[int]:
    """Shifts c_1, c_2, ... with A contained in the union of c_i + B; most-new-points first."""
    _same_n(A, B)
    if len(A) == 0:
        return []
    if len(B) == 0:
        raise ValueError("cannot cover a nonempty set with translates of the empty set")
    uncovered = A.indicator()
    cands = sumset(A, B).members
    shifts = []
    while uncovered.any():
        gains = np.zeros(cands.shape[0], dtype=np.int64)
        for s in range(0, cands.shape[0], 1024):
            gains[s:s + 1024] = uncovered[np.bitwise_xor.outer(cands[s:s + 1024], B.members)].sum(axis=1)
        c = int(cands[int(np.argmax(gains))])
        shifts.append(c)
        uncovered[B.members ^ c] = False
    return shifts


def ruzsa_packing(A: PointSet, B: PointSet) -> list[int]:
    """Maximal X in B with the translates x + A pairwise disjoint.

    Maximality gives B inside X + 2A, and disjointness inside A + B gives
    |X| <= |A + B| / |A|.
    """
    _same_n(A, B)
    if len(A) == 0:
        raise ValueError("A must be nonempty")
    used = np.zeros(1 << (2 * A.n), dtype=bool)
    X = []
    for b in B.members:
        tr = A.members ^ b
        if not used[tr].any():
            used[tr] = True
            X.append(int(b))
    return X


def translate_cover(A: PointSet, B: PointSet) -> TranslateCover:
    """Greedy cover of A by translates of B, plus the Ruzsa packing for (A, B)."""
    bound = len(sumset(A, B)) / len(A)
    return TranslateCover(tuple(greedy_cover(A, B)), tuple(ruzsa_packing(A, B)), bound)


def covered_by(target: PointSet, shifts: Iterable[int], base: PointSet) -> bool:
    shifts = np.array(list(shifts), dtype=np.int64)
    if shifts.size == 0:
        return len(target) == 0
    union = sumset(PointSet(base.n, shifts), base)
    return target.issubset(union)


def nac_translate_bound_check(A: PointSet, B: PointSet) -> dict:
    """Check nac(A) <= 2 M nac(B) for both covers produced by :func:`translate_cover`.

    Greedy: A is covered by M translates of B.  Ruzsa: B is covered by
    |X| translates of 2A, so nac(B) <= 2 |X| nac(2A).
    """
    cover = translate_cover(A, B)
    A2 = sumset(A, A)
    nA, nB, n2A = nac(A).size, nac(B).size, nac(A2).size
    M, X = cover.greedy_size, cover.ruzsa_size
    return {
        "nac_A": nA,
        "nac_B": nB,
        "nac_2A": n2A,
        "M_greedy": M,
        "M_ruzsa": X,
        "ruzsa_bound": cover.ruzsa_bound,
        "greedy_covers": covered_by(A, cover.greedy, B),
        "ruzsa_covers": covered_by(B, cover.ruzsa, A2),
        "ruzsa_size_ok": X <= cover.ruzsa_bound + 1e-12,
        "greedy_holds": nA <= 2 * M * nB,
        "ruzsa_holds": nB <= 2 * X * n2A,
    }


# ---------------------------------------------------------------------------
# conjecture harness

SEARCH_FIELDS = ("trial", "seed", "K", "size_S", "size_2S", "nac_S", "nac_2S", "flagged")


def _random_subspace(n: int, dim: int, g: np.random.Generator) -> F2Subspace:
    gens = []
    V = F2Subspace(2 * n, ())
    while V.dim < dim:
        gens.append(int(g.integers(1, 1 << (2 * n))))
        V = F2Subspace.from_generators(gens, 2 * n)
    return V


def sample_small_doubling_set(n: int, K_max: float, g: np.random.Generator, attempts: int = 64) -> tuple[PointSet, float]:
    """A union of 1-3 cosets of a random subgroup plus a few stray points, with K <= K_max.

    K = max(|2S| / |S|, 2^n / |S|).
    """
    lo = max(1, n - int(math.log2(K_max)))
    for _ in range(attempts):
        V = _random_subspace(n, int(g.integers(lo, 2 * n + 1)), g)
        base = span_members(V)
        pts = [base ^ np.int64(g.integers(0, 1 << (2 * n))) for _ in range(int(g.integers(1, 4)))]
        pts.append(g.integers(0, 1 << (2 * n), size=int(g.integers(0, 4))).astype(np.int64))
        S = PointSet(n, np.concatenate(pts))
        K = max(len(sumset(S, S)) / len(S), (1 << n) / len(S))
        if K <= K_max:
            return S, K
    V = _random_subspace(n, min(2 * n, lo + 3), g)
    S = PointSet.from_subspace(V)
    return S, max(1.0, (1 << n) / len(S))


def conjecture_search(n: int, K_max: float = 8.0, trials: int = 100, seed: int = 0,
                      exponent: float = 3.0) -> list[dict]:
    """Sample small-doubling sets and compare nac(2S) with (K nac(S))^exponent.

    A flagged row only means the reference polynomial was exceeded; the
    polynomial is a knob, not a claim.
    """
    if n > 5:
        raise ValueError("exact nac is only affordable for n <= 5")
    rows = []
    for trial in range(trials):
        tseed = rng.derive_seed(seed, trial)
        S, K = sample_small_doubling_set(n, K_max, rng.generator(tseed, rng.TAG_SEARCH))
        S2 = sumset(S, S)
        a, b = nac(S).size, nac(S2).size
        rows.append({
            "trial": trial,
            "seed": tseed,
            "K": K,
            "size_S": len(S),
            "size_2S": len(S2),
            "nac_S": a,
            "nac_2S": b,
            "flagged": b > (K * a) ** exponent,
        })
    return rows


def write_search_csv(fh, rows: list[dict]) -> None:
    wr = csv.writer(fh, lineterminator="\r\n")
    wr.writerow(SEARCH_FIELDS)
    for r in rows:
        wr.writerow([r["trial"], r["seed"], repr(float(r["K"])), r["size_S"], r["size_2S"],
                     r["nac_S"], r["nac_2S"], int(r["flagged"])])

"""Lagrangian subspaces, stabilizer fidelity and stabilizer coverings."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import caps
from .f2core import (
    F2Subspace,
    SymplecticPoint,
    as_index,
    echelon,
    reduce,
    solve,
    span_members,
    swap_halves,
    symp,
    symplectic_complement,
)
from .pauli import CanonicalForm, apply_clifford, apply_weyl, canonicalize_subgroup
from .state import StateVector, _table, char_table, convolve, make_stabilizer_state


def is_isotropic(vectors: Sequence[int], n: int) -> bool:
    return all(symp(a, b, n) == 0 for i, a in enumerate(vectors) for b in vectors[i + 1:])


@dataclass(frozen=True)
class LagrangianSubspace:
    n: int
    subspace: F2Subspace

    def __post_init__(self):
        if self.subspace.n_ambient != 2 * self.n:
            raise ValueError("ambient dimension must be 2n")
        if self.subspace.dim != self.n:
            raise ValueError(f"a Lagrangian subspace has dimension {self.n}, got {self.subspace.dim}")
        if not is_isotropic(self.subspace.basis, self.n):
            raise ValueError("subspace is not isotropic")

    @classmethod
    def from_basis(cls, n: int, basis: Sequence[int]) -> "LagrangianSubspace":
        return cls(n, F2Subspace(2 * n, tuple(basis)))

    @property
    def basis(self) -> tuple[int, ...]:
        return self.subspace.basis

    def members(self) -> np.ndarray:
        return span_members(self.subspace)

    def __contains__(self, x) -> bool:
        return as_index(x) in self.subspace

    def labels(self) -> list[str]:
        return [SymplecticPoint.from_index(self.n, b).label() for b in self.basis]


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _lagrangian_keys(n: int) -> tuple[tuple[int, ...], ...]:
    level = {()}
    for _ in range(n):
        nxt = set()
        for key in level:
            rows = echelon(key)
            for x in _complement_members(key, n):
                if reduce(int(x), rows):
                    nxt.add(tuple(r for _, r in echelon(key + (int(x),))))
        level = nxt
    return tuple(sorted(level))


def _complement_members(key: tuple[int, ...], n: int) -> np.ndarray:
    comp = symplectic_complement(key, n)
    return span_members(F2Subspace(2 * n, tuple(comp)))


def enumerate_lagrangians(n: int) -> list[LagrangianSubspace]:
    """Every Lagrangian subspace of F_2^{2n}, ordered by reduced echelon basis."""
    caps.check(n, caps.LAGRANGIAN_MAX_N, "Lagrangian enumeration qubits")
    if n < 1:
        raise ValueError("n must be >= 1")
    return [LagrangianSubspace.from_basis(n, key) for key in _lagrangian_keys(n)]


def lagrangian_count(n: int) -> int:
    out = 1
    for i in range(1, n + 1):
        out *= (1 << i) + 1
    return out


def sign_shift(basis: Sequence[int], signs: int, n: int) -> int:
    """z with [b_j, z] = bit j of ``signs``; W_z flips exactly those stabilizer signs."""
    return solve([swap_halves(b, n) for b in basis], [(signs >> j) & 1 for j in range(len(basis))])


def stabilizer_basis(T: LagrangianSubspace) -> np.ndarray:
    """Columns are the 2^n stabilizer states of T; column s has sign (-1)^{s_j} on b_j."""
    n = T.n
    plus = make_stabilizer_state([(1, b) for b in T.basis], n).amps
    cols = [apply_weyl(sign_shift(T.basis, s, n), plus, n) for s in range(1 << n)]
    return np.stack(cols, axis=1)


@lru_cache(maxsize=None)
def _all_stabilizer_states(n: int) -> np.ndarray:
    lags = enumerate_lagrangians(n)
    return np.concatenate([stabilizer_basis(T) for T in lags], axis=1)


@dataclass(frozen=True)
class StabilizerState:
    n: int
    lagrangian: LagrangianSubspace
    signs: int

    def generators(self) -> list[str]:
        out = []
        for j, b in enumerate(self.lagrangian.basis):
            sign = "-" if self.signs >> j & 1 else "+"
            out.append(sign + SymplecticPoint.from_index(self.n, b).label())
        return out

    def state(self) -> StateVector:
        n = self.n
        return make_stabilizer_state([(-1 if self.signs >> j & 1 else 1, b) for j, b in enumerate(self.lagrangian.basis)], n)


def stabilizer_fidelity_bruteforce(psi: StateVector) -> tuple[float, StabilizerState]:
    """max |<phi|psi>|^2 over all stabilizer states; first maximiser wins ties."""
    n = psi.n
    caps.check(n, caps.FIDELITY_MAX_N, "brute-force fidelity qubits")
    phis = _all_stabilizer_states(n)
    fid = np.abs(phis.conj().T @ psi.amps) ** 2
    best = int(np.argmax(fid))
    lag = enumerate_lagrangians(n)[best >> n]
    return float(fid[best]), StabilizerState(n, lag, best & ((1 << n) - 1))


# ---------------------------------------------------------------------------
# masses


def lagrangian_mass(t, T: LagrangianSubspace) -> float:
    """sum_{x in T} p(x)."""
    if not isinstance(T, LagrangianSubspace):
        raise TypeError("T must be a LagrangianSubspace")
    n, tab = _table(t)
    if T.n != n:
        raise ValueError("dimension mismatch")
    return float(tab[T.members()].sum())


def coset_mass(t, V: F2Subspace, z) -> float:
    """R_V(z) = 2^n sum_{y in V} p(y + z)."""
    n, tab = _table(t)
    if V.n_ambient != 2 * n:
        raise ValueError("dimension mismatch")
    idx = span_members(V) ^ np.int64(as_index(z))
    return float((1 << n) * tab[idx].sum())


def coset_mass_mean(t, V: F2Subspace, z) -> float:
    """E_{y in V} 2^n p(y + z)."""
    return coset_mass(t, V, z) / V.size


def coset_mass_all_shifts(t, V: F2Subspace) -> np.ndarray:
    """R_V(z) for every z, as a convolution of p with the indicator of V."""
    n, tab = _table(t)
    ind = np.zeros(tab.shape[0])
    ind[span_members(V)] = 1.0
    return (1 << n) * convolve(ind, tab)


def argmax_shift_in_subgroup(t, V: F2Subspace, tol: float = 1e-12) -> tuple[bool, float, float]:
    """(max over z in V equals the global max, max over V, global max)."""
    R = coset_mass_all_shifts(t, V)
    inside = float(R[span_members(V)].max())
    overall = float(R.max())
    return inside >= overall - tol, inside, overall


# ---------------------------------------------------------------------------
# coverings


def _irreducible(k: int) -> int:
    """Smallest irreducible polynomial of degree k over F_2 (bit i = coeff of t^i)."""

    def pmod(a: int, b: int) -> int:
        db = b.bit_length()
        while a.bit_length() >= db:
            a ^= b << (a.bit_length() - db)
        return a

    for cand in range(1 << k, 1 << (k + 1)):
        if not cand & 1 and k > 1:
            continue
        if all(pmod(cand, d) for d in range(2, 1 << (k // 2 + 1))):
            return cand
    raise AssertionError("no irreducible polynomial found")


class GF2k:
    """The field F_{2^k} in the polynomial basis 1, t, ..., t^{k-1}."""

    def __init__(self, k: int):
        self.k = k
        self.poly = _irreducible(k)

    def mul(self, a: int, b: int) -> int:
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a >> self.k & 1:
                a ^= self.poly
        return out

    def trace(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.k):
            t ^= x
            x = self.mul(x, x)
        return t & 1

    def trace_form(self, a: int) -> list[int]:
        """Rows of B_a with B_a[i][j] = Tr(a t^i t^j), packed as ints."""
        k = self.k
        rows = []
        for i in range(k):
            r = 0
            for j in range(k):
                if self.trace(self.mul(a, self._pow_t(i + j))):
                    r |= 1 << j
            rows.append(r)
        return rows

    def _pow_t(self, e: int) -> int:
        x = 1
        for _ in range(e):
            x = self.mul(x, 2)
        return x


def symplectic_spread(k: int) -> list[list[int]]:
    """2^k + 1 Lagrangians of F_2^{2k} (packed on k qubits) meeting pairwise in 0."""
    if k == 0:
        return [[]]
    out = []
    field_ = GF2k(k)
    for a in range(1 << k):
        B = field_.trace_form(a)
        # column i of B is the w-part paired with v = e_i (B is symmetric)
        out.append([(1 << (k + i)) | B[i] for i in range(k)])
    out.append([1 << i for i in range(k)])
    return out


def _lift(u: int, k: int, n: int) -> int:
    """A point of F_2^{2k} placed on the first k of n qubits."""
    mk = (1 << k) - 1
    return ((u >> k) & mk) << n | (u & mk)


def extend_to_lagrangian(vectors: Sequence[int], n: int) -> list[int]:
    """Complete an isotropic set: repeatedly add the first reduced complement row outside the span."""
    basis = [b for _, b in echelon(vectors)]
    if not is_isotropic(basis, n):
        raise ValueError("input is not isotropic")
    while len(basis) < n:
        rows = echelon(basis)
        comp = sorted(r for _, r in echelon(symplectic_complement(basis, n)))
        basis.append(next(c for c in comp if reduce(c, rows)))
    return basis


@dataclass(frozen=True)
class StabilizerCovering:
    n: int
    mode: str
    form: CanonicalForm
    target: F2Subspace
    groups: tuple[LagrangianSubspace, ...]

    @property
    def k(self) -> int:
        return self.form.k

    @property
    def m(self) -> int:
        return self.form.m

    def __len__(self) -> int:
        return len(self.groups)

    def covered(self) -> np.ndarray:
        mark = np.zeros(1 << (2 * self.n), dtype=bool)
        for g in self.groups:
            mark[g.members()] = True
        return mark

    def covers_target(self) -> bool:
        return bool(self.covered()[span_members(self.target)].all())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "mode": self.mode,
            "n": self.n,
            "groups": [[SymplecticPoint.from_index(self.n, b).bitstring() for b in g.basis] for g in self.groups],
        }


def stabilizer_covering(V: F2Subspace, mode: str = "mub") -> StabilizerCovering:
    """Lagrangians whose union contains V.

    In canonical coordinates V is P^k (x) <Z_{k+1}, ..., Z_{k+m}>.  ``mub``
    covers the P^k factor by a symplectic spread (2^k + 1 groups), ``paulis``
    by one group per Pauli (4^k groups).
    """
    if mode not in ("mub", "paulis"):
        raise ValueError("mode must be 'mub' or 'paulis'")
    n = V.n_ambient // 2
    form = canonicalize_subgroup(V)
    k, m = form.k, form.m
    zs = [1 << i for i in range(k, k + m)]
    if mode == "mub":
        seeds = [[_lift(u, k, n) for u in L] for L in symplectic_spread(k)]
    else:
        seeds = [[_lift(u, k, n)] if u else [] for u in range(1 << (2 * k))]
    inv = form.map.inverse()
    groups = []
    for s in seeds:
        canon = extend_to_lagrangian(s + zs, n)
        groups.append(LagrangianSubspace.from_basis(n, [inv(b) for b in canon]))
    return StabilizerCovering(n, mode, form, V, tuple(groups))


# ---------------------------------------------------------------------------
# canonical-frame bounds


def fact_b1_check(psi: StateVector, V: F2Subspace, tol: float = 1e-9) -> tuple[float, float, bool]:
    """Rotate psi by the Clifford of V's canonical form and sum squared expectations.

    lhs = sum over W in P^k (x) <Z_{k+1..k+m}> of <psi~|W (x) I|psi~>^2,
    rhs = 2^{k+m}.
    """
    n = psi.n
    caps.check(n, caps.CLIFFORD_MAX_N, "Clifford realisation qubits")
    form = canonicalize_subgroup(V)
    rotated = StateVector.normalized(apply_clifford(form.map, psi.amps))
    tab = char_table(rotated).p
    lhs = float((1 << n) * tab[span_members(form.image())].sum())
    rhs = float(2 ** (form.k + form.m))
    return lhs, rhs, lhs <= rhs + tol


def small_k_check(t, V: F2Subspace, tol: float = 1e-9) -> tuple[float, int, bool]:
    """(gamma, k, 2^k gamma <= 1) with gamma = E_{y in V} 2^n p(y)."""
    gamma = coset_mass_mean(t, V, 0)
    k = canonicalize_subgroup(V).k
    return gamma, k, (1 << k) * gamma <= 1.0 + tol

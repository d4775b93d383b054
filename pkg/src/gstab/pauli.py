"""Weyl operators and symplectic maps.

W_{v,w} = i^{v.w} X^v Z^w acts on a basis state as
W|y> = i^{v.w} (-1)^{w.y} |y ^ v>.  Qubit ``j`` of a state vector is bit
``j - 1`` of the amplitude index.

Labels (packed symplectic points) are phase-free; phases appear only when
an operator is rendered on a state vector or as a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import caps
from .f2core import (
    F2Subspace,
    SymplecticPoint,
    as_index,
    echelon,
    solve,
    swap_halves,
    symp,
    symplectic_product,
)
from .kernels import parity_np

_I_POW = np.array([1, 1j, -1, -1j])


def weyl_phase(v: int, w: int) -> complex:
    return _I_POW[(v & w).bit_count() % 4]


def apply_weyl(x, amps: np.ndarray, n: int) -> np.ndarray:
    """W_x applied to a state vector (or to each column of a 2-D array)."""
    idx = as_index(x)
    mask = (1 << n) - 1
    v, w = (idx >> n) & mask, idx & mask
    ys = np.arange(1 << n)
    signs = 1 - 2 * parity_np(ys & w)
    coef = weyl_phase(v, w) * signs
    out = np.empty_like(amps, dtype=np.complex128)
    if amps.ndim == 1:
        out[ys ^ v] = coef * amps
    else:
        out[ys ^ v] = coef[:, None] * amps
    return out


def weyl_matrix(x: SymplecticPoint) -> np.ndarray:
    """Dense 2^n x 2^n matrix of W_x."""
    n = x.n
    caps.check(n, caps.DENSE_MAX_N, "dense Weyl matrix qubits")
    ys = np.arange(1 << n)
    out = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    out[ys ^ x.v, ys] = weyl_phase(x.v, x.w) * (1 - 2 * parity_np(ys & x.w))
    return out


def commutes(x: SymplecticPoint, y: SymplecticPoint) -> bool:
    return symplectic_product(x, y) == 0


def anticommuting_family(k: int) -> list[SymplecticPoint]:
    """2k+1 pairwise anticommuting labels on k qubits.

    Z..Z X_j and Z..Z Y_j for j = 1..k (Z-strings on qubits < j), then Z^{(x)k}.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    for j in range(k):
        tail = (1 << j) - 1
        out.append(SymplecticPoint(k, 1 << j, tail))
        out.append(SymplecticPoint(k, 1 << j, tail | 1 << j))
    out.append(SymplecticPoint(k, 0, (1 << k) - 1))
    return out


def z_label(i: int, n: int) -> int:
    """Packed Z on qubit ``i`` (1-based)."""
    return 1 << (i - 1)


def x_label(i: int, n: int) -> int:
    return 1 << (n + i - 1)


# ---------------------------------------------------------------------------
# linear maps on F_2^{2n}


def _inverse_columns(cols: Sequence[int], nbits: int) -> tuple[int, ...]:
    mask = (1 << nbits) - 1
    rows = echelon((c << nbits) | (1 << j) for j, c in enumerate(cols))
    if len(rows) != nbits or any(r >> nbits != 1 << (p - nbits) for p, r in rows):
        raise ValueError("linear map is not invertible")
    inv = [0] * nbits
    for p, r in rows:
        inv[p - nbits] = r & mask
    return tuple(inv)


@dataclass(frozen=True)
class SymplecticMap:
    """Linear map on F_2^{2n} stored by its images of the unit vectors."""

    n: int
    cols: tuple[int, ...]

    def __post_init__(self):
        if len(self.cols) != 2 * self.n:
            raise ValueError("need 2n column images")

    @classmethod
    def identity(cls, n: int) -> "SymplecticMap":
        return cls(n, tuple(1 << j for j in range(2 * n)))

    @classmethod
    def from_basis(cls, n: int, source: Sequence[int], target: Sequence[int]) -> "SymplecticMap":
        """The linear map sending ``source[t]`` to ``target[t]``."""
        inv = _inverse_columns(source, 2 * n)
        cols = []
        for coeffs in inv:
            img = 0
            for t, tv in enumerate(target):
                if coeffs >> t & 1:
                    img ^= tv
            cols.append(img)
        return cls(n, tuple(cols))

    def __call__(self, x) -> int:
        idx = as_index(x)
        out = 0
        for j, c in enumerate(self.cols):
            if idx >> j & 1:
                out ^= c
        return out

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros_like(xs)
        for j, c in enumerate(self.cols):
            out ^= ((xs >> j) & 1) * np.int64(c)
        return out

    def inverse(self) -> "SymplecticMap":
        return SymplecticMap(self.n, _inverse_columns(self.cols, 2 * self.n))

    def compose(self, other: "SymplecticMap") -> "SymplecticMap":
        """``self ∘ other``."""
        return SymplecticMap(self.n, tuple(self(c) for c in other.cols))

    def is_symplectic(self) -> bool:
        n, cols = self.n, self.cols
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                if symp(cols[i], cols[j], n) != symp(1 << i, 1 << j, n):
                    return False
        return True

    def matrix(self) -> np.ndarray:
        nb = 2 * self.n
        return np.array([[c >> i & 1 for c in self.cols] for i in range(nb)], dtype=np.uint8)


def transvect(x: int, h: int, n: int) -> int:
    return x ^ h if symp(x, h, n) else x


def symplectic_gram_schmidt(vectors: Sequence[int], n: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Split span(vectors) into hyperbolic pairs and an isotropic remainder.

    Returns ``(pairs, iso)`` with [e, f] = 1 inside each pair and every other
    symplectic product zero.  Partners are searched lowest index first.
    """
    pool = [int(v) for v in vectors]
    pairs: list[tuple[int, int]] = []
    iso: list[int] = []
    while pool:
        a = pool.pop(0)
        j = next((j for j, b in enumerate(pool) if symp(a, b, n)), None)
        if j is None:
            iso.append(a)
            continue
        b = pool.pop(j)
        pairs.append((a, b))
        # u -> u + [u,b] a + [u,a] b clears both products with the new pair
        pool = [u ^ (a if symp(u, b, n) else 0) ^ (b if symp(u, a, n) else 0) for u in pool]
    return pairs, iso


def _project_out(u: int, pairs: Sequence[tuple[int, int]], n: int) -> int:
    for a, b in pairs:
        u ^= (a if symp(u, b, n) else 0) ^ (b if symp(u, a, n) else 0)
    return u


def complete_symplectic_basis(
    pairs: Sequence[tuple[int, int]], iso: Sequence[int], n: int
) -> tuple[list[tuple[int, int]], list[int], list[tuple[int, int]]]:
    """Partner every isotropic vector and extend to a symplectic basis of F_2^{2n}.

    Returns ``(pairs, iso_pairs, rest)`` where ``iso_pairs[j] = (iso[j], h_j)``.
    """
    pairs = list(pairs)
    iso = list(iso)
    iso_pairs: list[tuple[int, int]] = []
    for j, g in enumerate(iso):
        rows = [swap_halves(x, n) for x in iso]
        rhs = [1 if l == j else 0 for l in range(len(iso))]
        h = solve(rows, rhs)
        h = _project_out(h, pairs + iso_pairs, n)
        iso_pairs.append((g, h))
    done = pairs + iso_pairs
    rest: list[tuple[int, int]] = []
    units = [1 << i for i in range(2 * n)]
    while len(done) + len(rest) < n:
        cur = done + rest
        a = next(p for p in (_project_out(u, cur, n) for u in units) if p)
        b = next(p for p in (_project_out(u, cur, n) for u in units) if symp(a, p, n))
        rest.append((a, b))
    return pairs, iso_pairs, rest


@dataclass(frozen=True)
class CanonicalForm:
    """map(V) = <Z_1, X_1, ..., Z_k, X_k, Z_{k+1}, ..., Z_{k+m}>."""

    n: int
    k: int
    m: int
    map: SymplecticMap

    def generators(self) -> list[int]:
        """Packed canonical generators in the order Z_1, X_1, ..., Z_{k+m}."""
        gens = []
        for i in range(1, self.k + 1):
            gens += [z_label(i, self.n), x_label(i, self.n)]
        gens += [z_label(i, self.n) for i in range(self.k + 1, self.k + self.m + 1)]
        return gens

    def image(self) -> F2Subspace:
        return F2Subspace(2 * self.n, tuple(self.generators()))


def canonicalize_subgroup(V: F2Subspace) -> CanonicalForm:
    if V.n_ambient % 2:
        raise ValueError("subgroup must live in F_2^{2n}")
    n = V.n_ambient // 2
    pairs, iso = symplectic_gram_schmidt(V.basis, n)
    pairs, iso_pairs, rest = complete_symplectic_basis(pairs, iso, n)
    k, m = len(pairs), len(iso_pairs)
    source, target = [], []
    for i, (e, f) in enumerate(pairs + iso_pairs + rest, start=1):
        source += [e, f]
        target += [z_label(i, n), x_label(i, n)]
    return CanonicalForm(n, k, m, SymplecticMap.from_basis(n, source, target))


# ---------------------------------------------------------------------------
# Clifford realisation through transvections


def _transvections_between(a: int, b: int, fixed: Sequence[int], n: int) -> list[int]:
    """h's with T_{h_last} ... T_{h_1}(a) = b that leave every ``fixed`` vector alone."""
    if a == b:
        return []
    if symp(a, b, n):
        return [a ^ b]
    rows = [swap_halves(a, n), swap_halves(b, n)] + [swap_halves(f, n) for f in fixed]
    rhs = [1, 1] + [symp(f, a, n) for f in fixed]
    z = solve(rows, rhs)
    return [a ^ z, z ^ b]


def transvection_decomposition(M: SymplecticMap) -> list[int]:
    """``[h_1, ..., h_r]`` with M = T_{h_1} ∘ T_{h_2} ∘ ... ∘ T_{h_r}."""
    n = M.n
    hs: list[int] = []

    def current(x: int) -> int:
        for h in hs:
            x = transvect(x, h, n)
        return x

    fixed: list[int] = []
    for i in range(1, n + 1):
        for basis_vec in (z_label(i, n), x_label(i, n)):
            hs += _transvections_between(current(M(basis_vec)), basis_vec, fixed, n)
            fixed.append(basis_vec)
    return hs


def apply_transvection_unitary(h: int, amps: np.ndarray, n: int) -> np.ndarray:
    """(I + i W_h)/sqrt(2); conjugates W_x to +-W_{x + [x,h] h}."""
    return (amps + 1j * apply_weyl(h, amps, n)) / np.sqrt(2.0)


def apply_clifford(M: SymplecticMap, amps: np.ndarray) -> np.ndarray:
    """U|psi> for a Clifford U with U W_x U^dag = +-W_{M x}."""
    n = M.n
    caps.check(n, caps.CLIFFORD_MAX_N, "Clifford realisation qubits")
    out = np.asarray(amps, dtype=np.complex128)
    for h in reversed(transvection_decomposition(M)):
        out = apply_transvection_unitary(h, out, n)
    return out


def clifford_matrix(M: SymplecticMap) -> np.ndarray:
    return apply_clifford(M, np.eye(1 << M.n, dtype=np.complex128))

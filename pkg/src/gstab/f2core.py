"""Linear algebra over F_2 and F_2^{2n}.

Vectors are packed into Python ints (arbitrary length, bit ``j`` is
coordinate ``j + 1``).  A symplectic point ``x = (v, w)`` of F_2^{2n} packs
as ``(v << n) | w``; this is also its index into every length-``4**n`` table,
so a table reshaped to ``(2**n, 2**n)`` is addressed ``[v, w]``.

Fourier normalisations (fixed here, used everywhere):

* ``walsh_hadamard``:     f^(S) = 2^-n  sum_x f(x) (-1)^{S.x}
  inverse:                f(x)  =       sum_S f^(S) (-1)^{S.x}
* ``symplectic_fourier``: g~(a) = 4^-n  sum_x g(x) (-1)^{[a,x]}
  inverse:                g(x)  =       sum_a g~(a) (-1)^{[a,x]}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import caps, kernels


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(a: int, b: int) -> int:
    """Standard inner product of packed vectors, mod 2."""
    return (a & b).bit_count() & 1


def log2_exact(size: int, what: str = "length") -> int:
    if size < 1 or size & (size - 1):
        raise ValueError(f"{what} {size} is not a power of two")
    return size.bit_length() - 1


@dataclass(frozen=True)
class BitVec:
    """Fixed-length F_2 vector packed into an int."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0 or self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit length {self.length}")

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        """``"1011"`` -> coordinates 1..4 = 1,0,1,1."""
        return cls(len(s), sum(1 << i for i, c in enumerate(s) if c == "1"))

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.length))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return self.bits >> i & 1

    def __add__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits ^ other.bits)

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return dot(self.bits, other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def _check(self, other: "BitVec") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")


_LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


@dataclass(frozen=True)
class SymplecticPoint:
    """Element ``(v, w)`` of F_2^{2n}; the label of the Weyl operator W_{v,w}."""

    n: int
    v: int = 0
    w: int = 0

    def __post_init__(self):
        if self.v >> self.n or self.w >> self.n or self.v < 0 or self.w < 0:
            raise ValueError(f"({self.v:#x}, {self.w:#x}) does not fit n={self.n}")

    @classmethod
    def from_index(cls, n: int, index: int) -> "SymplecticPoint":
        mask = (1 << n) - 1
        return cls(n, (int(index) >> n) & mask, int(index) & mask)

    @classmethod
    def from_label(cls, label: str) -> "SymplecticPoint":
        """Pauli string, qubit 1 first: ``"XZ"`` is X on qubit 1, Z on qubit 2."""
        v = w = 0
        for j, c in enumerate(label.upper()):
            try:
                a, b = _LABEL_BITS[c]
            except KeyError:
                raise ValueError(f"bad Pauli letter {c!r} in {label!r}") from None
            v |= a << j
            w |= b << j
        return cls(len(label), v, w)

    @classmethod
    def from_bits(cls, v: BitVec, w: BitVec) -> "SymplecticPoint":
        if v.length != w.length:
            raise ValueError("X- and Z-parts must have equal length")
        return cls(v.length, v.bits, w.bits)

    @property
    def index(self) -> int:
        return (self.v << self.n) | self.w

    @property
    def x_part(self) -> BitVec:
        return BitVec(self.n, self.v)

    @property
    def z_part(self) -> BitVec:
        return BitVec(self.n, self.w)

    def label(self) -> str:
        out = []
        for j in range(self.n):
            out.append("IZXY"[(self.v >> j & 1) << 1 | (self.w >> j & 1)])
        return "".join(out)

    def bitstring(self) -> str:
        """``v_1..v_n w_1..w_n`` as 0/1 characters."""
        return str(self.x_part) + str(self.z_part)

    @classmethod
    def from_bitstring(cls, s: str) -> "SymplecticPoint":
        if len(s) % 2:
            raise ValueError(f"bitstring {s!r} has odd length")
        n = len(s) // 2
        return cls.from_bits(BitVec.from_str(s[:n]), BitVec.from_str(s[n:]))

    def is_identity(self) -> bool:
        return self.v == 0 and self.w == 0

    def __add__(self, other: "SymplecticPoint") -> "SymplecticPoint":
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        return SymplecticPoint(self.n, self.v ^ other.v, self.w ^ other.w)

    def __str__(self) -> str:
        return self.label()


def symp(a: int, b: int, n: int) -> int:
    """[a, b] for packed points."""
    mask = (1 << n) - 1
    return (((a >> n) & b & mask) ^ (a & mask & (b >> n))).bit_count() & 1


def symplectic_product(x: SymplecticPoint, y: SymplecticPoint) -> int:
    """[x, y] = <v_x, w_y> + <w_x, v_y> mod 2."""
    if x.n != y.n:
        raise ValueError(f"qubit count mismatch: {x.n} vs {y.n}")
    return dot(x.v, y.w) ^ dot(x.w, y.v)


def swap_halves(x: int, n: int) -> int:
    """(v, w) -> (w, v); then ``[a, x] == dot(swap_halves(a), x)``."""
    mask = (1 << n) - 1
    return ((x & mask) << n) | (x >> n)


def as_index(x) -> int:
    return x.index if isinstance(x, SymplecticPoint) else int(x)


# ---------------------------------------------------------------------------
# transforms


def walsh_hadamard(f) -> np.ndarray:
    """Fourier coefficients f^(S) = E_x[f(x) (-1)^{S.x}] for every S."""
    f = np.asarray(f)
    n = log2_exact(f.shape[0])
    dtype = np.complex128 if np.iscomplexobj(f) else np.float64
    out = np.array(f, dtype=dtype, copy=True).reshape(1, -1)
    kernels.wht_rows(out)
    out /= 1 << n
    return out.reshape(-1)


def inverse_walsh_hadamard(fhat) -> np.ndarray:
    fhat = np.asarray(fhat)
    n = log2_exact(fhat.shape[0])
    return walsh_hadamard(fhat) * (1 << n)


def _qubits_from_table(size: int) -> int:
    bits = log2_exact(size)
    if bits % 2:
        raise ValueError(f"table length {size} is not a power of four")
    return bits // 2


def symplectic_fourier(g) -> np.ndarray:
    """g~(a) = 4^-n sum_x (-1)^{[a,x]} g(x) over F_2^{2n}."""
    g = np.asarray(g)
    n = _qubits_from_table(g.shape[0])
    side = 1 << n
    std = walsh_hadamard(g)
    # [a, x] = swap(a) . x, and swap on the [v, w] grid is a transpose
    return np.ascontiguousarray(std.reshape(side, side).T).reshape(-1)


def inverse_symplectic_fourier(gb) -> np.ndarray:
    gb = np.asarray(gb)
    return symplectic_fourier(gb) * gb.shape[0]


# ---------------------------------------------------------------------------
# elimination on packed rows


def echelon(vectors: Iterable[int]) -> list[tuple[int, int]]:
    """Fully reduced echelon form as ``[(pivot_bit, row), ...]``, pivots descending.

    The pivot of a row is its highest set bit and no other row has that bit.
    """
    rows: list[tuple[int, int]] = []
    for vec in vectors:
        vec = int(vec)
        for p, r in rows:
            if vec >> p & 1:
                vec ^= r
        if vec:
            p = vec.bit_length() - 1
            rows = [(q, r ^ vec) if r >> p & 1 else (q, r) for q, r in rows]
            rows.append((p, vec))
    rows.sort(reverse=True)
    return rows


def reduce(vec: int, rows: Sequence[tuple[int, int]]) -> int:
    for p, r in rows:
        if vec >> p & 1:
            vec ^= r
    return vec


def rank(vectors: Iterable[int]) -> int:
    return len(echelon(vectors))


def solve(rows: Sequence[int], rhs: Sequence[int]) -> int:
    """Some x with ``dot(rows[i], x) == rhs[i]`` for all i; free variables are 0.

    Raises ``ValueError`` if the system is inconsistent.
    """
    aug = [(int(r) << 1) | (int(b) & 1) for r, b in zip(rows, rhs, strict=True)]
    red = echelon(aug)
    x = 0
    for p, r in red:
        if p == 0:
            raise ValueError("inconsistent F_2 system")
        if r & 1:
            x |= 1 << (p - 1)
    return x


def nullspace(rows: Sequence[int], nbits: int) -> list[int]:
    """Basis of {x in F_2^nbits : dot(r, x) = 0 for every row r}."""
    red = echelon(rows)
    pivots = {p for p, _ in red}
    basis = []
    for f in range(nbits):
        if f in pivots:
            continue
        x = 1 << f
        for p, r in red:
            if r >> f & 1:
                x |= 1 << p
        basis.append(x)
    return basis


def symplectic_complement(vectors: Iterable[int], n: int) -> list[int]:
    """Basis of {x : [s, x] = 0 for all s in vectors}."""
    return nullspace([swap_halves(int(s), n) for s in vectors], 2 * n)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class F2Subspace:
    """Subspace of F_2^{n_ambient} given by an independent basis of packed ints."""

    n_ambient: int
    basis: tuple[int, ...] = ()
    _rows: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = tuple(int(b) for b in self.basis)
        object.__setattr__(self, "basis", basis)
        for b in basis:
            if b < 0 or b >> self.n_ambient:
                raise ValueError(f"basis vector {b:#x} outside F_2^{self.n_ambient}")
        rows = tuple(echelon(basis))
        if len(rows) != len(basis):
            raise ValueError("basis vectors are not F_2-independent")
        object.__setattr__(self, "_rows", rows)

    @classmethod
    def from_generators(cls, gens: Iterable[int], n_ambient: int) -> "F2Subspace":
        """Span of ``gens``; keeps the first independent ones in order."""
        kept: list[int] = []
        rows: list[tuple[int, int]] = []
        for g in gens:
            g = int(g)
            if reduce(g, rows):
                kept.append(g)
                rows = echelon(kept)
        return cls(n_ambient, tuple(kept))

    @classmethod
    def full(cls, n_ambient: int) -> "F2Subspace":
        return cls(n_ambient, tuple(1 << i for i in range(n_ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.dim

    def contains(self, x) -> bool:
        return reduce(as_index(x), self._rows) == 0

    __contains__ = contains

    def canonical(self) -> tuple[int, ...]:
        """Reduced echelon rows; equal iff the spans are equal."""
        return tuple(r for _, r in self._rows)

    def same_span(self, other: "F2Subspace") -> bool:
        return self.n_ambient == other.n_ambient and self.canonical() == other.canonical()

    def basis_vectors(self) -> list[BitVec]:
        return [BitVec(self.n_ambient, b) for b in self.basis]

    def members(self, cap: int = caps.SPAN_MAX_DIM) -> np.ndarray:
        return span_members(self, cap)


def span_members(V: F2Subspace, cap: int = caps.SPAN_MAX_DIM) -> np.ndarray:
    """All 2^dim elements in Gray-code order over the basis coefficients."""
    caps.check(V.dim, cap, "span enumeration dimension")
    # by_coeff[c] = sum of basis vectors selected by the bits of c
    by_coeff = np.zeros(1, dtype=np.int64)
    for b in V.basis:
        by_coeff = np.concatenate([by_coeff, by_coeff ^ np.int64(b)])
    i = np.arange(V.size, dtype=np.int64)
    return by_coeff[i ^ (i >> 1)]


def coset_members(z, V: F2Subspace, cap: int = caps.SPAN_MAX_DIM) -> np.ndarray:
    """z + V, same order as :func:`span_members`."""
    return span_members(V, cap) ^ np.int64(as_index(z))

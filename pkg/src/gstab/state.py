"""Pure states and their exact spectral quantities.

A state on n qubits is an amplitude vector f of length 2^n; amplitude index
``y`` has qubit ``j`` in bit ``j - 1``.  Its characteristic distribution is

    p(v, w) = |<psi| W_{v,w} |psi>|^2 / 2^n = 2^-n |sum_y (-1)^{w.y} f(y) conj f(y ^ v)|^2

stored as a flat table indexed by the packed point ``(v << n) | w`` (so
``p.reshape(2^n, 2^n)[v, w]``).  The Weyl distribution q is the
self-convolution of p over F_2^{2n}.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import caps, kernels, rng
from .f2core import (
    SymplecticPoint,
    as_index,
    echelon,
    inverse_symplectic_fourier,
    log2_exact,
    rank,
    reduce,
    symp,
    symplectic_complement,
)
from .pauli import apply_weyl, weyl_phase

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if a.shape[0] != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} amplitudes, got {a.shape[0]}")
        norm2 = float(np.vdot(a, a).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (|f|^2 = {norm2!r})")
        a /= np.sqrt(norm2)
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @classmethod
    def normalized(cls, amps) -> "StateVector":
        a = np.asarray(amps, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise ValueError("zero vector")
        return cls(log2_exact(a.shape[0], "amplitude count"), a / nrm)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        a = np.zeros(1 << n, dtype=np.complex128)
        a[index] = 1.0
        return cls(n, a)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def to_dict(self) -> dict:
        return {"n": self.n, "amps": [[float(z.real), float(z.imag)] for z in self.amps]}

    @classmethod
    def from_dict(cls, d: dict) -> "StateVector":
        amps = np.array([complex(re_, im_) for re_, im_ in d["amps"]], dtype=np.complex128)
        n = int(d["n"])
        if amps.shape[0] != 1 << n:
            raise ValueError("amplitude count does not match n")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-6:
            raise ValueError(f"state is not normalised (|f|^2 = {norm2!r})")
        return cls(n, amps / np.sqrt(norm2))


def tensor(*states: StateVector) -> StateVector:
    """psi_1 (x) psi_2 (x) ...; the first factor occupies the lowest qubits."""
    amps = np.ones(1, dtype=np.complex128)
    n = 0
    for s in states:
        amps = np.kron(s.amps, amps)
        n += s.n
    return StateVector.normalized(amps)


T_STATE = StateVector(1, np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2.0))


def t_state(copies: int = 1) -> StateVector:
    return tensor(*([T_STATE] * copies))


# ---------------------------------------------------------------------------
# stabilizer states


def parse_signed_label(s: str) -> tuple[int, SymplecticPoint]:
    s = s.strip()
    sign = 1
    if s[:1] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    return sign, SymplecticPoint.from_label(s)


def _as_signed_points(generators, n: int | None) -> tuple[int, list[tuple[int, int]]]:
    out = []
    for g in generators:
        if isinstance(g, str):
            sign, pt = parse_signed_label(g)
            out.append((sign, pt.n, pt.index))
        elif isinstance(g, SymplecticPoint):
            out.append((1, g.n, g.index))
        else:
            sign, pt = g
            if isinstance(pt, SymplecticPoint):
                out.append((int(sign), pt.n, pt.index))
            else:
                if n is None:
                    raise ValueError("n is required for packed generators")
                out.append((int(sign), n, int(pt)))
    if not out:
        raise ValueError("no generators")
    ns = {m for _, m, _ in out}
    if n is not None:
        ns.add(n)
    if len(ns) != 1:
        raise ValueError("generators act on different qubit counts")
    n = ns.pop()
    if any(s not in (1, -1) for s, _, _ in out):
        raise ValueError("signs must be +1 or -1")
    return n, [(s, x) for s, _, x in out]


def validate_stabilizer_generators(points: Sequence[int], n: int) -> None:
    if len(points) != n:
        raise ValueError(f"need exactly {n} generators, got {len(points)}")
    if rank(points) != n:
        raise ValueError("generators are dependent")
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            if symp(a, b, n):
                raise ValueError("generators do not commute")


def _canonical_phase(a: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(a) > 1e-8))
    return a * (abs(a[k]) / a[k])


def make_stabilizer_state(generators, n: int | None = None) -> StateVector:
    """The state fixed by every signed Weyl operator in ``generators``.

    Generators can be signed labels (``"-XZ"``), SymplecticPoints, or
    ``(sign, point)`` pairs.  The global phase is fixed so that the first
    nonzero amplitude is real and positive.
    """
    n, signed = _as_signed_points(generators, n)
    validate_stabilizer_generators([x for _, x in signed], n)
    # project a fixed generic vector; it has nonzero overlap with every state
    g = rng.generator(0x5EED, rng.TAG_STATE_AUX)
    a = g.standard_normal(1 << n) + 1j * g.standard_normal(1 << n)
    for s, x in signed:
        a = 0.5 * (a + s * apply_weyl(x, a, n))
    return StateVector.normalized(_canonical_phase(a))


def random_lagrangian_basis(n: int, g: np.random.Generator) -> list[int]:
    basis: list[int] = []
    for _ in range(n):
        comp = symplectic_complement(basis, n)
        rows = echelon(basis)
        while True:
            coeffs = g.integers(0, 2, size=len(comp))
            cand = 0
            for c, vec in zip(coeffs, comp):
                if c:
                    cand ^= vec
            if reduce(cand, rows):
                basis.append(cand)
                break
    return basis


def random_stabilizer_generators(n: int, seed: int) -> list[tuple[int, int]]:
    g = rng.generator(seed, rng.TAG_STATE)
    basis = random_lagrangian_basis(n, g)
    signs = 1 - 2 * g.integers(0, 2, size=n)
    return [(int(s), x) for s, x in zip(signs, basis)]


def random_stabilizer_state(n: int, seed: int) -> StateVector:
    return make_stabilizer_state(random_stabilizer_generators(n, seed), n)


# ---------------------------------------------------------------------------
# phase states

_TERM = re.compile(r"^(\d+)?\*?((?:x\d+)*)$")


def parse_phase_polynomial(text: str) -> list[tuple[int, tuple[int, ...]]]:
    """Parse e.g. ``"x1x2 + 2x3 + 4*x1x2x3 + 1"`` into ``[(coef, vars)]``.

    A monomial without a coefficient gets 2^{|T|-1}, the smallest value
    allowed for it.  Variables are 1-based qubit indices.
    """
    terms = []
    for raw in text.replace(" ", "").split("+"):
        if not raw:
            raise ValueError(f"empty term in {text!r}")
        m = _TERM.match(raw)
        if m is None:
            raise ValueError(f"cannot parse term {raw!r}")
        coef_s, mono = m.groups()
        vars_ = tuple(sorted({int(v) for v in re.findall(r"x(\d+)", mono)}))
        if len(vars_) != mono.count("x"):
            raise ValueError(f"repeated variable in {raw!r}")
        if coef_s is None:
            if not vars_:
                raise ValueError(f"cannot parse term {raw!r}")
            coef = 1 << (len(vars_) - 1)
        else:
            coef = int(coef_s)
        terms.append((coef, vars_))
    return terms


def validate_phase_terms(terms, d: int, n: int) -> None:
    q = 1 << d
    for c, T in terms:
        if any(v < 1 or v > n for v in T):
            raise ValueError(f"variable index out of range in term {c}*{T}")
        if len(T) > d:
            raise ValueError(f"monomial of degree {len(T)} exceeds d={d}")
        if not 0 <= c < q:
            raise ValueError(f"coefficient {c} outside Z_{q}")
        if T and c % (1 << (len(T) - 1)):
            raise ValueError(f"coefficient {c} of a degree-{len(T)} monomial must be a multiple of {1 << (len(T) - 1)}")


def phase_function(terms, n: int, d: int) -> np.ndarray:
    xs = np.arange(1 << n)
    f = np.zeros(1 << n, dtype=np.int64)
    for c, T in terms:
        mono = np.ones(1 << n, dtype=np.int64)
        for v in T:
            mono &= (xs >> (v - 1)) & 1
        f += c * mono
    return f % (1 << d)


def make_phase_state(n: int, d: int, poly) -> StateVector:
    """2^{-n/2} sum_x omega^{f(x)} |x> with omega = exp(2 pi i / 2^d)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    terms = parse_phase_polynomial(poly) if isinstance(poly, str) else [(int(c), tuple(T)) for c, T in poly]
    validate_phase_terms(terms, d, n)
    f = phase_function(terms, n, d)
    amps = np.exp(2j * np.pi * f / (1 << d)) / np.sqrt(1 << n)
    return StateVector.normalized(amps)


# ---------------------------------------------------------------------------
# random instances


def haar_random_state(n: int, seed: int) -> StateVector:
    g = rng.generator(seed, rng.TAG_STATE)
    return StateVector.normalized(g.standard_normal(1 << n) + 1j * g.standard_normal(1 << n))


def noisy_stabilizer(n: int, eps: float, seed: int, return_base: bool = False):
    """sqrt(1-eps)|stab> + sqrt(eps)|perp>; fidelity with the base is 1 - eps."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    base = random_stabilizer_state(n, seed)
    g = rng.generator(seed, rng.TAG_STATE_AUX)
    r = g.standard_normal(1 << n) + 1j * g.standard_normal(1 << n)
    r -= np.vdot(base.amps, r) * base.amps
    r /= np.linalg.norm(r)
    psi = StateVector.normalized(np.sqrt(1.0 - eps) * base.amps + np.sqrt(eps) * r)
    return (psi, base) if return_base else psi


# ---------------------------------------------------------------------------
# exact quantities


def _check_n(psi: StateVector, x) -> int:
    if isinstance(x, SymplecticPoint) and x.n != psi.n:
        raise ValueError("dimension mismatch")
    return as_index(x)


def weyl_expectation(psi: StateVector, x) -> complex:
    """<psi| W_x |psi> = i^{v.w} sum_y (-1)^{w.y} f(y) conj f(y ^ v)."""
    n = psi.n
    idx = _check_n(psi, x)
    mask = (1 << n) - 1
    v, w = (idx >> n) & mask, idx & mask
    ys = np.arange(1 << n)
    f = psi.amps
    s = np.sum((1 - 2 * kernels.parity_np(ys & w)) * f * np.conj(f[ys ^ v]))
    return complex(weyl_phase(v, w) * s)


@dataclass(frozen=True, eq=False)
class CharTable:
    n: int
    p: np.ndarray = field(repr=False)

    def __getitem__(self, x) -> float:
        return float(self.p[as_index(x)])

    def grid(self) -> np.ndarray:
        """View indexed ``[v, w]``."""
        return self.p.reshape(1 << self.n, 1 << self.n)

    def weyl_table(self, method: str = "fourier") -> "WeylTable":
        return weyl_table(self, method)

    def write_csv(self, fh) -> None:
        wr = csv.writer(fh, lineterminator="\r\n")
        wr.writerow(["v", "w", "p"])
        n = self.n
        for idx, val in enumerate(self.p):
            pt = SymplecticPoint.from_index(n, idx)
            wr.writerow([str(pt.x_part), str(pt.z_part), repr(float(val))])


@dataclass(frozen=True, eq=False)
class WeylTable:
    n: int
    q: np.ndarray = field(repr=False)

    def __getitem__(self, x) -> float:
        return float(self.q[as_index(x)])


def char_table(psi: StateVector, chunk: int = 256) -> CharTable:
    n = psi.n
    caps.check(n, caps.table_max_n(), "characteristic table qubits")
    size = 1 << n
    f = np.ascontiguousarray(psi.amps)
    out = np.empty((size, size), dtype=np.float64)
    for v0 in range(0, size, chunk):
        v1 = min(size, v0 + chunk)
        kernels.char_rows(f, v0, v1, out[v0:v1])
    out /= size
    return CharTable(n, out.reshape(-1))


def _table(t) -> tuple[int, np.ndarray]:
    if isinstance(t, CharTable):
        return t.n, t.p
    if isinstance(t, StateVector):
        ct = char_table(t)
        return ct.n, ct.p
    arr = np.asarray(t, dtype=np.float64)
    return log2_exact(arr.shape[0], "table length") // 2, arr


def convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)(x) = sum_y a(y) b(x + y) over F_2^m, by Walsh-Hadamard squaring."""
    A = np.array(a, dtype=np.float64)[None, :]
    B = np.array(b, dtype=np.float64)[None, :]
    kernels.wht_rows(A)
    kernels.wht_rows(B)
    C = A * B
    kernels.wht_rows(C)
    return C[0] / a.shape[0]


def weyl_table(p, method: str = "fourier") -> WeylTable:
    """q = p * p.

    ``fourier`` squares the Walsh-Hadamard transform and works for any
    table.  ``selfdual`` uses the pure-state identity q = inverse
    symplectic transform of p^2.  ``naive`` is the quadratic double loop.
    """
    n, tab = _table(p)
    if method == "fourier":
        q = convolve(tab, tab)
    elif method == "selfdual":
        q = inverse_symplectic_fourier(tab ** 2)
    elif method == "naive":
        size = tab.shape[0]
        xs = np.arange(size)
        q = np.array([np.dot(tab, tab[xs ^ x]) for x in range(size)])
    else:
        raise ValueError(f"unknown method {method!r}")
    return WeylTable(n, q)


def gowers3_pow8(t) -> float:
    """||psi||_{U3}^8 = 2^n sum_x p(x)^2 = E_{x ~ p} |<W_x>|^2."""
    n, tab = _table(t)
    return float((1 << n) * np.dot(tab, tab))


def weyl_expect_q(t, method: str = "cubes") -> float:
    """E_{x ~ q} |<W_x>|^2, either as 2^{2n} sum p^3 or as sum_x q(x) 2^n p(x)."""
    n, tab = _table(t)
    if method == "cubes":
        return float(4.0 ** n * np.sum(tab ** 3))
    if method == "convolution":
        q = weyl_table(tab).q
        return float((1 << n) * np.dot(q, tab))
    raise ValueError(f"unknown method {method!r}")


def derivative_fourier(psi: StateVector) -> np.ndarray:
    """``F[y, a] = E_x f(x) conj f(x + y) (-1)^{a.x}`` for every direction y."""
    size = 1 << psi.n
    xs = np.arange(size)
    f = psi.amps
    F = f[None, :] * np.conj(f[xs[None, :] ^ xs[:, None]])
    kernels.wht_rows(F)
    return F / size


def gowers_norm_definition(psi: StateVector, k: int) -> float:
    """Gowers-k norm from the defining sum over x, h_1, ..., h_k.

    ||f||_{U^k}^{2^k} = 2^{n 2^{k-1}} E_{x,h} prod_omega C^{|omega|} f(x + omega.h)
    """
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")
    n = psi.n
    caps.check(n * (k + 1), caps.GOWERS_DIRECT_MAX, "n*(k+1) for the direct Gowers sum")
    total = kernels.gowers_sum(np.ascontiguousarray(psi.amps), k)
    val = total.real / 2.0 ** (n * (k + 1)) * 2.0 ** (n * 2 ** (k - 1))
    return max(val, 0.0) ** (1.0 / 2 ** k)

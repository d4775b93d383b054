"""Simulated Bell sampling and the shot-based estimators.

Bell sampling on psi (x) psi* returns x with probability p(x); Bell
difference sampling returns x + y for two independent Bell samples, so its
law is q = p * p.  The estimators then simulate measuring two copies of psi
in the eigenbasis of W_x (x) W_x, whose +-1 outcome has
Pr[+1] = (1 + <W_x>^2) / 2 = (1 + 2^n p(x)) / 2.  The mean outcome is an
unbiased estimate of E_x <W_x>^2.

All randomness is keyed by (seed, stream tag, shot index).
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from . import caps, rng
from .f2core import SymplecticPoint
from .pauli import weyl_matrix
from .state import StateVector, _table, char_table

DEFAULT_C = 8.0 * math.log(200.0)
QUANTITIES = ("gowers3_pow8", "weyl_expect_q")


@dataclass(frozen=True)
class ShotEstimate:
    quantity: str
    mean: float
    shots: int
    seed: int
    target_error: float

    def to_dict(self) -> dict:
        return asdict(self)


def shots_for(delta: float, c: float = DEFAULT_C) -> int:
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil(c / delta ** 2)


def _probs(t) -> tuple[int, np.ndarray]:
    if isinstance(t, StateVector):
        ct = char_table(t)
        return ct.n, ct.p
    return _table(t)


def sample_table(p: np.ndarray, shots: int, seed: int, tag: int, start: int = 0) -> np.ndarray:
    """Inverse-CDF draws from a probability table, shot ``i`` keyed by ``start + i``."""
    cdf = np.cumsum(p)
    u = rng.uniform_block(seed, tag, start, shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    # guard the top end against rounding
    last = int(np.flatnonzero(p > 0)[-1])
    return np.minimum(idx, last).astype(np.int64)


def bell_sample(t, shots: int, seed: int, start: int = 0) -> np.ndarray:
    """Packed points x ~ p."""
    _, p = _probs(t)
    return sample_table(p, shots, seed, rng.TAG_BELL_A, start)


def bell_difference_sample(t, shots: int, seed: int, start: int = 0) -> np.ndarray:
    """Packed points x + y with x, y ~ p independent, i.e. x ~ q."""
    _, p = _probs(t)
    a = sample_table(p, shots, seed, rng.TAG_BELL_A, start)
    b = sample_table(p, shots, seed, rng.TAG_BELL_B, start)
    return a ^ b


def measure_two_copies(expect_sq: np.ndarray, seed: int, start: int = 0) -> np.ndarray:
    """+-1 outcomes with Pr[+1] = (1 + <W>^2) / 2."""
    e = np.clip(expect_sq, 0.0, 1.0)
    e[np.abs(e - 1.0) < 1e-12] = 1.0
    u = rng.uniform_block(seed, rng.TAG_OUTCOME, start, e.shape[0])
    return np.where(u < 0.5 * (1.0 + e), 1, -1).astype(np.int8)


def _estimate(quantity, t, delta, seed, shots, c, return_samples):
    n, p = _probs(t)
    if delta is None and shots is None:
        raise ValueError("give delta or shots")
    if shots is None:
        shots = shots_for(delta, c)
    else:
        if shots < 1:
            raise ValueError("shots must be positive")
        if delta is None:
            delta = math.sqrt(c / shots)
        elif not 0.0 < delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
    if quantity == "gowers3_pow8":
        xs = sample_table(p, shots, seed, rng.TAG_BELL_A)
    else:
        xs = sample_table(p, shots, seed, rng.TAG_BELL_A) ^ sample_table(p, shots, seed, rng.TAG_BELL_B)
    outcomes = measure_two_copies((1 << n) * p[xs], seed)
    mean = float(outcomes.sum(dtype=np.int64)) / shots
    est = ShotEstimate(quantity, mean, int(shots), int(seed), float(delta))
    return (est, xs, outcomes) if return_samples else est


def estimate_gowers3_pow8(t, delta: float | None = None, seed: int = 0, shots: int | None = None,
                          c: float = DEFAULT_C, return_samples: bool = False):
    """Estimate E_{x ~ p} <W_x>^2 = ||psi||_{U3}^8 to additive error delta."""
    return _estimate("gowers3_pow8", t, delta, seed, shots, c, return_samples)


def estimate_weyl_expect_q(t, delta: float | None = None, seed: int = 0, shots: int | None = None,
                           c: float = DEFAULT_C, return_samples: bool = False):
    """Estimate E_{x ~ q} <W_x>^2 from Bell difference samples."""
    return _estimate("weyl_expect_q", t, delta, seed, shots, c, return_samples)


def write_samples_csv(fh, n: int, xs: np.ndarray, outcomes: np.ndarray) -> None:
    wr = csv.writer(fh, lineterminator="\r\n")
    wr.writerow(["shot_index", "v_bits", "w_bits", "outcome"])
    for i, (x, o) in enumerate(zip(xs, outcomes)):
        pt = SymplecticPoint.from_index(n, int(x))
        wr.writerow([i, str(pt.x_part), str(pt.z_part), int(o)])


# ---------------------------------------------------------------------------
# dense oracles


def bell_basis_probabilities(psi: StateVector) -> np.ndarray:
    """|<Phi_x| psi (x) psi*>|^2 with |Phi_x> = (W_x (x) I)|Phi+>, from dense vectors."""
    n = psi.n
    caps.check(n, caps.BELL_BASIS_MAX_N, "Bell-basis oracle qubits")
    d = 1 << n
    # first register occupies the low index bits
    joint = np.kron(np.conj(psi.amps), psi.amps)
    phi_plus = np.zeros(d * d, dtype=np.complex128)
    phi_plus[np.arange(d) * (d + 1)] = 1.0 / math.sqrt(d)
    out = np.empty(d * d)
    eye = np.eye(d)
    for x in range(d * d):
        W = np.kron(eye, weyl_matrix(SymplecticPoint.from_index(n, x)))
        out[x] = abs(np.vdot(W @ phi_plus, joint)) ** 2
    return out


def two_copy_plus_probability(psi: StateVector, x) -> float:
    """Pr[+1] when measuring W_x (x) W_x on psi (x) psi, from dense matrices."""
    n = psi.n
    caps.check(n, caps.TWO_COPY_MAX_N, "two-copy oracle qubits")
    pt = x if isinstance(x, SymplecticPoint) else SymplecticPoint.from_index(n, int(x))
    W = weyl_matrix(pt)
    WW = np.kron(W, W)
    proj = 0.5 * (np.eye(WW.shape[0]) + WW)
    two = np.kron(psi.amps, psi.amps)
    return float(np.vdot(two, proj @ two).real)


# ---------------------------------------------------------------------------
# goodness of fit


def _pooled(observed: np.ndarray, expected: np.ndarray, min_expected: float) -> tuple[np.ndarray, np.ndarray]:
    keep = expected >= min_expected
    obs, exp = list(observed[keep]), list(expected[keep])
    if (~keep).any():
        obs.append(observed[~keep].sum())
        exp.append(expected[~keep].sum())
    obs, exp = np.array(obs, dtype=float), np.array(exp, dtype=float)
    if exp[-1] == 0:
        obs, exp = obs[:-1], exp[:-1]
    return obs, exp


def chisquare_against(samples: np.ndarray, probs: np.ndarray, min_expected: float = 5.0) -> float:
    """p-value of a chi-square goodness-of-fit test; sparse cells are pooled."""
    counts = np.bincount(samples, minlength=probs.shape[0]).astype(float)
    expected = probs / probs.sum() * samples.shape[0]
    obs, exp = _pooled(counts, expected, min_expected)
    if obs.sum() != exp.sum():
        exp = exp * obs.sum() / exp.sum()
    if obs.shape[0] < 2:
        return 1.0
    return float(stats.chisquare(obs, exp).pvalue)


def chisquare_two_sample(a: np.ndarray, b: np.ndarray, size: int) -> float:
    """p-value for 'a and b come from the same distribution'."""
    ca = np.bincount(a, minlength=size)
    cb = np.bincount(b, minlength=size)
    keep = (ca + cb) > 0
    table = np.vstack([ca[keep], cb[keep]])
    if table.shape[1] < 2:
        return 1.0
    return float(stats.chi2_contingency(table, correction=False).pvalue)

"""Counter-based randomness.

Every random draw in the package comes from a Philox-4x64 stream keyed by
``(seed, tag)``.  Draw ``i`` of a stream is a pure function of
``(seed, tag, i)``, so blocks of draws can be produced in any order (or in
parallel) and concatenated without changing the result.

Tags separate independent purposes (first Bell sample, second Bell sample,
measurement outcome, state generation, ...).
"""

import numpy as np

MASK64 = (1 << 64) - 1

# stream tags
TAG_STATE = 1
TAG_STATE_AUX = 2
TAG_BELL_A = 11
TAG_BELL_B = 12
TAG_OUTCOME = 13
TAG_CHOICE = 21
TAG_SEARCH = 31


def _bitgen(seed: int, tag: int) -> np.random.Philox:
    return np.random.Philox(key=np.array([seed & MASK64, tag & MASK64], dtype=np.uint64))


def generator(seed: int, tag: int) -> np.random.Generator:
    """A full numpy Generator over the keyed stream (for shuffles, normals, ...)."""
    return np.random.Generator(_bitgen(seed, tag))


def raw_block(seed: int, tag: int, start: int, count: int) -> np.ndarray:
    """64-bit words ``start .. start+count-1`` of the keyed stream."""
    bg = _bitgen(seed, tag)
    # one Philox counter step yields four 64-bit words
    bg.advance(start // 4)
    skip = start % 4
    words = bg.random_raw(count + skip)
    return np.asarray(words[skip:], dtype=np.uint64)


def uniform_block(seed: int, tag: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles in [0, 1) for draws ``start .. start+count-1``."""
    words = raw_block(seed, tag, start, count)
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def derive_seed(seed: int, index: int, tag: int = TAG_SEARCH) -> int:
    """Child seed for trial ``index``; independent of how trials are scheduled."""
    return int(raw_block(seed, tag, index, 1)[0])

"""
Counter-based random substreams.

Every random draw in scorecard comes from a Philox generator whose key is
the user seed and whose counter carries (namespace, index) in its two high
words. Stream ``index`` of a namespace therefore never overlaps any other
stream, and the stream for a given replicate or trial is the same no matter
which thread evaluates it or in which order.
"""

from enum import IntEnum

import numpy as np

MASK_64b = 0xFFFFFFFFFFFFFFFF


class Namespace(IntEnum):
    """Disjoint counter spaces for the different consumers of randomness"""

    BOOTSTRAP = 1
    PROFILE_BANDS = 2
    PROFILE_VARIANCE = 3
    RANKS = 4
    HARNESS_TRIALS = 5
    SYNTHETIC_POOL = 6
    EVAL_SERIES = 7
    CHECKPOINTS = 8


def substream(seed: int, index: int, namespace: int = Namespace.BOOTSTRAP) -> np.random.Generator:
    """
    Generator for stream ``index`` of ``namespace`` under ``seed``.

    Args:
        seed: User seed (taken modulo 2**64)
        index: Replicate, trial or block index, >= 0
        namespace: Counter space, see Namespace

    Returns:
        Fresh numpy Generator positioned at the start of the stream
    """
    if index < 0:
        raise ValueError("stream index must be >= 0")
    counter = np.array([0, 0, int(namespace) & MASK_64b, index & MASK_64b], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed & MASK_64b, counter=counter))


def derive_seed(rng: np.random.Generator) -> int:
    """Draw a child seed for nested work (e.g. a bootstrap inside a trial)."""
    return int(rng.integers(0, 2**63 - 1, dtype=np.int64))

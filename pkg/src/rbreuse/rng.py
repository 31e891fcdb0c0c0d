"""Counter-based random streams with named substreams.

Every consumer of randomness receives a Generator derived from (seed, key)
through SeedSequence spawn keys over the Philox counter-based bit generator.
Substreams are independent of each other and of evaluation order, so results
are reproducible bit for bit regardless of chunking or worker count.

The benchmarking pipeline keys each sequence's stream by
(seed, sequence length, sequence index); the stream supplies the gate draws
first and the shot draw afterwards.
"""

from __future__ import annotations

import numpy as np

__all__ = ["sequence_stream", "substream"]


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream of ``seed`` named by integer ``key``."""
    words = tuple(int(k) for k in key)
    if any(k < 0 for k in words):
        raise ValueError("substream key words must be non-negative")
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=words)
    return np.random.Generator(np.random.Philox(seq))


def sequence_stream(seed: int, length: int, index: int) -> np.random.Generator:
    """The stream owning all randomness of one benchmarking sequence."""
    return substream(seed, length, index)

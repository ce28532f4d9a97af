import hashlib
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from classifier_distance_probes.shared.errors import ContractError

_STREAM_MASK = (1 << 63) - 1


def stream_id_for(*parts) -> int:
    """Derive a 63-bit stream id from a tuple of labels.

    The id depends only on ``repr`` of the parts, so it is stable across runs, processes and
    platforms (unlike ``hash()``).
    """
    digest = hashlib.blake2b(repr(tuple(parts)).encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'little') & _STREAM_MASK


class RngStream:
    """A seeded, counter-based random stream.

    Streams are Philox generators keyed by ``SeedSequence(master_seed, spawn_key=(stream_id,))``:
    equal ``(master_seed, stream_id)`` pairs give identical sequences on every platform and
    distinct stream ids share no state. A stream is single-owner; use :meth:`clone` or
    :meth:`child` to hand randomness to another consumer.
    """

    def __init__(self, master_seed: int, stream_id: int = 0):
        if master_seed < 0 or stream_id < 0:
            raise ContractError(f'Seeds must be non-negative, got master_seed={master_seed}, stream_id={stream_id}')
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        sequence = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_id,))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f'RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})'

    def clone(self) -> 'RngStream':
        """Copy this stream including its counter position."""
        twin = RngStream(self.master_seed, self.stream_id)
        twin._generator.bit_generator.state = self._generator.bit_generator.state
        return twin

    def child(self, *parts) -> 'RngStream':
        """Independent stream derived from this stream's id and ``parts``; does not advance this stream."""
        return RngStream(self.master_seed, stream_id_for(self.stream_id, *parts))

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._generator.uniform(low, high, size)

    def random(self, size=None):
        return self._generator.random(size)

    def normal(self, size=None, loc: float = 0.0, scale: float = 1.0):
        return self._generator.normal(loc, scale, size)

    def integers(self, low: int, high: Optional[int] = None, size=None):
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def choice(self, n: int, size=None, p: Optional[Sequence[float]] = None, replace: bool = True):
        return self._generator.choice(n, size=size, p=p, replace=replace)

    def multinomial(self, n: int, pvals: Sequence[float]) -> np.ndarray:
        return self._generator.multinomial(n, pvals)

    def multivariate_normal(self, mean, cov, size=None) -> np.ndarray:
        # fitted covariances may be rank deficient
        return self._generator.multivariate_normal(mean, cov, size=size, method='eigh')

"""
Block 2: Random Streams
Named, independent counter-based generators derived from one replicate seed
"""

from typing import Dict, Iterator, Mapping, Tuple

import numpy as np

STREAM_NAMES: Tuple[str, ...] = (
    "placement",
    "params",
    "long_links",
    "mobility",
    "state_machine",
    "social",
    "bootstrap",
    "order",
)

SEED_MODULUS = 2 ** 64


def make_stream(seed: int, name: str) -> np.random.Generator:
    """Philox generator for one concern; the spawn key is the name's fixed index"""
    index = STREAM_NAMES.index(name)
    sequence = np.random.SeedSequence(seed % SEED_MODULUS, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequence))


class StreamRegistry(Mapping[str, np.random.Generator]):
    """
    One generator per concern

    Drawing from one stream never shifts another, so e.g. a change in
    mobility leaves placement and parameters untouched.
    """

    def __init__(self, seed: int):
        self.seed = seed % SEED_MODULUS
        self._streams: Dict[str, np.random.Generator] = {name: make_stream(self.seed, name) for name in STREAM_NAMES}

    def __getitem__(self, name: str) -> np.random.Generator:
        try:
            return self._streams[name]
        except KeyError:
            raise KeyError(f"unknown random stream {name!r}; known: {', '.join(STREAM_NAMES)}")

    def __iter__(self) -> Iterator[str]:
        return iter(self._streams)

    def __len__(self) -> int:
        return len(self._streams)

"""Block 2: Simulation Engine"""

from .batch import BatchResult, BatchRunner, replicate_seeds, run_batch
from .engine import RunResult, run, step
from .streams import STREAM_NAMES, StreamRegistry, make_stream
from .world import World, init_world

__all__ = [
    "BatchResult",
    "BatchRunner",
    "replicate_seeds",
    "run_batch",
    "RunResult",
    "run",
    "step",
    "STREAM_NAMES",
    "StreamRegistry",
    "make_stream",
    "World",
    "init_world",
]

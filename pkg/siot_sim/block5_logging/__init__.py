"""Block 5: Logging and Monitoring"""

from .logger import SystemLogger

__all__ = ["SystemLogger"]

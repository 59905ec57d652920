"""
Main entry point for the SIoT Sharing Simulator v1.0
"""

import sys

from .block1_cli import main


if __name__ == "__main__":
    sys.exit(main())

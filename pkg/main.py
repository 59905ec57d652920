"""
Main entry point for the SIoT Sharing Simulator v1.0
Runs the command-line interface from a source checkout
"""

import logging
import sys
from dotenv import load_dotenv
from pathlib import Path

# Load .env file explicitly before importing settings
project_root = Path(__file__).resolve().parent
env_file = project_root / ".env"
if env_file.exists():
    load_dotenv(env_file)
else:
    load_dotenv()

from siot_sim.block1_cli import main as cli_main
from siot_sim.config import settings

logger = logging.getLogger(__name__)


def main() -> int:
    """Entry point: `python main.py run ...` or `python main.py matrix ...`"""
    logger.info(f"Environment: {settings.app_env}")
    try:
        return cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Received interrupt signal, shutting down...")
        return 130


if __name__ == "__main__":
    sys.exit(main())

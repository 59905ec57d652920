#!/usr/bin/env python3
"""
Quickstart: a small competitive vs cooperative comparison at desk scale
"""

import sys
from pathlib import Path

project_root = Path(__file__).resolve().parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from siot_sim.block2_engine import run_batch
from siot_sim.block7_metrics import grand_mean_not_served
from siot_sim.config import NetworkType, Strategy, build_config


def main():
    """Runs a few replicates of both strategies on a regular network and prints the means"""
    base = {
        "population": 100,
        "network": NetworkType.REGULAR,
        "horizon_days": 3,
        "seed": 7,
    }

    print("=" * 60)
    print("SIoT quickstart: 100 peers, regular network, 3 days, 5 runs")
    print("=" * 60)

    for strategy in (Strategy.COMPETITIVE, Strategy.COOPERATIVE):
        cfg = build_config(overrides={**base, "strategy": strategy})
        batch = run_batch(cfg, n_runs=5)
        mean = grand_mean_not_served(batch.runs)
        print(f"  {strategy.value:<24} mean daily not-served: {mean:10.1f}")

    print()
    print("Full experiments: python3 -m siot_sim.main run --help")


if __name__ == "__main__":
    main()

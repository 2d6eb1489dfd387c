"""Run every scenario config in configs/ and print its summary."""

import argparse
import json
import sys
import time
from pathlib import Path

from ringcascade.cli import RunConfig, run_scenario

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("configs", nargs="*", type=Path, help="config files (default: all of configs/)")
    p.add_argument("--quiet", action="store_true", help="print timings only")
    args = p.parse_args()
    paths = args.configs or sorted((ROOT / "configs").glob("*.yaml"))
    for path in paths:
        config = RunConfig.load(path)
        start = time.perf_counter()
        written = run_scenario(config)
        elapsed = time.perf_counter() - start
        print(f"{config.scenario}: {len(written)} files in {elapsed:.1f} s")
        if not args.quiet:
            summary = next(p for p in written if p.name == "summary.json")
            print(json.dumps(json.loads(summary.read_text()), indent=1)[:4000])
    return 0


if __name__ == "__main__":
    sys.exit(main())

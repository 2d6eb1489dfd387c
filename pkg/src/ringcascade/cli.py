"""Command-line scenario runner.

    ringcascade list-scenarios
    ringcascade validate CONFIG.yaml
    ringcascade run CONFIG.yaml

A config is a small YAML document::

    scenario: fig2-populations
    output_dir: out/fig2          # RINGCASCADE_OUTPUT_DIR overrides this
    format: csv                   # csv | json
    seed: 0
    time: {t_end: 40.0, dt: 0.002}
    filter: {gamma: 0.25, delta_k: {min: -15, max: 15, points: 601}, sample_times: [40.0]}
    params: {...}                 # scenario specific, merged over the defaults

Exit status: 0 success, 1 invalid parameters or I/O failure, 2 usage error
(unknown scenario, unreadable config).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from . import __version__
from .output import write_json
from .scenarios import DEFAULT_FILTER, REGISTRY, build_checks, deep_merge

log = logging.getLogger("ringcascade")

OUTPUT_ENV = "RINGCASCADE_OUTPUT_DIR"
FORMATS = ("csv", "json")


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    scenario: str
    params: dict = field(default_factory=dict)
    time: dict = field(default_factory=dict)
    filter: dict = field(default_factory=dict)
    output_dir: str | None = None
    seed: int = 0
    format: str = "csv"

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict) or "scenario" not in raw:
            raise UsageError("config must be a mapping with a 'scenario' key")
        known = {"scenario", "params", "time", "filter", "output_dir", "seed", "format"}
        extra = set(raw) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        return cls(**{k: v for k, v in raw.items() if v is not None})

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = yaml.safe_load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise UsageError(f"cannot parse config {path}: {exc}") from exc
        return cls.from_mapping(raw)

    def resolved(self) -> dict[str, Any]:
        """Scenario defaults with this config merged on top."""
        if self.scenario not in REGISTRY:
            raise UsageError(
                f"unknown scenario {self.scenario!r}; registered: {', '.join(sorted(REGISTRY))}"
            )
        base = {"time": {}, "filter": DEFAULT_FILTER, "params": {}}
        cfg = deep_merge(base, REGISTRY[self.scenario].defaults)
        cfg = deep_merge(cfg, {"time": self.time, "filter": self.filter, "params": self.params})
        out_dir = os.environ.get(OUTPUT_ENV) or self.output_dir or f"out/{self.scenario}"
        cfg.update(scenario=self.scenario, seed=int(self.seed), format=self.format, output_dir=out_dir)
        return cfg


def validate(config: RunConfig) -> list[dict[str, str]]:
    """Dry-run every invariant; returns findings, never writes anything."""
    cfg = config.resolved()
    findings = []
    if config.format not in FORMATS:
        findings.append(("format", f"must be one of {', '.join(FORMATS)}, got {config.format!r}", "error"))
    try:
        findings += build_checks(config.scenario, cfg)
    except (KeyError, TypeError) as exc:
        findings.append(("params", f"malformed parameters: {exc!r}", "error"))
    return [{"field": f, "message": m, "severity": s} for f, m, s in findings]


def run_scenario(config: RunConfig) -> list[Path]:
    """Execute a scenario and write its tables, summary and manifest."""
    cfg = config.resolved()
    errors = [f for f in validate(config) if f["severity"] == "error"]
    if errors:
        raise ConfigError("; ".join(f"{f['field']}: {f['message']}" for f in errors))
    scen = REGISTRY[config.scenario]
    log.info("running %s", scen.name)
    result = scen.run(cfg)

    out_dir = Path(cfg["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, table in result.tables.items():
        written.append(table.write(out_dir / name, cfg["format"]))
    written.append(write_json(out_dir / "summary.json", result.summary))
    manifest = {
        "scenario": scen.name,
        "description": scen.description,
        "version": __version__,
        "resolved": {k: v for k, v in cfg.items() if k != "output_dir"},
        "files": sorted(p.name for p in written),
    }
    written.append(write_json(out_dir / "manifest.json", manifest))
    return written


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringcascade", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario config")
    r.add_argument("config")
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("config")
    sub.add_parser("list-scenarios", help="print registered scenario names")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "list-scenarios":
            for name in sorted(REGISTRY):
                print(f"{name}\t{REGISTRY[name].description}")
            return 0
        config = RunConfig.load(args.config)
        if args.command == "validate":
            findings = validate(config)
            for f in findings:
                print(f"{f['severity']}: {f['field']}: {f['message']}")
            if not findings:
                print("ok")
            return 1 if any(f["severity"] == "error" for f in findings) else 0
        for path in run_scenario(config):
            print(path)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

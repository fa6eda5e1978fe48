"""``etale-atlas`` command-line front end.

Exit status: 0 on success, 1 on a domain error (for example a twist that is
not closed), 2 on an input error (unreadable or malformed files, bad flags).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import classifiers
from .cohomology import MAX_DEGREE, cohomology_group
from .errors import DomainError, EtaleAtlasError, InputError, InternalInconsistency
from .formats import load_cocycle, load_group, load_metric
from .metric import trivial_metric_group
from .report import render_classification, render_cohomology, render_transgression
from .transgression import transgress, transgress3

log = logging.getLogger("etale_atlas")

COMMANDS = ("cohomology", "lagrangian1", "etale1", "lagrangian2", "etale2rep", "etale2", "center", "transgress")
TWIST_DEGREE = {"lagrangian1": 3, "etale1": 3, "lagrangian2": 4, "etale2": 4}


@dataclass
class RunConfig:
    command: str
    group_path: str
    cocycle_path: str | None = None
    metric_paths: list[str] = field(default_factory=list)
    degree: int | None = None
    element: int | None = None
    output_path: str | None = None
    verbosity: int = 0

    def validate(self) -> None:
        c = self.command
        if c not in COMMANDS:
            raise InputError(f"unknown command {c!r}")
        if c == "cohomology":
            if self.degree is None or not 1 <= self.degree <= MAX_DEGREE:
                raise InputError(f"cohomology needs --degree in 1..{MAX_DEGREE}")
        if c in ("center", "transgress") and self.degree not in (3, 4):
            raise InputError(f"{c} needs --degree 3 or 4")
        if c == "transgress":
            if self.cocycle_path is None or self.element is None:
                raise InputError("transgress needs --cocycle and --element")
        if c == "etale2" and len(self.metric_paths) > 1:
            raise InputError("etale2 takes at most one --metric")


def _twist(cfg: RunConfig, G, degree: int):
    if cfg.cocycle_path is None:
        return None
    _, c = load_cocycle(cfg.cocycle_path, G)
    if c.degree != degree:
        raise InputError(f"{cfg.command} needs a degree-{degree} cocycle, file has degree {c.degree}",
                         path=cfg.cocycle_path)
    return c


def execute(cfg: RunConfig) -> str:
    """Run one command and return its report text."""
    cfg.validate()
    G = load_group(cfg.group_path)
    c = cfg.command
    if c == "cohomology":
        return render_cohomology(cohomology_group(G, cfg.degree))
    if c == "transgress":
        _, w = load_cocycle(cfg.cocycle_path, G)
        if w.degree != cfg.degree:
            raise InputError(f"--degree {cfg.degree} but cocycle has degree {w.degree}", path=cfg.cocycle_path)
        res = (transgress if cfg.degree == 4 else transgress3)(w, cfg.element)
        return render_transgression(res, cfg.degree)
    if c == "center":
        result = classifiers.center_sectors(G, _twist(cfg, G, cfg.degree), cfg.degree)
        return render_classification(result, cfg.verbosity > 0, [f"degree: {cfg.degree}"])
    if c == "etale2rep":
        metrics = [load_metric(p) for p in cfg.metric_paths]
        result = classifiers.enumerate_etale_2rep_pointed(G, metrics)
        return render_classification(result, cfg.verbosity > 0, [f"candidates: {len(metrics)}"])
    twist = _twist(cfg, G, TWIST_DEGREE[c])
    if c == "lagrangian1":
        result = classifiers.enumerate_lagrangian1(G, twist)
    elif c == "etale1":
        result = classifiers.enumerate_etale1(G, twist)
    elif c == "lagrangian2":
        result = classifiers.enumerate_lagrangian2_trivial_pointed(G, twist)
    else:
        A = load_metric(cfg.metric_paths[0]) if cfg.metric_paths else trivial_metric_group()
        result = classifiers.enumerate_etale2_skeleton(G, twist, A)
    return render_classification(result, cfg.verbosity > 0, [f"twist: {'zero' if twist is None else 'given'}"])


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="etale-atlas", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", required=True, help="group file, or a built-in name such as S3 or Z2xZ2")
    p.add_argument("--cocycle", help="cocycle file (FILE or REPORT::name)")
    p.add_argument("--metric", action="append", default=[], help="metric-group file; repeatable")
    p.add_argument("--degree", type=int)
    p.add_argument("--element", type=int)
    p.add_argument("--output", help="write the report here instead of standard output")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _ArgError as e:
        print(f"etale-atlas: error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.DEBUG if ns.verbose > 1 else logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    cfg = RunConfig(ns.command, ns.group, ns.cocycle, ns.metric, ns.degree, ns.element, ns.output, ns.verbose)
    t0 = time.perf_counter()
    try:
        text = execute(cfg)
    except InputError as e:
        print(f"etale-atlas: input error: {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        print(f"etale-atlas: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except InternalInconsistency:
        raise
    except (ValueError, EtaleAtlasError) as e:
        print(f"etale-atlas: input error: {e}", file=sys.stderr)
        return 2
    log.info("%s finished in %.2f s", cfg.command, time.perf_counter() - t0)
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"etale-atlas: input error: cannot write {cfg.output_path}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

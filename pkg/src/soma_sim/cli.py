"""``soma-sim`` command line: run, sweep, validate, dump-config.

Exit codes: 0 success, 1 runtime failure (including failed self-checks),
2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import config as cfgmod
from .errors import ConfigError
from .experiments import sweep
from .selfcheck import run_checks

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a dotted config key (repeatable)")
    common.add_argument("--seed", type=int, help="shorthand for --set run.seed=N")
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="soma-sim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [("run", "train one map"),
                            ("sweep", "cross product of run.sweep_w and run.sweep_seeds")]:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--out", metavar="DIR", required=True)
    sub.add_parser("validate", parents=[common], help="fast oracle self-checks")
    p = sub.add_parser("dump-config", parents=[common], help="print the effective config")
    p.add_argument("--out", metavar="DIR")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    say = (lambda *a: None) if args.quiet else print
    try:
        effective = cfgmod.load(args.config, args.overrides, args.seed)
        run_cfg = cfgmod.build(effective)
    except ConfigError as exc:
        for path, msg in exc.problems:
            print(f"config error: {path}: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    text = cfgmod.dumps(effective)

    try:
        if args.command == "dump-config":
            if args.out:
                from pathlib import Path
                Path(args.out).mkdir(parents=True, exist_ok=True)
                (Path(args.out) / "effective-config").write_text(text)
            sys.stdout.write(text)
            return EXIT_OK

        if args.command == "validate":
            results = run_checks(run_cfg)
            for res in results:
                say(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
            return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME

        start = time.perf_counter()
        if args.command == "run":
            from .experiments import run
            result = run(run_cfg)
            result.write(args.out, text)
            f = result.final
            say(f"{run_cfg.steps} steps in {time.perf_counter() - start:.1f}s: "
                f"aqe_eval={f.aqe_eval:.5f} edges={f.edge_count} components={f.component_count}")
        else:
            r = effective["run"]
            result = sweep(run_cfg, r["sweep_w"], r["sweep_seeds"])
            result.write(args.out, text)
            for row in result.summary():
                say(f"w={row['w']:g}: final aqe {row['final_aqe_mean']:.5f} "
                    f"+- {row['final_aqe_std']:.5f}, edges {row['final_edges_mean']:.1f}, "
                    f"components {row['final_components_mean']:.1f}")
        return EXIT_OK
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

"""``sweep`` command: run a driving-time sweep and write CSV (and SVG) output.

Exit status is 0 on success, 2 for configuration errors and 3 when a
numerical step fails or any emitted row breaks a thermodynamic invariant.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .svgplot import emit_svg_plot
from .sweep import ConfigError, SweepError, emit_csv, parse_config, row_violations, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("qthermo.sweep")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: config error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sweep", description="Driving-time sweep of a Gibbs-initialized driven qubit.")
    p.add_argument("--config", metavar="FILE", help="key = value config file")
    p.add_argument("--temperature-hz", metavar="X", help="initial temperature (beta h)^-1 in Hz")
    p.add_argument("--nu-i", metavar="X", help="initial gap in Hz")
    p.add_argument("--nu-f", metavar="X,Y,...", help="comma-separated final gaps in Hz")
    p.add_argument("--tau-start", metavar="S", help="shortest driving time in seconds")
    p.add_argument("--tau-end", metavar="S", help="longest driving time in seconds")
    p.add_argument("--tau-steps", metavar="N", help="number of driving times (inclusive grid)")
    p.add_argument("--slices", metavar="N", help="initial time-slice count of the propagator")
    p.add_argument("--tolerance", metavar="X", help="propagator convergence tolerance")
    p.add_argument("--out", metavar="PATH", help="CSV output path")
    p.add_argument("--plot", metavar="PATH", help="SVG output path (suffixed per final gap)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


_FLAG_KEYS = (
    "temperature_hz", "nu_i", "nu_f", "tau_start", "tau_end",
    "tau_steps", "slices", "tolerance", "out", "plot",
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s"
    )
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else None
        cfg = parse_config(text, {k: getattr(args, k) for k in _FLAG_KEYS})
    except (ConfigError, OSError) as exc:
        print(f"sweep: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        rows = run_sweep(cfg)
    except SweepError as exc:
        print(f"sweep: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        emit_csv(rows, cfg.output_path)
        plots = emit_svg_plot(rows, cfg.plot_path) if cfg.plot_path else []
    except OSError as exc:
        print(f"sweep: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("wrote %d rows to %s", len(rows), cfg.output_path)
    for p in plots:
        log.info("wrote plot %s", p)

    bad = row_violations(rows)
    if bad:
        for line in bad:
            print(f"sweep: invariant violated at {line}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

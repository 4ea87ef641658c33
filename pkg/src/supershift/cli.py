"""Command-line entry point.

Subcommands: ``evolve``, ``supershift``, ``green-table``, ``selfcheck`` and
``defaults``.  Exit codes: 0 success, 1 selfcheck failure, 2 configuration
error, 3 capability error, 4 unconverged cells (rows are still written).
"""
import argparse
import cmath
import contextlib
import csv
import json
import logging
import sys

import numpy as np

from . import __version__
from . import acceptance, greens
from .config import ConfigError, RunConfig, parse_complex_list
from .evolution import evolve_grid, supershift_scan
from .exceptions import (CapabilityError, DomainError, PreconditionError, RangeError,
                         SetupError)

log = logging.getLogger("supershift")

EXIT_OK, EXIT_SELFCHECK, EXIT_CONFIG, EXIT_CAPABILITY, EXIT_UNCONVERGED = 0, 1, 2, 3, 4

EVOLVE_HEADER = ["t", "x", "psi_re", "psi_im", "psi_abs", "psi_arg", "converged"]
SUPERSHIFT_HEADER = ["n", "sup_error", "linearity_residual"]
GREEN_HEADER = ["t", "x", "z_re", "z_im", "g_re", "g_im", "gtilde_re", "gtilde_im",
                "residual_abs"]


def fmt(v):
    """17 significant digits, fixed layout for byte-identical output."""
    return format(float(v) + 0.0, ".17g")  # + 0.0 folds -0 into 0


@contextlib.contextmanager
def _sink(path):
    if path in ("-", ""):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def cmd_evolve(cfg, workers=1):
    prob = cfg.problem()
    t, x = cfg.grids()
    fld = evolve_grid(prob, t, x, workers=workers)
    with _sink(cfg["output.path"]) as fh:
        w = _writer(fh)
        w.writerow(EVOLVE_HEADER)
        for i, tt in enumerate(fld.t_grid):
            for j, xx in enumerate(fld.x_grid):
                v = complex(fld.values[i, j])
                w.writerow([fmt(tt), fmt(xx), fmt(v.real), fmt(v.imag), fmt(abs(v)),
                            fmt(cmath.phase(v)), int(fld.converged[i, j])])
    if not fld.converged.all():
        log.warning("%d of %d cells did not converge", int((~fld.converged).sum()),
                    fld.converged.size)
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_supershift(cfg, workers=1):
    spec = cfg.green_spec()
    fam = cfg.family()
    n_seq = cfg.n_seq()
    t = cfg.get_float("supershift.t")
    if not t > 0:
        raise ConfigError("supershift.t must be positive")
    compact = cfg.compact()
    rows = supershift_scan(spec, fam, n_seq, t, compact, cfg.get_float("contour.theta"),
                           cfg.quadrature(), linearity=cfg.linearity()) if n_seq else []
    with _sink(cfg["output.path"]) as fh:
        w = _writer(fh)
        w.writerow(SUPERSHIFT_HEADER)
        for r in rows:
            w.writerow([r["n"], fmt(r["sup_error"]), fmt(r["linearity_residual"])])
    if not all(r["converged"] for r in rows):
        return EXIT_UNCONVERGED
    return EXIT_OK


def _steps(h, t, x, z):
    """Difference steps as a fraction ``h`` of the local oscillation scale of G."""
    a = 0.25 / t
    w = abs(z - x)
    h_t = h * t / (1.0 + a * w * w)
    h_x = h / (1.0 / abs(x) + 2.0 * a * w) if x else h / (2.0 * a * w + 1.0)
    return h_t, h_x


def cmd_green_table(cfg, workers=1):
    spec = cfg.green_spec()
    t, x = cfg.grids()
    z = parse_complex_list(cfg["grid.z"])
    if z.size == 0:
        raise ConfigError("grid.z must be non-empty")
    h = cfg.get_float("green.h")
    if not h > 0:
        raise ConfigError("green.h must be positive")
    with _sink(cfg["output.path"]) as fh:
        w = _writer(fh)
        w.writerow(GREEN_HEADER)
        for tt in t:
            for xx in x:
                for zz in z:
                    ev = greens.eval_green(spec, tt, xx, zz)
                    h_t, h_x = _steps(h, tt, xx, zz)
                    res = greens.schrodinger_residual(spec, tt, xx, zz, h_t, h_x,
                                                      richardson=True)
                    w.writerow([fmt(tt), fmt(xx), fmt(zz.real), fmt(zz.imag),
                                fmt(ev.value.real), fmt(ev.value.imag),
                                fmt(ev.gtilde.real), fmt(ev.gtilde.imag), fmt(abs(res))])
    return EXIT_OK


def cmd_selfcheck(level, jsonl=None):
    numbers = acceptance.FAST if level == "fast" else tuple(range(1, len(acceptance.CRITERIA) + 1))
    results = []
    for n in numbers:
        r = acceptance.run(n)
        print(r.line(), flush=True)
        results.append(r)
    lines = [json.dumps({"criterion": r.number, "title": r.title, "passed": r.passed,
                         "runtime": round(r.runtime, 3), "budget": r.budget,
                         "metrics": _jsonable(r.metrics), "note": r.note}) for r in results]
    if jsonl:
        with open(jsonl, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    failed = [r.number for r in results if not r.passed]
    print(f"selfcheck {level}: {len(results) - len(failed)}/{len(results)} passed"
          + (f"; failing: {failed}" if failed else ""))
    return EXIT_SELFCHECK if failed else EXIT_OK


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def build_parser():
    p = argparse.ArgumentParser(prog="supershift",
                                description="Schrodinger evolution of superoscillatory data.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-c", "--config", help="INI configuration file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key, e.g. potential.variant=point")
        sp.add_argument("-o", "--output", help="output path (overrides output.path)")
        sp.add_argument("-j", "--workers", type=int, default=1)

    common(sub.add_parser("evolve", help="Psi on a (t, x) grid"))
    common(sub.add_parser("supershift", help="sup-errors of evolved superoscillations"))
    common(sub.add_parser("green-table", help="kernel values and PDE residuals"))
    sc = sub.add_parser("selfcheck", help="run the acceptance checks")
    sc.add_argument("--level", choices=("fast", "full"), default="fast")
    sc.add_argument("--jsonl", help="write the JSON-lines report here instead of stdout")
    d = sub.add_parser("defaults", help="print the default configuration")
    d.add_argument("-c", "--config", help="merge this file before printing")
    d.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    return p


COMMANDS = {"evolve": cmd_evolve, "supershift": cmd_supershift, "green-table": cmd_green_table}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "selfcheck":
            return cmd_selfcheck(args.level, args.jsonl)
        cfg = RunConfig.from_sources(args.config, args.set)
        if args.command == "defaults":
            sys.stdout.write(cfg.to_ini())
            return EXIT_OK
        if args.output:
            cfg.set("output.path", args.output)
        if args.workers < 1:
            raise ConfigError("--workers must be at least 1")
        return COMMANDS[args.command](cfg, workers=args.workers)
    except CapabilityError as exc:
        log.error("%s", exc)
        return EXIT_CAPABILITY
    except (ConfigError, PreconditionError, DomainError, RangeError, SetupError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

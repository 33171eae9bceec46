"""Command-line front end: metric sweeps to CSV, the validation report, SVG charts.

SNRs are given in dB here and converted once, on the way in.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import analytics as an
from . import montecarlo as mc
from .channel import Binary, LinkParams, modulation_label, parse_modulation
from .curve import Curve, fmt, read_csv, to_csv, write_text
from .errors import RffsoError

METRIC_COMMANDS = ("cdf", "pdf", "mgf", "moments", "af", "ber", "ser", "capacity")

# Built-in values of every setting that can come from flags or the JSON file.
DEFAULTS = {
    "alpha": 2.1,
    "beta": 3.5,
    "xi": "1",
    "relay_c": 0.6,
    "gbar1_db": 10.0,
    "gbar2_db": None,
    "grid": None,
    "grid_scale": None,
    "modulation": None,
    "samples": None,
    "seed": mc.DEFAULT_SEED,
    "out": None,
    "figure": None,
}

DEFAULT_GRIDS = {
    "cdf": "0.5:30:0.5",
    "pdf": "0.5:30:0.5",
    "mgf": "0.1:10:0.1",
    "moments": "1:4:1",
    "af": "1:4:1",
    "ber": "0:40:5",
    "ser": "0:40:5",
    "capacity": "0:40:5",
}

DEFAULT_MODULATION = {"ber": "cbpsk", "ser": "mpsk:8"}


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def parse_grid(text):
    """``start:stop:step`` with ``stop`` included when the step lands on it."""
    parts = str(text).split(":")
    if len(parts) == 1:
        values = np.array([float(parts[0])])
    elif len(parts) == 3:
        start, stop, step = (float(p) for p in parts)
        if not step > 0 or stop < start:
            raise ValueError(f"grid {text!r}: need step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count > 100000:
            raise ValueError(f"grid {text!r} has {count} points; the limit is 100000")
        values = start + step * np.arange(count)
    else:
        raise ValueError(f"grid {text!r}: expected start:stop:step or a single value")
    return values


def parse_xi_list(text):
    out = []
    for item in str(text).split(","):
        item = item.strip().lower()
        value = math.inf if item in ("inf", "infinity", "none") else float(item)
        if not value > 0:
            raise ValueError(f"xi must be positive or 'inf', got {item!r}")
        out.append(value)
    return out


def load_settings(args):
    """Merge built-in defaults, the JSON config file, then explicit flags."""
    settings = dict(DEFAULTS)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        unknown = set(data) - set(DEFAULTS) - {"mc_samples"}
        if unknown:
            raise ValueError(f"{args.config}: unknown keys {sorted(unknown)}")
        settings.update(data)
    for key in list(DEFAULTS) + ["mc_samples"]:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _series_name(metric, xi, mod=None):
    parts = [metric]
    if mod is not None:
        parts.append(modulation_label(mod).lower())
    parts.append(f"xi{xi:g}")
    return "_".join(parts)


def build_curve(command, settings):
    """Analytic series (plus Monte-Carlo series when ``samples`` is set) for one command."""
    xis = parse_xi_list(settings["xi"])
    grid = parse_grid(settings["grid"] or DEFAULT_GRIDS[command])
    scale = settings["grid_scale"] or ("db" if command in ("ber", "ser", "capacity") else "linear")
    if scale not in ("db", "linear"):
        raise ValueError("grid scale must be 'db' or 'linear'")
    if command in ("moments", "af") and np.any((grid < 1) | (grid != np.round(grid))):
        raise ValueError(f"{command} grid must hold positive integer orders")
    gbar1 = float(db_to_linear(settings["gbar1_db"]))
    gbar2_db = settings["gbar2_db"]
    samples = settings["samples"]
    mc_cfg = mc.McConfig(samples=int(samples), seed=int(settings["seed"])) if samples else None

    sweep_snr = command in ("ber", "ser", "capacity")
    x_name = {"cdf": "gamma", "pdf": "gamma", "mgf": "s", "moments": "n", "af": "n"}.get(command, "gbar1")
    if scale == "db":
        x_name += "_db"
    points = db_to_linear(grid) if scale == "db" else grid
    curve = Curve(x_name, grid, metadata={"command": command})

    mods = [None]
    if command in ("ber", "ser"):
        mods = [parse_modulation(m) for m in str(settings["modulation"] or DEFAULT_MODULATION[command]).split(",")]
        for mod in mods:
            binary = isinstance(mod, Binary)
            if binary != (command == "ber"):
                want = "a binary scheme (cbfsk, cbpsk, nbfsk, dbpsk)" if command == "ber" else "an M-ary scheme (mpsk:M, mam:M, mqam:M)"
                raise ValueError(f"{command} needs {want}, got {modulation_label(mod)}")

    def link(xi, g1):
        g2 = g1 if gbar2_db is None else float(db_to_linear(gbar2_db))
        return LinkParams(settings["alpha"], settings["beta"], xi, settings["relay_c"], g1, g2)

    for xi in xis:
        for mod in mods:
            name = _series_name(command if command != "moments" else "moment", xi, mod)
            if sweep_snr:
                links = [link(xi, float(g)) for g in points]
                if command == "capacity":
                    values = [an.ergodic_capacity(p) for p in links]
                else:
                    values = [an.avg_error_rate(p, mod) for p in links]
            else:
                values = an.evaluate(an.MetricRequest(link(xi, gbar1), command, tuple(points), mod))
            curve.add(name, values)
            if mc_cfg is None or command in ("pdf", "mgf"):
                continue
            if command == "cdf":
                est = mc.empirical_cdf(link(xi, gbar1), points, mc_cfg)
            elif command == "moments":
                est = [mc.estimate_moment(link(xi, gbar1), int(n), mc_cfg) for n in points]
            elif command == "af":
                est = [mc.estimate_af(link(xi, gbar1), int(n), mc_cfg) for n in points]
            elif command == "capacity":
                est = [mc.estimate_capacity(p, mc_cfg) for p in links]
            else:
                est = [mc.estimate_error_rate(p, mod, mc_cfg) for p in links]
            curve.add(f"mc_{name}", [e.value for e in est])
            curve.add(f"mc_{name}_std_error", [e.std_error for e in est])
    return curve


def _emit(text, out):
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def run_metric(command, settings):
    if settings["samples"] and command in ("pdf", "mgf"):
        print(f"note: no Monte-Carlo estimator for {command}; --samples ignored", file=sys.stderr)
    curve = build_curve(command, settings)
    _emit(to_csv(curve), settings["out"])
    if settings["figure"]:
        from .plotting import render_figure

        render_figure(curve, settings["figure"], title=command)
    return 0


def checks_csv(checks):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check_id", "measured", "relation", "threshold", "status"])
    for c in checks:
        writer.writerow([c.check_id, fmt(c.measured), c.relation, fmt(c.threshold), "PASS" if c.passed else "FAIL"])
    return buf.getvalue()


def validation_figures(out_dir):
    """Figure data for the report: BER curves and capacity against gbar1, as CSV plus SVG."""
    from .plotting import render_figure

    from .validation import reference_params

    made = []
    grid_db = np.arange(0.0, 41.0, 5.0)
    ber = Curve("gbar1_db", grid_db)
    for xi in (1.0, 6.7):
        for key in ("cbpsk", "nbfsk"):
            mod = parse_modulation(key)
            ber.add(_series_name("ber", xi, mod), [an.avg_ber_binary(reference_params(xi, g), mod) for g in db_to_linear(grid_db)])
    cap_db = np.arange(0.0, 31.0, 10.0)
    cap = Curve("gbar1_db", cap_db)
    for xi in (1.0, 6.7, math.inf):
        cap.add(_series_name("capacity", xi), [an.ergodic_capacity(reference_params(xi, g)) for g in db_to_linear(cap_db)])
    for stem, curve, title in (("ber", ber, "average BER"), ("capacity", cap, "ergodic capacity [bit/s/Hz]")):
        write_text(os.path.join(out_dir, f"{stem}.csv"), to_csv(curve))
        render_figure(curve, os.path.join(out_dir, f"{stem}.svg"), title=title)
        made += [f"{stem}.csv", f"{stem}.svg"]
    return made


def run_validate(settings, args):
    from .validation import format_report, run_all

    samples = int(settings["samples"] or 10**6)
    mc_samples = int(settings.get("mc_samples") or 10**7)
    seed = int(settings["seed"])
    progress = (lambda stage: print(f"[validate] {stage}", file=sys.stderr)) if args.verbose else None
    checks, notes = run_all(samples=samples, mc_samples=mc_samples, seed=seed, progress=progress)
    report = format_report(checks, notes, seed)
    out_dir = settings["out"]
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        write_text(os.path.join(out_dir, "report.txt"), report)
        write_text(os.path.join(out_dir, "checks.csv"), checks_csv(checks))
        if not args.no_figures:
            try:
                validation_figures(out_dir)
            except RuntimeError as exc:
                print(f"note: figures skipped ({exc})", file=sys.stderr)
    sys.stdout.write(report)
    return 0 if all(c.passed for c in checks) else 1


def run_plot(args):
    from .plotting import svg_chart

    curve = read_csv(args.csv)
    logy = {"auto": None, "log": True, "linear": False}[args.yscale]
    svg = svg_chart(curve, title=args.title, logy=logy)
    _emit(svg, args.out)
    return 0


def _add_link_flags(p):
    g = p.add_argument_group("link parameters")
    g.add_argument("--alpha", type=float, help="turbulence shape alpha (default 2.1)")
    g.add_argument("--beta", type=float, help="turbulence shape beta (default 3.5)")
    g.add_argument("--xi", help="pointing-error ratio; 'inf' for none; comma list for several series (default 1)")
    g.add_argument("--relay-c", dest="relay_c", type=float, help="fixed relay gain constant C (default 0.6)")
    g.add_argument("--gbar1-db", dest="gbar1_db", type=float, help="RF-hop average SNR in dB (default 10)")
    g.add_argument("--gbar2-db", dest="gbar2_db", type=float, help="FSO-hop average SNR in dB (default: equal to gbar1)")


def _add_run_flags(p, out_help):
    p.add_argument("--samples", type=int, help="Monte-Carlo draws; adds mc_* columns with standard errors")
    p.add_argument("--seed", type=int, help=f"Monte-Carlo seed (default {mc.DEFAULT_SEED})")
    p.add_argument("--out", help=out_help)
    p.add_argument("--config", help="JSON file of settings; explicit flags take precedence")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="rffso",
        description="Statistics and error/capacity metrics of a fixed-gain RF/FSO relay link.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "cdf": "CDF (outage probability) over a gamma grid",
        "pdf": "PDF over a gamma grid",
        "mgf": "MGF E[exp(-s gamma)] over an s grid",
        "moments": "raw moments over a grid of orders",
        "af": "amount of fading over a grid of orders",
        "ber": "average BER of binary schemes over a gbar1 grid (dB)",
        "ser": "average SER of M-ary schemes over a gbar1 grid (dB)",
        "capacity": "ergodic capacity over a gbar1 grid (dB)",
    }
    for name in METRIC_COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        _add_link_flags(p)
        p.add_argument("--grid", help=f"start:stop:step (default {DEFAULT_GRIDS[name]})")
        p.add_argument("--grid-scale", dest="grid_scale", choices=("db", "linear"))
        if name in ("ber", "ser"):
            p.add_argument(
                "--modulation",
                help="cbfsk|cbpsk|nbfsk|dbpsk|mpsk:M|mam:M|mqam:M; comma list for several series",
            )
        p.add_argument("--figure", help="also render a matplotlib figure (.svg/.png/.pdf)")
        _add_run_flags(p, "CSV output path (default stdout)")
    p = sub.add_parser("validate", help="run every acceptance check and print the report")
    p.add_argument("--mc-samples", dest="mc_samples", type=int, help="draws for moment/AF/capacity checks (default 1e7)")
    p.add_argument("--no-figures", action="store_true", help="skip the matplotlib figures in --out")
    p.add_argument("-v", "--verbose", action="store_true", help="stage progress on stderr")
    _add_run_flags(p, "directory for report.txt, checks.csv and figures")
    p = sub.add_parser("plot", help="standalone SVG line chart of a CSV written by this tool")
    p.add_argument("csv", help="input CSV")
    p.add_argument("--out", help="SVG output path (default stdout)")
    p.add_argument("--title")
    p.add_argument("--yscale", choices=("auto", "log", "linear"), default="auto")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plot":
            return run_plot(args)
        settings = load_settings(args)
        if args.command == "validate":
            return run_validate(settings, args)
        return run_metric(args.command, settings)
    except RffsoError as exc:
        # engine errors carry the offending parameter set in their message
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())

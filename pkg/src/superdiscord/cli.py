"""Command-line interface.

Exit codes: 0 success, 1 oracle tolerance breach, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys

import numpy as np

from . import correlations as corr
from . import fixtures, magnetics
from .errors import OutOfPhysicalRange, SuperDiscordError
from .fitting import PARAMETERS, FitConfig, SusceptibilityDataset, fit_bleaney_bowers
from .magnetics import DimerModel
from .measurements import PROJECTIVE, check_strength

DEFAULT_X = (0.0, 0.5, 1.0, 2.0, PROJECTIVE)
PROG = "superdiscord"


class UsageError(Exception):
    """Bad command-line or config-file value (exit code 2)."""


# ---------------------------------------------------------------------------
# value parsing


def fmt(value):
    """12 significant digits, locale independent."""
    if value is None:
        return ""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".12g")


def x_label(x):
    return "inf" if math.isinf(x) else format(x, "g")


def parse_x_list(text):
    if text is None or (isinstance(text, str) and not text.strip()):
        return list(DEFAULT_X)
    if isinstance(text, (list, tuple)):
        items = [str(v) for v in text]
    else:
        items = [s.strip() for s in str(text).split(",")]
    out = []
    for item in items:
        if item.lower() in ("inf", "+inf", "infinity"):
            out.append(PROJECTIVE)
            continue
        try:
            x = float(item)
        except ValueError:
            raise UsageError(f"invalid measurement strength {item!r}") from None
        if math.isinf(x) or math.isnan(x):
            raise UsageError(f"invalid measurement strength {item!r}; use the token 'inf'")
        try:
            out.append(check_strength(x))
        except SuperDiscordError as exc:
            raise UsageError(str(exc)) from None
    if not out:
        return list(DEFAULT_X)
    return out


def parse_range(text, what="range", min_steps=2):
    """``min:max:steps`` -> (min, max, steps)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"{what} must look like min:max:steps, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise UsageError(f"{what} must look like min:max:steps, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"{what} bounds must be finite")
    if steps < min_steps:
        raise UsageError(f"{what} needs at least {min_steps} steps, got {steps}")
    if steps > 1 and not hi > lo:
        raise UsageError(f"{what}: max must exceed min")
    return lo, hi, steps


def parse_temperatures(text, log=False):
    lo, hi, steps = parse_range(text, "temperature range")
    if not lo > 0:
        raise UsageError("temperatures must be > 0 K")
    return np.geomspace(lo, hi, steps) if log else np.linspace(lo, hi, steps)


def parse_g(text):
    if isinstance(text, (list, tuple)):
        comps = [float(v) for v in text]
    else:
        try:
            comps = [float(s) for s in str(text).split(",")]
        except ValueError:
            raise UsageError(f"invalid g-factor {text!r}") from None
    if len(comps) == 1:
        g = comps[0]
    elif len(comps) == 3:
        g = tuple(comps)
    else:
        raise UsageError("g must be one value or three comma-separated components")
    magnetics.DimerModel(0.0, g)  # validates positivity
    return g


def parse_free(text):
    names = [s.strip() for s in str(text).split(",") if s.strip()]
    bad = [n for n in names if n not in PARAMETERS]
    if bad or not names:
        raise UsageError(f"free parameters must be a subset of {','.join(PARAMETERS)}")
    return tuple(names)


# ---------------------------------------------------------------------------
# commands


def _dw_columns(xs):
    return [f"Dw_x={x_label(x)}_bits" for x in xs]


def cmd_sweep(args, out):
    model = DimerModel(j_over_kb=float(args.j_over_kb), g_factor=parse_g(args.g))
    temps = parse_temperatures(args.t, args.log)
    xs = parse_x_list(args.x)
    g_values = np.asarray(magnetics.spin_correlation(model, temps))
    mi = corr.mutual_information_closed_form(g_values)
    d = corr.discord_closed_form(g_values)
    dws = [corr.super_discord_closed_form(g_values, x) for x in xs]

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["T_K", "G", "I_bits", "D_bits"] + _dw_columns(xs))
    for i, t in enumerate(temps):
        writer.writerow([fmt(t), fmt(g_values[i]), fmt(mi[i]), fmt(d[i])]
                        + [fmt(dw[i]) for dw in dws])
    return 0


def cmd_from_chi(args, out):
    if not args.csv_path:
        raise UsageError("from-chi needs a CSV path")
    g = parse_g(args.g)
    xs = parse_x_list(args.x)
    data = SusceptibilityDataset.from_csv(args.csv_path)

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["T_K", "chi", "G", "I_bits", "D_bits"] + _dw_columns(xs) + ["error"])
    blanks = [""] * (2 + len(xs))
    for t, chi in zip(data.temperatures, data.chi):
        try:
            gv = magnetics.correlation_from_susceptibility(chi, t, g)
        except OutOfPhysicalRange:
            raw = chi / magnetics.curie_susceptibility(g, t) - 1.0
            writer.writerow([fmt(t), fmt(chi), fmt(raw), *blanks, "OutOfPhysicalRange"])
            continue
        row = [fmt(t), fmt(chi), fmt(gv),
               fmt(corr.mutual_information_closed_form(gv)),
               fmt(corr.discord_closed_form(gv))]
        row += [fmt(corr.super_discord_closed_form(gv, x)) for x in xs]
        writer.writerow(row + [""])
    return 0


def cmd_fit(args, out):
    if not args.csv_path:
        raise UsageError("fit needs a CSV path")
    data = SusceptibilityDataset.from_csv(args.csv_path)
    guess = DimerModel(
        j_over_kb=float(args.j_over_kb),
        g_factor=parse_g(args.g),
        impurity_fraction=float(args.impurity_fraction),
        temperature_independent_chi=float(args.tip),
    )
    try:
        config = FitConfig(
            free_parameters=parse_free(args.free),
            initial_guess=guess,
            n_starts=int(args.starts),
            max_iter=int(args.max_iter),
            weighted=bool(args.weighted),
            seed=int(args.seed),
        )
    except ValueError as exc:
        if isinstance(exc, SuperDiscordError):
            raise
        raise UsageError(str(exc)) from None
    result = fit_bleaney_bowers(data, config)
    m = result.model
    payload = {
        "model": {
            "j_over_kb_K": m.j_over_kb,
            "g": m.g,
            "impurity_fraction": m.impurity_fraction,
            "tip_emu_per_mol": m.temperature_independent_chi,
        },
        "cost": result.cost,
        "converged": result.converged,
        "iterations": result.iterations,
        "residuals": [float(r) for r in result.residuals],
    }
    out.write(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_oracle(args, out):
    lo, hi, steps = parse_range(args.g, "G grid", min_steps=1)
    g_grid = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
    try:
        corr.check_g(g_grid, lower=corr.G_STATE_MIN)
    except SuperDiscordError as exc:
        raise UsageError(str(exc)) from None
    xs = parse_x_list(args.x)
    tol = float(args.tolerance)
    if not tol >= 0:
        raise UsageError("tolerance must be >= 0")

    out.write(f"# oracle: numeric optimizer vs closed forms, {len(g_grid)} G x {len(xs)} x\n")
    worst = 0.0
    for g in g_grid:
        rho = corr.werner_state(g)
        num = corr.quantum_discord_numeric(rho).discord
        ref = corr.discord_closed_form(g)
        dev = abs(num - ref)
        worst = max(worst, dev)
        out.write(f"G={fmt(g)} D numeric={fmt(num)} closed={fmt(ref)} dev={dev:.3e}\n")
        for x in xs:
            num = corr.super_discord_numeric(rho, x).discord
            ref = corr.super_discord_closed_form(g, x)
            dev = abs(num - ref)
            worst = max(worst, dev)
            out.write(f"G={fmt(g)} x={x_label(x)} Dw numeric={fmt(num)} "
                      f"closed={fmt(ref)} dev={dev:.3e}\n")
    ok = worst <= tol
    out.write(f"max_deviation={worst:.3e} tolerance={tol:.3e} {'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def cmd_synth(args, out):
    model = DimerModel(
        j_over_kb=float(args.j_over_kb),
        g_factor=parse_g(args.g),
        impurity_fraction=float(args.impurity_fraction),
        temperature_independent_chi=float(args.tip),
    )
    temps = parse_temperatures(args.t, args.log)
    noise = float(args.noise)
    if noise < 0:
        raise UsageError("noise must be >= 0")
    data = fixtures.synthetic_dataset(model, temps, noise=noise, seed=int(args.seed))
    comment = (f"SYNTHETIC data: j_over_kb_K={model.j_over_kb!r} g={model.g!r} "
               f"noise={noise!r} seed={int(args.seed)}")
    out.write(data.to_csv(comment=comment))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_model_flags(p):
    p.add_argument("--j-over-kb", type=float, default=None,
                   help="exchange constant J/k_B in kelvin (negative = antiferromagnetic)")
    p.add_argument("--g", default="2.0", help="g-factor, or gx,gy,gz for a powder average")


def build_parser():
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Quantum discord and super-quantum discord of Heisenberg spin dimers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="JSON file with defaults (snake_case keys); flags win")
        p.set_defaults(func=func)
        return p

    p = add("sweep", cmd_sweep, "discord and super-discord versus temperature (CSV)")
    _add_model_flags(p)
    p.add_argument("--t", default=None, help="temperatures min:max:steps in kelvin")
    p.add_argument("--log", action="store_true", help="logarithmic temperature spacing")
    p.add_argument("--x", default=None, help="measurement strengths, comma separated; 'inf' = projective")

    p = add("from-chi", cmd_from_chi, "discord from measured susceptibility (CSV)")
    p.add_argument("csv_path", nargs="?", default=None)
    p.add_argument("--g", default="2.0", help="g-factor, or gx,gy,gz")
    p.add_argument("--x", default=None, help="measurement strengths, comma separated")

    p = add("fit", cmd_fit, "fit the Bleaney-Bowers model to a susceptibility CSV (JSON)")
    p.add_argument("csv_path", nargs="?", default=None)
    p.add_argument("--free", default="j_over_kb,g", help=f"subset of {','.join(PARAMETERS)}")
    p.add_argument("--j-over-kb", type=float, default=0.0, help="initial J/k_B in kelvin")
    p.add_argument("--g", default="2.0", help="initial g-factor")
    p.add_argument("--impurity-fraction", type=float, default=0.0)
    p.add_argument("--tip", type=float, default=0.0, help="temperature independent chi, emu/mol")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--weighted", action="store_true", help="weight residuals by 1/chi^2")

    p = add("oracle", cmd_oracle, "check closed forms against the numeric optimizer")
    p.add_argument("--g", default="-0.9:0.3:13", help="G grid min:max:steps")
    p.add_argument("--x", default=None, help="measurement strengths (default 0,0.5,1,2,inf)")
    p.add_argument("--tolerance", type=float, default=1e-8)

    p = add("synth", cmd_synth, "generate a synthetic susceptibility CSV")
    _add_model_flags(p)
    p.add_argument("--impurity-fraction", type=float, default=0.0)
    p.add_argument("--tip", type=float, default=0.0)
    p.add_argument("--t", default="5:300:30", help="temperatures min:max:steps")
    p.add_argument("--log", action="store_true")
    p.add_argument("--noise", type=float, default=0.0, help="relative gaussian noise")
    p.add_argument("--seed", type=int, default=0)
    return parser


_NEGATIVE_VALUE = re.compile(r"^-(\d|\.\d|inf)")


def _attach_negative_values(argv):
    """Turn ``--flag -0.9:0.3:13`` into ``--flag=-0.9:0.3:13``; argparse only
    accepts plain negative numbers as separate option values."""
    out = []
    for tok in argv:
        if (out and _NEGATIVE_VALUE.match(tok) and out[-1].startswith("--")
                and "=" not in out[-1]):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config`` when given."""
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    known = set(vars(args)) - {"func", "command", "config"}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    subparser = _subparser(parser, args.command)
    subparser.set_defaults(**cfg)
    return parser.parse_args(argv)


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)  # pragma: no cover


def _error(message):
    prefix = f"{PROG}: error: "
    if sys.stderr.isatty() and "NO_COLOR" not in os.environ:
        prefix = f"\033[31m{prefix}\033[0m"
    print(prefix + message, file=sys.stderr)


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if args.command in ("sweep", "synth"):
            if args.j_over_kb is None:
                raise UsageError("--j-over-kb is required")
            if args.command == "sweep" and args.t is None:
                raise UsageError("--t min:max:steps is required")
        return args.func(args, out)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except UsageError as exc:
        _error(str(exc))
        return 2
    except SuperDiscordError as exc:
        _error(f"{type(exc).__name__}: {exc}")
        return 2
    except OSError as exc:
        _error(str(exc))
        return 2


def run():
    sys.exit(main())

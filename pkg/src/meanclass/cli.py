"""Command-line front end: ``analyze``, ``generate``, ``verify`` and ``spectrum``."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .errors import EmptyWindow, MeanClassError, ParseError, UnknownName
from .ergodic import bohr_spectrum_scan, ergodic_mean
from .io import dumps, format_csv, plotdata, read_csv
from .membership import ClassifyParams, classify
from .norms import SeminormSchedule, besicovitch, stepanoff, sup_norm, weyl
from .signals import Grid, Signal, sample
from .spectrum import sp_estimate
from .verification import builtin, run_suites, suite_names


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if not b > a:
        raise argparse.ArgumentTypeError("window must satisfy A < B")
    return a, b


def _grid(text: str) -> Grid:
    try:
        t0, dt, n = text.split(":")
        return Grid(float(t0), float(dt), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected T0:DT:N, got {text!r} ({exc})") from None


def _triple(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, st = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from None
    return lo, hi, st


def load_input(spec: str, N: int | None = None, grid: Grid | None = None) -> Signal:
    """A CSV path or a builtin name, optionally sampled onto ``grid``."""
    p = Path(spec)
    if spec.endswith(".csv") or p.is_file():
        s: Signal = read_csv(p)
    else:
        s = builtin(spec, N)
    return sample(s, grid) if grid is not None else s


def fit_params(params: ClassifyParams, domain) -> ClassifyParams:
    """Shrink windows and horizons so every probe stays inside a finite domain."""
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        return params
    margin = 2 * max(params.h_samples) + params.cub_delta + 2 * params.dt
    avail = hi - margin
    a = max(params.window[0], lo)
    b = min(params.window[1], avail)
    if not b > a:
        raise EmptyWindow(f"signal domain [{lo:g}, {hi:g}] too short for window {params.window}")
    tau_hi = min(params.tau_range[1], avail - b)
    tau_hi = math.floor(tau_hi / params.tau_step) * params.tau_step
    base = tuple(x for x in params.base_points if x >= lo) or (a,)
    Ts = tuple(T for T in params.T_values if max(base) + T <= avail)
    return replace(
        params,
        window=(a, b),
        tau_range=(params.tau_range[0], max(tau_hi, params.tau_range[0] + params.tau_step)),
        base_points=base,
        T_values=Ts,
        spectrum_T=min(params.spectrum_T, avail - a),
    )


def analyze(s: Signal, params: ClassifyParams, tags, l_values, label: str = "") -> dict:
    params = fit_params(params, s.domain)
    a, b = params.window
    lo, hi = s.domain
    out: dict = {"input": label, "window": [a, b]}
    norms = [
        {"norm": "sup", "params": {"window": [a, b]}, "value": sup_norm(s, (a, b), params.dt), "series": []},
        {"norm": "stepanoff", "params": {"p": 1, "l": 1.0}, "value": stepanoff(s, 1, 1.0, (a, b), params.dt), "series": []},
    ]
    ls = tuple(l for l in l_values if b + l <= hi)
    if ls:
        norms.append(weyl(s, 1, SeminormSchedule((a, b), ls, params.dt)).to_dict())
    Ts = tuple(T for T in params.T_values if -T >= lo and T <= hi)
    if Ts:
        norms.append(besicovitch(s, 2, Ts, params.dt).to_dict())
    out["norms"] = norms
    out["mean"] = ergodic_mean(s, params.T_values, params.base_points, params.rtol, params.q).to_dict() if params.T_values else None
    spec = bohr_spectrum_scan(s, params.omega_grid, params.spectrum_T, max(params.spectrum_threshold, 0.1), a, params.q)
    out["spectrum"] = spec.to_dict()
    out["verdicts"] = [classify(s, t, params).to_dict() for t in tags]
    return out


def _analysis_text(rep: dict) -> str:
    lines = [f"input: {rep['input']}", f"window: {rep['window']}"]
    for n in rep["norms"]:
        lines.append(f"norm {n['norm']}: {n['value']:.6g}")
    if rep["mean"]:
        m = rep["mean"]
        lines.append(f"mean: {complex(*m['value']):.6g} converged={m['converged']} sup_dev={['%.3g' % d for d in m['sup_dev']]}")
    for e in rep["spectrum"]["entries"]:
        lines.append(f"line: omega={e['omega']:.6g} c={complex(e['re'], e['im']):.6g}")
    for v in rep["verdicts"]:
        lines.append(f"class {v['tag']}: {v['verdict']} (score {v['score']:.4g}, threshold {v['threshold']:g})")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args) -> dict:
    over = {"format": args.format}
    if getattr(args, "window", None):
        over["window"] = list(args.window)
    return cfgmod.load(args.config, over)


def cmd_analyze(args) -> int:
    cfg = _config(args)
    if args.tags:
        cfg["tags"] = [t for t in _split_tags(args.tags)]
    s = load_input(args.input, args.N, args.grid)
    rep = analyze(s, cfgmod.to_params(cfg), cfg["tags"], cfg["l_values"], args.input)
    fmt = cfg["format"]
    if fmt == "json":
        _emit(dumps(rep), args.out)
    elif fmt == "text":
        _emit(_analysis_text(rep), args.out)
    else:
        e = rep["spectrum"]["entries"]
        _emit(plotdata([[x["omega"] for x in e], [x["re"] for x in e], [x["im"] for x in e]]), args.out)
    return 0


def _split_tags(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    out.append(cur)
    return [t.strip() for t in out if t.strip()]


def cmd_generate(args) -> int:
    s = builtin(args.name, args.N)
    g = args.grid or Grid(0.0, 0.01, 1001)
    t = g.times()
    _emit(format_csv(t, s(t)), args.out)
    return 0


def cmd_verify(args) -> int:
    reports = run_suites(args.suite)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        text = dumps({"pass": ok, "suites": [r.to_dict() for r in reports]})
    else:
        text = "\n".join(r.to_text() for r in reports) + f"\n{'ALL PASS' if ok else 'FAILURES'}\n"
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    params = cfgmod.to_params(cfg)
    s = load_input(args.input, args.N, args.grid)
    lo, hi, st = args.omega or (-3.0, 3.0, 0.01)
    grid = {"lo": lo, "hi": hi, "step": st}
    if args.tag:
        if args.window:
            params = replace(params, window=tuple(args.window))
        else:
            params = replace(params, window=(0.0, 2000.0))
        params = fit_params(params, s.domain)
        rep = sp_estimate(s, args.tag, grid, params=params).to_dict()
        rows = [rep["omegas"], [1.0] * len(rep["omegas"])]
    else:
        T = args.T or 1e4
        rep = bohr_spectrum_scan(s, grid, T, args.threshold).to_dict()
        rows = [[e["omega"] for e in rep["entries"]], [e["re"] for e in rep["entries"]], [e["im"] for e in rep["entries"]]]
    fmt = cfg["format"]
    if fmt == "plotdata":
        _emit(plotdata(rows), args.out)
    elif fmt == "text":
        if args.tag:
            body = "".join(f"{w:.6g}\n" for w in rep["omegas"])
        else:
            body = "".join(f"{e['omega']:.6g} {complex(e['re'], e['im']):.6g}\n" for e in rep["entries"])
        _emit(body or "(empty)\n", args.out)
    else:
        _emit(dumps(rep), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON configuration file")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "text", "plotdata"), default=None)
    common.add_argument("--window", type=_pair, help="evaluation window A:B")
    common.add_argument("--grid", type=_grid, help="sampling grid T0:DT:N")
    common.add_argument("--N", type=int, default=None, help="series truncation for builtin sums")

    p = argparse.ArgumentParser(prog="meanclass", description="Mean-class analysis of almost-periodic and ergodic signals.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="norms, mean, spectrum and class verdicts")
    a.add_argument("input", help="CSV path or builtin name")
    a.add_argument("--tags", help="comma-separated class tags, e.g. AP,E,MA(AP,1)")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", parents=[common], help="sample a generator or builtin to CSV")
    g.add_argument("name", help="generator name, sin, cos, or an expression such as 3g1+2gsqrt2")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", help="suite name, C1..C11 alias, or 'all': " + ", ".join(suite_names()))
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", parents=[common], help="Bohr scan, or relative spectrum with --tag")
    s.add_argument("input", help="CSV path or builtin name")
    s.add_argument("--tag", help="class tag for the relative spectrum")
    s.add_argument("--omega", type=_triple, help="frequency grid LO:HI:STEP")
    s.add_argument("--T", type=float, help="Bohr horizon (default 1e4)")
    s.add_argument("--threshold", type=float, default=0.1)
    s.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None and args.command == "verify":
        args.format = "text"
    try:
        return args.func(args)
    except (UnknownName, ParseError, cfgmod.ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MeanClassError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical or domain failure.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import re
import sys

from . import __version__
from .dynamics import FieldConfig, omega_zero, solve_field_for_ratio
from .errors import So3MesError
from .optics import (axis_angle_for, dual_replay_intensity, field_for_phase,
                     map_dynamics_to_optics)
from .trajectory import closure_phase, count_breaks, trace
from .verify import run_all

CSV_COLUMNS = ("t", "alpha_re", "alpha_im", "beta_re", "beta_im",
               "kx", "ky", "kz", "a", "sheet", "break_flag")

_PI_TOKEN = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*/\s*omega\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    """Twelve significant digits, locale independent, no negative zero."""
    s = f"{float(x) + 0.0:.12g}"
    return "0" if s == "-0" else s


def parse_time(text: str, omega: float) -> float:
    m = _PI_TOKEN.match(text)
    if m:
        factor = float(m.group(1)) if m.group(1) else 1.0
        return factor * math.pi / omega
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"cannot parse time {text!r}; use a number or 'pi/omega'") from None
    return value


def _config(args) -> FieldConfig:
    if args.b is None and args.ratio is None:
        raise UsageError("one of --b or --ratio is required")
    if args.b is not None and args.ratio is not None:
        raise UsageError("--b and --ratio are mutually exclusive")
    b = args.b
    if b is None:
        b = solve_field_for_ratio(args.theta, args.omega, args.hbar, args.ratio)
    try:
        return FieldConfig(b, args.theta, args.omega, args.hbar)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_field_flags(p, required_theta=True):
    p.add_argument("--theta", type=float, required=required_theta, help="field tilt angle (rad)")
    p.add_argument("--b", type=float, help="field strength")
    p.add_argument("--ratio", type=float, help="target omega0/omega; solves for B")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _manifest(command, params, steps, outputs) -> dict:
    return {"command": command, "parameters": params, "version": __version__,
            "steps": steps, "outputs": outputs}


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_trace(args) -> int:
    cfg = _config(args)
    t_max = parse_time(args.t_max, cfg.omega)
    if args.steps < 100:
        raise UsageError("--steps must be at least 100")
    if t_max < 0:
        raise UsageError("--t-max must be non-negative")
    traj = trace(cfg, args.mode, t_max, args.steps)
    breaks = count_breaks(traj)
    phase = closure_phase(traj)
    parity_ok = None if phase == "open" else phase == (-1) ** breaks
    flagged = {b.index for b in traj.breaks}

    rows = []
    for i, s in enumerate(traj.samples):
        kx, ky, kz = s.point.axis
        rows.append([fmt(s.t), fmt(s.mes.alpha.real), fmt(s.mes.alpha.imag),
                     fmt(s.mes.beta.real), fmt(s.mes.beta.imag),
                     fmt(kx), fmt(ky), fmt(kz), fmt(s.point.angle),
                     str(s.point.sheet), "1" if i in flagged else "0"])
    phase_text = {1: "+1", -1: "-1"}.get(phase, "open")
    summary = {"breaks": breaks, "closure_phase": phase_text, "parity_ok": parity_ok}
    params = {"theta": args.theta, "b": cfg.b, "ratio": args.ratio, "omega": cfg.omega,
              "hbar": cfg.hbar, "mode": args.mode, "t_max": args.t_max,
              "t_max_value": fmt(t_max), "format": args.format}

    if args.format == "csv":
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            buf.write(",".join(r) + "\n")
        buf.write(f"# breaks={breaks}\n")
        buf.write(f"# closure_phase={phase_text}\n")
        buf.write(f"# parity_ok={'n/a' if parity_ok is None else str(parity_ok).lower()}\n")
        text = buf.getvalue()
        manifest = _manifest("trace", params, {"n_steps": args.steps},
                             {args.out or "-": _sha256(text.encode())})
        _write(args.out, text)
        mtext = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        if args.out and args.out != "-":
            _write(args.out + ".manifest.json", mtext)
        else:
            sys.stderr.write(mtext)
    else:
        samples = [dict(zip(CSV_COLUMNS, r)) for r in rows]
        for s in samples:
            for k in CSV_COLUMNS[:-2]:
                s[k] = float(s[k])
            s["sheet"], s["break_flag"] = int(s["sheet"]), int(s["break_flag"])
        payload = json.dumps({"samples": samples, "summary": summary}, sort_keys=True)
        manifest = _manifest("trace", params, {"n_steps": args.steps},
                             {"samples+summary": _sha256(payload.encode())})
        doc = {"manifest": manifest, "samples": samples, "summary": summary}
        _write(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")

    if args.out and args.out != "-":
        print(f"breaks={breaks} closure_phase={phase_text} "
              f"parity_ok={'n/a' if parity_ok is None else str(parity_ok).lower()}")
    return 0


def cmd_solve_b(args) -> int:
    b = solve_field_for_ratio(args.theta, args.omega, args.hbar, args.ratio)
    ratio = omega_zero(FieldConfig(b, args.theta, args.omega, args.hbar)) / args.omega
    print(f"b={fmt(b)}")
    print(f"omega0_over_omega={fmt(ratio)}")
    return 0


def cmd_verify(args) -> int:
    results = run_all(seed=args.seed, quick=args.quick, corrupt=args.inject_fault)
    width = max(len(r.name) for r in results)
    failed = []
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict}  {r.name:<{width}}  max_error={r.max_error:.3e}  tol={r.tolerance:.1e}")
        if not r.passed:
            failed.append(r.name)
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 2
    print(f"all {len(results)} properties pass")
    return 0


def cmd_optics(args) -> int:
    if args.scan:
        delta = -0.3
        if args.theta is not None and (args.b is not None or args.ratio is not None):
            delta = axis_angle_for(_config(args))
        if args.scan_steps < 2:
            raise UsageError("--scan-steps must be at least 2")
        lines = ["ratio,intensity"]
        for i in range(args.scan_steps):
            r = args.ratio_min + (args.ratio_max - args.ratio_min) * i / (args.scan_steps - 1)
            lines.append(f"{fmt(r)},{fmt(dual_replay_intensity(r, delta))}")
        _write(args.out, "\n".join(lines) + "\n")
        return 0

    if args.theta is None or args.t is None:
        raise UsageError("--theta and --t are required unless --scan is given")
    cfg = _config(args)
    t = parse_time(args.t, cfg.omega)
    if t < 0:
        raise UsageError("--t must be non-negative")
    st = map_dynamics_to_optics(cfg, t)
    print(f"phi1={fmt(st.phi1)}")
    print(f"phi2={fmt(st.phi2)}")
    print(f"delta={fmt(st.delta)}")
    if args.lam is not None or args.kerr_k is not None or args.d is not None:
        lam = 1.0 if args.lam is None else args.lam
        k = 1.0 if args.kerr_k is None else args.kerr_k
        d = 1.0 if args.d is None else args.d
        print(f"e1={fmt(field_for_phase(st.phi1, lam, k, d))}")
        print(f"e2={fmt(field_for_phase(st.phi2, lam, k, d))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="so3mes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", help="trace a trajectory in the SO(3) ball")
    _add_field_flags(p)
    p.add_argument("--mode", choices=("single", "dual"), default="dual")
    p.add_argument("--t-max", default="pi/omega")
    p.add_argument("--steps", type=int, default=4096)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("solve-b", help="field strength for a target omega0/omega")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--ratio", type=float, required=True)
    p.set_defaults(func=cmd_solve_b)

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optics", help="Kerr-stage settings or interferometer scan")
    _add_field_flags(p, required_theta=False)
    p.add_argument("--t", default=None)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--kerr-k", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--scan", action="store_true")
    p.add_argument("--ratio-min", type=float, default=0.0)
    p.add_argument("--ratio-max", type=float, default=3.0)
    p.add_argument("--scan-steps", type=int, default=61)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_optics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"so3mes: error: {exc}", file=sys.stderr)
        return 1
    except So3MesError as exc:
        print(f"so3mes: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

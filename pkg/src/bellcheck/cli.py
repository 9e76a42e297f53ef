"""Command-line interface.

Usage::

    bellcheck check MODEL.toml
    bellcheck chsh --quantum --preset optimal [--simulate N --seed S]
    bellcheck chsh MODEL.toml [--indices 0,1,0,1]
    bellcheck bell --quantum --angles 0,60,120
    bellcheck three-axis --quantum --angles 0,120,240
    bellcheck polytope --n1 2 --n2 2 --inequality chsh
    bellcheck extract MODEL.toml --axis 0
    bellcheck simulate --quantum --angle-pairs "0,45;0,135" --trials 100000

Exit codes: 0 success / all conditions hold, 1 a checked condition fails,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Callable, Sequence

from . import __version__
from .catalog import NAMED, shipped_path
from .inequalities import bell_original, chsh, correlation, three_axis_sum
from .locality import (
    VERIFIED_EQUALITIES,
    InconsistencyError,
    check_active_locality,
    check_deterministic_passive_locality,
    check_no_signalling,
    check_passive_locality,
    extract_deterministic_event,
)
from .model import Axis, HiddenVariableModel, MissingKernelError, SettingPair, joint_distribution
from .modelfile import ModelFileError, load
from .montecarlo import RunSchedule, empirical_chsh, empirical_correlation, sample_runs
from .numeric import EPS_TOL, PreconditionError, jsonable
from .polytope import (
    MAX_AXES,
    SizeError,
    max_bell_original_local,
    max_chsh_local,
    max_three_axis_local,
)
from .quantum import SINGLET, chsh_optimal_axes, singlet_joint

AXIS_INPUT_TOL = 1e-6


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


# ---------------------------------------------------------------- parsing


def _floats(text: str, n: int | None, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise InputError(f"{what}: expected {n} values, got {len(vals)}")
    return vals


def _ints(text: str, n: int, what: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None
    if len(vals) != n:
        raise InputError(f"{what}: expected {n} values, got {len(vals)}")
    return vals


def _axis_vector(text: str) -> Axis:
    v = _floats(text, 3, "axis")
    norm = math.sqrt(sum(x * x for x in v))
    if abs(norm - 1.0) > AXIS_INPUT_TOL:
        raise InputError(f"axis {text!r} has norm {norm:.9g}; unit vectors required")
    return Axis.normalized(v)


def _axes_from_args(args, n: int) -> list[Axis] | None:
    if getattr(args, "axes", None):
        parts = [p for p in args.axes.split(";") if p.strip()]
        if len(parts) != n:
            raise InputError(f"--axes: expected {n} vectors separated by ';', got {len(parts)}")
        return [_axis_vector(p) for p in parts]
    if getattr(args, "angles", None):
        return [Axis.from_angle(a) for a in _floats(args.angles, n, "--angles")]
    return None


def _load_model(args) -> HiddenVariableModel:
    path = args.model
    if path in NAMED and not _exists(path):
        path = shipped_path(path)
    model = load(path).model
    mode = getattr(args, "mode", None)
    return model.to_mode(mode) if mode else model


def _exists(path: str) -> bool:
    from pathlib import Path

    return Path(path).exists()


def _source(args):
    if args.quantum and args.model:
        raise InputError("give either a model file or --quantum, not both")
    if not args.quantum and not args.model:
        raise InputError("a model file or --quantum is required")
    return SINGLET if args.quantum else _load_model(args)


def _lookup(model: HiddenVariableModel, axis: Axis, station: int) -> int:
    k = model.index1(axis) if station == 1 else model.index2(axis)
    if k is None:
        raise InputError(f"axis {axis.direction} is not declared at station {station}")
    return k


def _joint(source, mu: Axis, nu: Axis, key=None):
    if source is SINGLET:
        return singlet_joint(SettingPair(mu, nu))
    return joint_distribution(source, key if key is not None else SettingPair(mu, nu))


# ---------------------------------------------------------------- commands


def cmd_check(args) -> tuple[dict, int]:
    model = _load_model(args)
    tol = args.tolerance
    wanted = args.conditions.split(",") if args.conditions else ["no_signalling", "active", "passive", "deterministic"]
    runners: dict[str, Callable] = {
        "no_signalling": lambda: check_no_signalling(model, tol=tol),
        "active": lambda: check_active_locality(model, tol=tol),
        "passive": lambda: check_passive_locality(model, tol=tol),
        "deterministic": lambda: check_deterministic_passive_locality(model, tol=tol),
    }
    verdicts = []
    for name in wanted:
        if name not in runners:
            raise InputError(f"unknown condition {name!r}; choose from {', '.join(runners)}")
        v = runners[name]()
        entry = {"condition": v.condition, "holds": v.holds}
        if v.witness is not None:
            entry["witness"] = v.witness.as_dict()
        if v.events:
            entry["events"] = [e.as_dict() for e in v.events]
        verdicts.append(entry)
    report = {
        "model": model.name,
        "mode": model.mode,
        "n_lambda": model.n_lambda,
        "verdicts": verdicts,
    }
    return report, 0 if all(v["holds"] for v in verdicts) else 1


def _chsh_settings(args, source):
    """(μ, μ′, ν, ν′) axes plus model keys for the four CHSH settings."""
    axes = _axes_from_args(args, 4)
    if source is SINGLET:
        if axes is None:
            if args.preset not in (None, "optimal"):
                raise InputError(f"unknown preset {args.preset!r}")
            axes = list(chsh_optimal_axes())
        mu, mu2, nu, nu2 = axes
        return axes, [None] * 4
    if axes is not None:
        i, i2 = _lookup(source, axes[0], 1), _lookup(source, axes[1], 1)
        j, j2 = _lookup(source, axes[2], 2), _lookup(source, axes[3], 2)
    elif args.indices:
        i, i2, j, j2 = _ints(args.indices, 4, "--indices")
    else:
        i, i2 = 0, min(1, len(source.axes1) - 1)
        j, j2 = 0, min(1, len(source.axes2) - 1)
    try:
        keys = [source.resolve(k) for k in ((i, j), (i, j2), (i2, j), (i2, j2))]
    except MissingKernelError as exc:
        raise InputError(str(exc)) from None
    axes = [source.axes1[i], source.axes1[i2], source.axes2[j], source.axes2[j2]]
    return axes, keys


def cmd_chsh(args) -> tuple[dict, int]:
    source = _source(args)
    (mu, mu2, nu, nu2), keys = _chsh_settings(args, source)
    pairs = [(mu, nu), (mu, nu2), (mu2, nu), (mu2, nu2)]
    E = [correlation(_joint(source, a, b, k)) for (a, b), k in zip(pairs, keys)]
    rep = chsh(E, args.tolerance)
    report = {
        "source": "quantum" if source is SINGLET else source.name,
        "axes": [list(a.direction) for a in (mu, mu2, nu, nu2)],
        "analytic": rep.as_dict(),
    }
    if args.simulate:
        settings = [SettingPair(a, b) if k is None else k for (a, b), k in zip(pairs, keys)]
        schedule = RunSchedule(tuple((s, args.simulate) for s in settings), args.seed)
        counts = sample_runs(source, schedule)
        emp, se = empirical_chsh(counts)
        report["empirical"] = {**emp.as_dict(), "std_err": se, "trials_per_setting": args.simulate,
                               "seed": args.seed}
    return report, 0


def cmd_bell(args) -> tuple[dict, int]:
    source = _source(args)
    axes = _axes_from_args(args, 3)
    if axes is None:
        if source is SINGLET:
            axes = [Axis.from_angle(a) for a in (0.0, 60.0, 120.0)]
        else:
            raise InputError("bell on a model needs --angles or --axes for (mu, nu, nu')")
    mu, nu, nu2 = axes
    pairs = [(mu, nu), (mu, nu2), (nu, nu2)]
    if source is not SINGLET:
        for a, b in pairs:
            _lookup(source, a, 1), _lookup(source, b, 2)
    E = [correlation(_joint(source, a, b)) for a, b in pairs]
    rep = bell_original(E, args.tolerance)
    return {"source": "quantum" if source is SINGLET else source.name,
            "axes": [list(a.direction) for a in axes], "analytic": rep.as_dict()}, 0


def cmd_three_axis(args) -> tuple[dict, int]:
    source = _source(args)
    axes = _axes_from_args(args, 3)
    if axes is None:
        if source is SINGLET:
            axes = [Axis.from_angle(a) for a in (0.0, 120.0, 240.0)]
        else:
            shared = source.shared_axes()
            if len(shared) < 3:
                raise InputError("model declares fewer than three shared axes; pass --angles")
            axes = shared[:3]
    A, B, C = axes
    pairs = [(A, B), (B, C), (C, A)]
    if source is not SINGLET:
        for a, b in pairs:
            _lookup(source, a, 1), _lookup(source, b, 2)
    rep = three_axis_sum(*(_joint(source, a, b) for a, b in pairs), tol=args.tolerance)
    return {"source": "quantum" if source is SINGLET else source.name,
            "axes": [list(a.direction) for a in axes], "analytic": rep.as_dict()}, 0


def cmd_polytope(args) -> tuple[dict, int]:
    try:
        if args.inequality == "chsh":
            rep = max_chsh_local(args.n1, args.n2)
        elif args.inequality == "three-axis":
            rep = max_three_axis_local()
        else:
            rep = max_bell_original_local()
    except SizeError as exc:
        raise InputError(str(exc)) from None
    return rep.as_dict(), 0 if rep.bound_match else 1


def cmd_extract(args) -> tuple[dict, int]:
    model = _load_model(args)
    try:
        k = int(args.axis)
        if not 0 <= k < len(model.axes1):
            raise InputError(f"--axis {k} out of range for station 1")
        axis = model.axes1[k]
    except ValueError:
        axis = _axis_vector(args.axis)
    report = {"model": model.name, "axis": list(axis.direction)}
    try:
        ev = extract_deterministic_event(model, axis, args.tolerance)
    except PreconditionError as exc:
        report["refused"] = {"condition": exc.condition, "reason": str(exc)}
        return report, 1
    except InconsistencyError as exc:
        report["refused"] = {"condition": "deterministic_passive_locality", "reason": str(exc)}
        return report, 1
    report["A1S"] = sorted(ev.members)
    report["P(sigma1=up)"] = jsonable(ev.p_up)
    report["P(A1S)"] = jsonable(ev.probability)
    report["conditional_up_given_lambda"] = [jsonable(c) for c in ev.conditional]
    report["verified"] = list(VERIFIED_EQUALITIES)
    return report, 0


def cmd_simulate(args) -> tuple[dict, int]:
    source = _source(args)
    settings = []
    if source is SINGLET:
        if not args.angle_pairs:
            raise InputError("--quantum simulation needs --angle-pairs")
        for part in args.angle_pairs.split(";"):
            a, b = _floats(part, 2, "--angle-pairs")
            settings.append(SettingPair(Axis.from_angle(a), Axis.from_angle(b)))
    else:
        text = args.pairs or ";".join(f"{i},{j}" for (i, j) in sorted(source.kernels))
        for part in text.split(";"):
            i, j = _ints(part, 2, "--pairs")
            try:
                settings.append(source.resolve((i, j)))
            except MissingKernelError as exc:
                raise InputError(str(exc)) from None
    schedule = RunSchedule(tuple((s, args.trials) for s in settings), args.seed)
    counts = sample_runs(source, schedule)
    rows = []
    for s, c in zip(settings, counts):
        est = empirical_correlation(c)
        label = list(s) if isinstance(s, tuple) else [list(s.mu.direction), list(s.nu.direction)]
        rows.append({"setting": label, "counts": c.reshape(-1).tolist(), "e_hat": est.e_hat,
                     "std_err": est.std_err, "n": est.n})
    return {"source": "quantum" if source is SINGLET else source.name, "seed": args.seed,
            "trials_per_setting": args.trials, "settings": rows}, 0


COMMANDS = {
    "check": cmd_check,
    "chsh": cmd_chsh,
    "bell": cmd_bell,
    "three-axis": cmd_three_axis,
    "polytope": cmd_polytope,
    "extract": cmd_extract,
    "simulate": cmd_simulate,
}


# ---------------------------------------------------------------- output


def _scalar(x) -> str:
    if isinstance(x, list):
        return "[" + ", ".join(_scalar(y) for y in x) + "]"
    if x is None:
        return "-"
    return str(x)


def _human(report: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines += _human(v, indent + 1)
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{pad}{k}:")
            for x in v:
                sub = _human(x, indent + 2)
                sub[0] = "  " * (indent + 1) + "- " + sub[0].lstrip()
                lines += sub
        elif isinstance(v, list):
            lines.append(f"{pad}{k}: [" + ", ".join(_scalar(x) for x in v) + "]")
        else:
            lines.append(f"{pad}{k}: {_scalar(v)}")
    return lines


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "structured":
        out.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(_human(report)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=("exact", "float"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="bellcheck", description="Locality checks and Bell inequalities for EPR models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--mode", choices=("exact", "float"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=EPS_TOL)
    p.add_argument("--timings", action="store_true", default=False,
                   help="add wall-clock timings (makes output run-dependent)")
    sub = p.add_subparsers(dest="command", required=True)

    def source_args(sp):
        sp.add_argument("model", nargs="?", help="model file, or the name of a shipped model")
        sp.add_argument("--quantum", action="store_true", help="use the spin singlet instead of a model")

    sp = sub.add_parser("check", parents=[common], help="run locality checks on a model")
    sp.add_argument("model")
    sp.add_argument("--conditions", help="comma list of no_signalling,active,passive,deterministic")

    sp = sub.add_parser("chsh", parents=[common], help="evaluate the CHSH expression")
    source_args(sp)
    sp.add_argument("--preset", choices=("optimal",), default=None)
    sp.add_argument("--angles", help="mu,mu',nu,nu' in degrees (xz-plane)")
    sp.add_argument("--axes", help="four unit vectors 'x,y,z;x,y,z;x,y,z;x,y,z'")
    sp.add_argument("--indices", help="declared axis indices i,i',j,j' (models)")
    sp.add_argument("--simulate", type=int, metavar="N", help="also sample N runs per setting")

    sp = sub.add_parser("bell", parents=[common], help="evaluate Bell's original inequality")
    source_args(sp)
    sp.add_argument("--angles", help="mu,nu,nu' in degrees")
    sp.add_argument("--axes", help="three unit vectors separated by ';'")

    sp = sub.add_parser("three-axis", parents=[common], help="evaluate the three-axis up-up sum")
    source_args(sp)
    sp.add_argument("--angles", help="A,B,C in degrees")
    sp.add_argument("--axes", help="three unit vectors separated by ';'")

    sp = sub.add_parser("polytope", parents=[common], help="maximize an inequality over deterministic strategies")
    sp.add_argument("--n1", type=int, default=2)
    sp.add_argument("--n2", type=int, default=2)
    sp.add_argument("--inequality", choices=("chsh", "three-axis", "bell"), default="chsh")

    sp = sub.add_parser("extract", parents=[common], help="extract the deterministic source event")
    sp.add_argument("model")
    sp.add_argument("--axis", default="0", help="station-1 axis index or unit vector x,y,z")

    sp = sub.add_parser("simulate", parents=[common], help="sample runs and estimate correlations")
    source_args(sp)
    sp.add_argument("--pairs", help="model axis-index pairs 'i,j;i,j'")
    sp.add_argument("--angle-pairs", help="quantum settings 'a,b;a,b' in degrees")
    sp.add_argument("--trials", type=int, default=10000)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    t0 = time.perf_counter()
    try:
        if getattr(args, "simulate", None) is not None and args.simulate < 1:
            raise InputError("--simulate needs at least one trial")
        if getattr(args, "trials", 1) < 1:
            raise InputError("--trials needs at least one trial")
        if not 0 <= args.seed < 2**64:
            raise InputError("--seed must be a 64-bit unsigned integer")
        body, code = COMMANDS[args.command](args)
    except (InputError, ModelFileError, MissingKernelError) as exc:
        sys.stderr.write(f"bellcheck: error: {exc}\n")
        return 2
    report = {"command": ["bellcheck", *argv], **body}
    if args.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command line surface.

Five commands: `variances` (closed-form width report), `joint` (sampled
joint density to CSV + JSON), `phase-diagram` (witness classification
sweep), `phasematch` (spectrum table for a model), `validate` (oracle
battery).  Every run writes a manifest next to its outputs recording the
resolved inputs; outputs themselves are byte-deterministic for identical
inputs.  Exit codes: 0 success, 1 validation failure, 2 usage or config
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .entanglement import classify, sweep_phase_diagram, sweep_to_csv
from .errors import GridTooCoarse, NegativeArgument, NonPositiveParameter, ParseError, ZeroMass
from .joint import DEFAULT_COUNT, default_axes, evaluate_grid, widths_from_grid
from .params import load_params
from .phasematch import (
    PhaseMatchModel,
    chi_tilde,
    load_profile,
    variance_q_minus,
    variance_rho_minus,
)
from .pump import variance_q_plus, variance_rho_plus


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _params_doc(p, c) -> dict:
    return {
        "pump": {"w": p.w, "ell_c": p.ell_c, "R": p.R, "k_p": p.k_p},
        "crystal": {"L": c.L, "z0": c.z0, "alpha": c.alpha, "beta": c.beta, "k_p": c.k_p},
    }


def _write_manifest(out: Path, command: str, parameters: dict, outputs: list[str], t0: float):
    doc = {
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "outputs": outputs,
        "duration_s": round(time.time() - t0, 3),
    }
    name = command.replace("-", "_") + "_manifest.json"
    (out / name).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def _model_from_args(args) -> PhaseMatchModel:
    if args.model == "profile":
        if not args.profile:
            raise ParseError("cli", 0, "--model profile requires --profile <csv>")
        return PhaseMatchModel.from_profile(load_profile(args.profile))
    if args.profile:
        raise ParseError("cli", 0, f"--profile only applies to --model profile, not {args.model!r}")
    return PhaseMatchModel(args.model)


def cmd_variances(args) -> int:
    t0 = time.time()
    p, c = load_params(args.config)
    out = _out_dir(args)
    rep = classify(p, c)
    doc = {
        "variance_rho_plus": variance_rho_plus(p),
        "variance_q_plus": variance_q_plus(p),
        "variance_rho_minus": variance_rho_minus(c),
        "variance_q_minus": variance_q_minus(c),
        "product_pm": rep.product_pm,
        "product_mp": rep.product_mp,
        "type1": rep.type1,
        "type2": rep.type2,
        "correlation_position": rep.correlation_position,
        "correlation_momentum": rep.correlation_momentum,
    }
    for key, val in doc.items():
        print(f"{key} = {json.dumps(val)}")
    (out / "variances.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    _write_manifest(out, "variances", _params_doc(p, c), ["variances.json"], t0)
    return 0


def cmd_joint(args) -> int:
    t0 = time.time()
    p, c = load_params(args.config)
    m = _model_from_args(args)
    out = _out_dir(args)
    axes = default_axes(p, c, m, args.space, args.coords, count=args.grid)
    grid = evaluate_grid(p, c, m, args.space, args.coords, axes)
    stem = f"joint_{args.space}_{args.coords}"
    (out / f"{stem}.csv").write_text(grid.to_csv(), encoding="utf-8")
    (out / f"{stem}.json").write_text(grid.to_json() + "\n", encoding="utf-8")
    dp, dm = widths_from_grid(grid)
    print(
        f"{stem}: {args.grid}x{args.grid} cells, mass {grid.mass:.6f}, "
        f"diagonal width {dp:.6g}, anti-diagonal width {dm:.6g}"
    )
    params = _params_doc(p, c)
    params["space"] = args.space
    params["coords"] = args.coords
    params["grid"] = args.grid
    params["model"] = m.kind
    if m.profile is not None:
        params["profile_segments"] = [list(s) for s in m.profile.segments]
    _write_manifest(out, "joint", params, [f"{stem}.csv", f"{stem}.json"], t0)
    return 0


def cmd_phase_diagram(args) -> int:
    t0 = time.time()
    if args.x_max <= 0 or args.y_max <= 0 or args.nx < 1 or args.ny < 1:
        raise ParseError("cli", 0, "phase-diagram needs positive ranges and counts")
    out = _out_dir(args)
    cells = sweep_phase_diagram((0.0, args.x_max), (0.0, args.y_max), args.nx, args.ny, args.alpha)
    (out / "phase_diagram.csv").write_text(sweep_to_csv(cells), encoding="utf-8")
    total = len(cells)
    frac1 = sum(cell.type1 for cell in cells) / total
    frac2 = sum(cell.type2 for cell in cells) / total
    print(
        f"phase diagram {args.nx}x{args.ny}, alpha={args.alpha}: "
        f"type1 area fraction {frac1:.4f}, type2 area fraction {frac2:.4f}, "
        f"neither {1.0 - frac1 - frac2:.4f}"
    )
    params = {
        "x_max": args.x_max,
        "y_max": args.y_max,
        "nx": args.nx,
        "ny": args.ny,
        "alpha": args.alpha,
    }
    _write_manifest(out, "phase-diagram", params, ["phase_diagram.csv"], t0)
    return 0


def cmd_phasematch(args) -> int:
    t0 = time.time()
    p, c = load_params(args.config)
    m = _model_from_args(args)
    out = _out_dir(args)
    if args.dk_max is not None:
        dk_max = args.dk_max
        if dk_max <= 0:
            raise ParseError("cli", 0, "--dk-max must be positive")
    else:
        feature = m.profile.min_segment_length if m.profile is not None else c.L
        dk_max = 16.0 * math.pi / feature
    if args.n < 2:
        raise ParseError("cli", 0, "--n must be at least 2")
    dks = np.linspace(0.0, dk_max, args.n)
    vals = np.asarray(chi_tilde(dks, c, m), dtype=complex)
    lines = ["delta_kappa,re_chi,im_chi,abs_chi_sq"]
    for dk, v in zip(dks, vals):
        lines.append(f"{dk:.9g},{v.real:.9g},{v.imag:.9g},{abs(v) ** 2:.9g}")
    name = f"phasematch_{m.kind}.csv"
    (out / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{name}: {args.n} samples over mismatch [0, {dk_max:.6g}]")
    params = _params_doc(p, c)
    params["model"] = m.kind
    params["dk_max"] = dk_max
    params["n"] = args.n
    if m.profile is not None:
        params["profile_segments"] = [list(s) for s in m.profile.segments]
    _write_manifest(out, "phasematch", params, [name], t0)
    return 0


def cmd_validate(args) -> int:
    from .validation import run_all

    t0 = time.time()
    out = _out_dir(args)
    results = run_all()
    for r in results:
        print(r.line())
    doc = [
        {
            "name": r.name,
            "passed": r.passed,
            "observed": r.observed,
            "tolerance": r.tolerance,
            "detail": r.detail,
        }
        for r in results
    ]
    (out / "validate_report.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    _write_manifest(out, "validate", {}, ["validate_report.json"], t0)
    failures = [r.name for r in results if not r.passed]
    if failures:
        print(f"validation failed at: {failures[0]}", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed in {time.time() - t0:.1f} s")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spdc",
        description="Joint transverse distributions and entanglement witnesses "
        "for photon pairs from a partially coherent pump.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default="spdc-out", help="output directory (default: ./spdc-out)")

    def with_config(sp):
        sp.add_argument("--config", required=True, help="parameter file (key = value lines)")

    def with_model(sp):
        sp.add_argument(
            "--model",
            choices=("sinc", "gauss", "profile"),
            default="sinc",
            help="phase-matching model (default: sinc)",
        )
        sp.add_argument("--profile", help="piecewise nonlinearity CSV for --model profile")

    sp = sub.add_parser("variances", help="closed-form variances, witness products, classification")
    with_config(sp)
    common(sp)
    sp.set_defaults(fn=cmd_variances)

    sp = sub.add_parser("joint", help="sampled joint density grid")
    with_config(sp)
    common(sp)
    sp.add_argument("--space", choices=("momentum", "position"), default="momentum")
    sp.add_argument("--coords", choices=("rotated", "lab"), default="rotated")
    sp.add_argument("--grid", type=int, default=DEFAULT_COUNT, help="cells per axis (default 256)")
    with_model(sp)
    sp.set_defaults(fn=cmd_joint)

    sp = sub.add_parser("phase-diagram", help="witness classification sweep over (x, y)")
    common(sp)
    sp.add_argument("--x-max", type=float, default=3.0, help="w/ell_c upper limit (default 3)")
    sp.add_argument("--y-max", type=float, default=4.0, help="sqrt(L/(k_p w^2)) upper limit (default 4)")
    sp.add_argument("--nx", type=int, default=60)
    sp.add_argument("--ny", type=int, default=80)
    sp.add_argument("--alpha", type=float, default=0.455)
    sp.set_defaults(fn=cmd_phase_diagram)

    sp = sub.add_parser("phasematch", help="spectrum table (mismatch, Re, Im, modulus squared)")
    with_config(sp)
    common(sp)
    with_model(sp)
    sp.add_argument("--dk-max", type=float, default=None, help="mismatch upper limit (default: 16 pi / feature length)")
    sp.add_argument("--n", type=int, default=1024, help="sample count (default 1024)")
    sp.set_defaults(fn=cmd_phasematch)

    sp = sub.add_parser("validate", help="run all oracle cross-checks")
    common(sp)
    sp.set_defaults(fn=cmd_validate)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GridTooCoarse as exc:
        print(f"error: grid too coarse: {exc}", file=sys.stderr)
        return 2
    except (NonPositiveParameter, NegativeArgument, ZeroMass) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

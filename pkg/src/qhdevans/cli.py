"""Command-line entry point: ``qhd-evans {rh,profile,essential,bound,evans}``."""
import argparse
from dataclasses import dataclass, field, fields, replace
import json
from pathlib import Path
import sys
import time

import numpy as np

from .contour import (
    ContourSpec,
    cauchy_check,
    evaluate_contour,
    kato_extend,
    make_contour,
    small_contour_scan,
    winding_number,
    write_contour_csv,
    write_winding_json,
)
from .errors import QHDError
from .essential import essential_stability_check, write_curve_csv
from .evans import evans_eval
from .hfbound import certified_radius, write_bound_json
from .model import (
    EndState,
    LaxFamily,
    ModelParams,
    admits_profile,
    make_shock,
    reference_shock,
    solve_rankine_hugoniot,
)
from .profile import (
    coefficient_fields,
    compute_profile,
    first_integral_residuals,
    interior_extrema,
    write_profile_csv,
)

SCALES = {
    "desk": {"semicircle": 4000, "annulus": 100_000, "annulus_outer": 1e3,
             "semicircle-open": 201},
    "paper": {"semicircle": 40_000, "annulus": 1_000_000, "annulus_outer": 1.5e4,
              "semicircle-open": 2001},
}
ENDPOINT_TOL = 1e-6


@dataclass
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    P_plus: float = 0.6
    P_minus: float = 0.8
    L1: float = 40.0
    dy: float = 0.1
    y0: float = 10.0
    contour: dict = field(default_factory=dict)
    essential: dict = field(default_factory=dict)
    output_dir: str = "."
    scale: str = "desk"


def load_config(path=None):
    """``RunConfig`` from a JSON file; every key is optional."""
    data = {}
    if path:
        with open(path) as fh:
            data = json.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    params = ModelParams(**data.pop("params", {}))
    return RunConfig(params=params, **data)


def contour_spec(cfg: RunConfig, kind=None, radii=None, n_points=None):
    scale = SCALES[cfg.scale]
    opts = dict(cfg.contour)
    kind = kind or opts.pop("kind", "semicircle")
    opts.pop("kind", None)
    if radii is None:
        radii = opts.pop("radii", None)
    else:
        opts.pop("radii", None)
    if radii is None:
        radii = {"semicircle": (10.0,), "semicircle-open": (1e-6,),
                 "annulus": (5.0, scale["annulus_outer"])}[kind]
    n = n_points or opts.pop("n_points", None) or scale[kind]
    opts.pop("n_points", None)
    return ContourSpec(kind=kind, radii=tuple(float(r) for r in radii), n_points=int(n), **opts)


def _shock(cfg):
    return reference_shock(cfg.P_plus, cfg.P_minus, cfg.params)


def _out(cfg, name):
    d = Path(cfg.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def cmd_rh(cfg, args):
    p = cfg.params
    R_plus, R_minus = cfg.P_plus**2, cfg.P_minus**2
    branches = solve_rankine_hugoniot(R_plus, R_minus, p)
    found = False
    for U_plus, U_minus in branches:
        shock = make_shock(EndState(R_minus, U_minus), EndState(R_plus, U_plus), p.s, p.gamma)
        fam = {LaxFamily.LAX1: "Lax 1-shock", LaxFamily.LAX2: "Lax 2-shock",
               LaxFamily.NONE: "not Lax-admissible"}[shock.lax_family]
        ok = admits_profile(shock)
        found |= ok
        print(f"U+ = {U_plus!r}  U- = {U_minus!r}  {fam}, "
              f"left state {shock.sonicity[0].value}, right state {shock.sonicity[1].value}"
              + ("" if ok else "  (no profile)"))
    if not found:
        print("no admissible branch", file=sys.stderr)
        return 1
    return 0


def cmd_profile(cfg, args):
    shock = _shock(cfg)
    wave = compute_profile(shock, cfg.params, L1=cfg.L1, dy=cfg.dy)
    res = first_integral_residuals(wave, cfg.params)
    extrema = interior_extrema(wave.R)
    summary = {
        "rows": int(wave.y.size),
        "non_monotone": bool(extrema.size > 0),
        "interior_extrema": int(extrema.size),
        "mass_residual": res["mass"],
        "bernoulli_residual": res["bernoulli"],
        "endpoint_residual": res["endpoint"],
        "converged": res["endpoint"] < ENDPOINT_TOL,
    }
    if not summary["converged"]:
        print(f"warning: endpoint residual {res['endpoint']:.3g} exceeds {ENDPOINT_TOL:g}; "
              "profile not converged, increase L1", file=sys.stderr)
    write_profile_csv(wave, _out(cfg, "profile.csv"))
    with open(_out(cfg, "profile_summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
    print(json.dumps(summary, indent=2))
    return 0


def cmd_essential(cfg, args):
    opts = cfg.essential
    xi = np.linspace(opts.get("xi_min", -20.0), opts.get("xi_max", 20.0), opts.get("n_xi", 401))
    if "states" in opts:
        states = {f"state{i}": EndState(R, U) for i, (R, U) in enumerate(opts["states"])}
    else:
        shock = _shock(cfg)
        states = {"left": shock.left, "right": shock.right}
    ok = True
    for name, state in states.items():
        rep = essential_stability_check(state, cfg.params, xi)
        write_curve_csv(rep, _out(cfg, f"essential_{name}.csv"))
        ok &= rep["all_agree"]
        print(f"{name}: R={state.R!r} U={state.U!r} max Re = {rep['max_real_part']:.3e}, "
              f"criteria agree: {rep['all_agree']}")
    return 0 if ok else 1


def cmd_bound(cfg, args):
    shock = _shock(cfg)
    wave = compute_profile(shock, cfg.params, L1=cfg.L1, dy=cfg.dy)
    report = certified_radius(wave, coefficient_fields(wave, cfg.params), cfg.params,
                              y0=cfg.y0, dy=cfg.dy)
    write_bound_json(report, _out(cfg, "bound.json"))
    print(report.to_json())
    return 0


def cmd_evans(cfg, args):
    stage = "profile"
    try:
        shock = _shock(cfg)
        wave = compute_profile(shock, cfg.params, L1=cfg.L1, dy=cfg.dy)
        stage = "contour"
        radii = args.radii or ([args.radius] if args.radius is not None else None)
        spec = contour_spec(cfg, args.contour, radii, args.points)
        name = f"{spec.kind}_{'_'.join(f'{r:g}' for r in spec.radii)}"
        t = time.perf_counter()
        if spec.kind == "semicircle-open":
            stage = "evans"
            scan = small_contour_scan(wave, shock, cfg.params, radius=spec.radii[0],
                                      n_points=spec.n_points)
            ev = scan["evaluation"]
            report = {k: v for k, v in scan.items() if k != "evaluation"}
            report["mean"] = [report["mean"].real, report["mean"].imag]
            with open(_out(cfg, f"{name}_report.json"), "w") as fh:
                json.dump(report, fh, indent=2)
            print(json.dumps(report, indent=2))
        else:
            stage = "kato"
            contour = make_contour(spec)
            stage = "evans"
            ev = evaluate_contour(contour, wave, shock, cfg.params)
            stage = "winding"
            res = winding_number(ev.E, closed=True)
            write_winding_json(res, ev.lam.size, name, _out(cfg, f"{name}_winding.json"))
            print(f"winding number {res.winding} (max phase step {res.max_phase_step:.3g}, "
                  f"{ev.lam.size} points, {time.perf_counter() - t:.1f} s)")
            if args.cauchy is not None:
                stage = "cauchy"
                a = complex(*args.cauchy)
                rm, mm = kato_extend(ev.kato_minus, a, shock, cfg.params)
                rp, mp = kato_extend(ev.kato_plus, a, shock, cfg.params)
                direct = evans_eval(a, wave, shock, cfg.params, rm, rp,
                                    mu_minus=mm, mu_plus=mp)
                E_i, E_d, rel = cauchy_check(ev.lam, ev.E, a, direct)
                print(f"Cauchy check at a={a}: interpolated {E_i}, direct {E_d}, "
                      f"relative error {rel:.3e}")
        write_contour_csv(ev.lam, ev.E, _out(cfg, f"{name}.csv"))
    except QHDError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return 1
    return 0


COMMANDS = {"rh": cmd_rh, "profile": cmd_profile, "essential": cmd_essential,
            "bound": cmd_bound, "evans": cmd_evans}


def build_parser():
    parser = argparse.ArgumentParser(prog="qhd-evans", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--scale", choices=sorted(SCALES), default=None)
        p.add_argument("--out", help="output directory")
        if name == "evans":
            p.add_argument("--contour", choices=["semicircle", "semicircle-open", "annulus"])
            p.add_argument("--radius", type=float)
            p.add_argument("--radii", type=float, nargs="+")
            p.add_argument("--points", type=int)
            p.add_argument("--cauchy", type=float, nargs=2, metavar=("RE", "IM"))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError, TypeError) as exc:
        parser.error(f"bad config: {exc}")
    if args.scale:
        cfg = replace(cfg, scale=args.scale)
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    if cfg.P_plus == cfg.P_minus:
        parser.error("P_plus == P_minus: equal densities give no shock")
    try:
        return COMMANDS[args.command](cfg, args)
    except QHDError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

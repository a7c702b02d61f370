"""Command line front end: sweeps, figure recipes, validation, CSV/JSON output.

Subcommands: dispersion | weights | spectrum | validate | sweep.
Exit codes: 0 success, 1 validation failure, 2 usage error.

Every output file starts with (csv) or embeds (json) a run manifest: the
command, the fully resolved configuration, grid specs, output paths, tool
version, and a timestamp.  Numbers are written with 17 significant digits so
CSV bodies round-trip bit exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .core import COULOMB, HBAR_C, HBAR_EVS, ConfigError, ModelParams, load_config, serialize_config
from .excitons import exciton_damping, exciton_energy, single_atom_damping
from .fiber_polaritons import photon_energy, polariton_branches
from .lattice_sums import SumMethod, inter_dynamical_matrix, s_function
from .oracle import compare_dispersion
from .spectra import spectrum_sweep

GOLDEN_GAMMA_A = 2.5e-9       # eV, free-atom width of the reference parameter set
GOLDEN_GAMMA_EX_S = 2.32e-8   # eV, symmetric exciton width at k = 1e-6, theta = 90 deg
GOLDEN_TOL = 0.01
AGREEMENT_K_GRID = (1e-4, 5e-4, 1e-3)  # 1/Angstrom
AGREEMENT_TOL = 1e-8
ORACLE_TOL = 1e-10


def _fmt(value) -> str:
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".17g")


def _manifest(command: str, params: ModelParams, grid: dict, outputs: list[str]) -> dict:
    return {
        "command": command,
        "config": serialize_config(params),
        "grid": grid,
        "outputs": outputs,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _write_table(path: Path, columns: list[str], rows: list[tuple], manifest: dict,
                 fmt: str) -> None:
    if fmt == "csv":
        lines = ["# " + json.dumps(manifest, sort_keys=True), ",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        path.write_text("\n".join(lines) + "\n")
    else:
        doc = {"manifest": manifest, "columns": columns,
               "rows": [[float(v) for v in row] for row in rows]}
        path.write_text(json.dumps(doc, indent=1) + "\n")


_PLOT_RECIPE = """\
# Generic plotting recipe for fiberpol CSV output.
# Usage: python plot_recipe.py FILE.csv X_COLUMN Y_COLUMN [Y_COLUMN ...]
import csv, json, sys
import matplotlib.pyplot as plt

path, xcol, *ycols = sys.argv[1:]
with open(path) as fh:
    manifest = json.loads(fh.readline().lstrip("# "))
    reader = csv.DictReader(fh)
    rows = list(reader)
x = [float(r[xcol]) for r in rows]
for ycol in ycols:
    plt.plot(x, [float(r[ycol]) for r in rows], label=ycol)
plt.xlabel(xcol)
plt.legend()
plt.title(manifest["command"])
plt.savefig(path.replace(".csv", ".png"), dpi=150)
print("wrote", path.replace(".csv", ".png"))
"""


def _emit_recipe(out_dir: Path) -> None:
    recipe = out_dir / "plot_recipe.py"
    if not recipe.exists():
        recipe.write_text(_PLOT_RECIPE)


def _map_grid(worker, values, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, values))
    return [worker(v) for v in values]


def _parse_method(name: str) -> SumMethod:
    return SumMethod(name)


def cmd_dispersion(args, params: ModelParams) -> int:
    if not args.k_max > args.k_min or args.k_min < 0:
        raise ConfigError("dispersion requires 0 <= k_min < k_max")
    if args.n_points < 1:
        raise ConfigError("dispersion requires n_points >= 1")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = _parse_method(args.method)
    if args.n_points == 1:
        ks = [args.k_min]
    else:
        step = (args.k_max - args.k_min) / (args.n_points - 1)
        ks = [args.k_min + i * step for i in range(args.n_points)]
    written = []
    for theta_deg in args.theta:
        theta = math.radians(theta_deg)

        def row(k, _theta=theta):
            pt = polariton_branches(k, _theta, params, method)
            e_ph = photon_energy(k, params.fiber)
            e_s = exciton_energy(k, _theta, "symmetric", params, method).energy
            e_a = exciton_energy(k, _theta, "antisymmetric", params, method).energy
            base = [k, e_ph, e_s, e_a, pt.omega_plus, pt.omega_minus]
            if args.figure_parity:
                ea = params.atom_energy
                base += [pt.omega_plus - ea, pt.omega_minus - ea,
                         pt.omega_plus / HBAR_EVS, pt.omega_minus / HBAR_EVS]
            return tuple(base)

        columns = ["k", "E_ph", "E_ex_s", "E_ex_a", "E_pol_plus", "E_pol_minus"]
        if args.figure_parity:
            columns += ["E_pol_plus_rel", "E_pol_minus_rel",
                        "omega_pol_plus_rad_s", "omega_pol_minus_rad_s"]
        rows = _map_grid(row, ks, args.threads)
        name = f"dispersion_theta{theta_deg:g}.{args.format}"
        path = out_dir / name
        grid = {"k_min": args.k_min, "k_max": args.k_max, "n_points": args.n_points,
                "theta_deg": theta_deg, "method": method.value}
        _write_table(path, columns, rows, _manifest("dispersion", params, grid, [name]), args.format)
        written.append(path)
    _emit_recipe(out_dir)
    for path in written:
        print(path)
    return 0


def cmd_weights(args, params: ModelParams) -> int:
    if not args.k_max > args.k_min or args.k_min < 0:
        raise ConfigError("weights requires 0 <= k_min < k_max")
    if args.n_points < 2:
        raise ConfigError("weights requires n_points >= 2")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = _parse_method(args.method)
    theta = math.radians(args.theta[0])
    step = (args.k_max - args.k_min) / (args.n_points - 1)
    ks = [args.k_min + i * step for i in range(args.n_points)]

    def row(k):
        pt = polariton_branches(k, theta, params, method)
        return (k, pt.X2_minus, pt.Y2_minus, pt.X2_plus, pt.Y2_plus)

    rows = _map_grid(row, ks, args.threads)
    name = f"weights_theta{args.theta[0]:g}.{args.format}"
    path = out_dir / name
    grid = {"k_min": args.k_min, "k_max": args.k_max, "n_points": args.n_points,
            "theta_deg": args.theta[0], "method": method.value}
    _write_table(path, ["k", "X2_minus", "Y2_minus", "X2_plus", "Y2_plus"], rows,
                 _manifest("weights", params, grid, [name]), args.format)
    _emit_recipe(out_dir)
    print(path)
    return 0


# Transmission figure recipes: (k in 1/Angstrom, hbar_gamma in eV, window rule).
FIGURE_PRESETS = {
    4: (1e-6, 1e-6, "both"),
    5: (1e-6, 1e-4, "band"),
    6: (1e-6, 1e-4, "dip"),
    7: (1e-5, 1e-6, "both"),
    8: (5e-5, 1e-6, "wide"),
    9: (5e-5, 1e-6, "lower"),
}


def _preset_window(rule: str, point, gamma: float) -> tuple[float, float]:
    center = 0.5 * (point.omega_plus + point.omega_minus)
    gap = point.omega_plus - point.omega_minus
    if rule == "both":
        span = max(4.0 * gap, 40.0 * gamma)
    elif rule == "band":
        span = 10.0 * gamma
    elif rule == "dip":
        center = center - point.delta  # the dip sits at the symmetric exciton energy
        span = 20.0 * (point.gamma_plus + point.gamma_minus)
    elif rule == "wide":
        span = 3.0 * gap
    elif rule == "lower":
        center = point.omega_minus
        span = 60.0 * max(point.gamma_minus, gamma)
    else:
        raise ValueError(rule)
    return center - 0.5 * span, center + 0.5 * span


def cmd_spectrum(args, params: ModelParams) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = _parse_method(args.method)
    theta = math.radians(args.theta[0])
    k = args.k
    gamma = args.hbar_gamma
    if args.figure is not None:
        if args.figure not in FIGURE_PRESETS:
            raise ConfigError(f"--figure must be one of {sorted(FIGURE_PRESETS)}")
        k, gamma, rule = FIGURE_PRESETS[args.figure]
    if k is None or gamma is None:
        raise ConfigError("spectrum requires --k and --hbar-gamma (or --figure)")
    if gamma <= 0:
        raise ConfigError("spectrum requires hbar_gamma > 0")
    run_params = _with_edge_coupling(params, gamma)
    point = polariton_branches(k, theta, run_params, method)
    if args.omega_span is not None and not args.omega_span > 0:
        raise ConfigError("spectrum requires omega_span > 0")
    if args.omega_center is not None and args.omega_span is not None:
        lo = args.omega_center - 0.5 * args.omega_span
        hi = args.omega_center + 0.5 * args.omega_span
    elif args.figure is not None:
        lo, hi = _preset_window(rule, point, gamma)
    else:
        center = 0.5 * (point.omega_plus + point.omega_minus)
        span = max(4.0 * (point.omega_plus - point.omega_minus), 40.0 * gamma)
        lo, hi = center - 0.5 * span, center + 0.5 * span
    table = spectrum_sweep(k, theta, run_params, (lo, hi), args.n_points, method)
    tag = f"fig{args.figure}" if args.figure is not None else f"k{k:g}"
    name = f"spectrum_{tag}.{args.format}"
    path = out_dir / name
    rows = [(pt.omega, pt.R, pt.T, pt.A) for pt in table.rows]
    grid = {"k": k, "hbar_gamma": gamma, "omega_low": lo, "omega_high": hi,
            "n_points": args.n_points, "theta_deg": args.theta[0], "method": method.value}
    manifest = _manifest("spectrum", run_params, grid, [name])
    _write_table(path, ["omega", "R", "T", "A"], rows, manifest, args.format)
    peaks_doc = {
        "manifest": manifest,
        "peaks": [{"branch": p.branch, "omega_peak": p.omega_peak,
                   "T_peak": p.T_peak, "fwhm": p.fwhm} for p in table.peaks],
    }
    peaks_path = out_dir / f"spectrum_{tag}_peaks.json"
    peaks_path.write_text(json.dumps(peaks_doc, indent=1) + "\n")
    _emit_recipe(out_dir)
    print(path)
    print(peaks_path)
    return 0


def _with_edge_coupling(params: ModelParams, gamma: float) -> ModelParams:
    if gamma == params.edge_coupling:
        return params
    cfg = serialize_config(params)
    cfg["hbar_gamma_eV"] = gamma
    return load_config(cfg)


def cmd_sweep(args, params: ModelParams) -> int:
    if not args.k_max > args.k_min or args.k_min < 0:
        raise ConfigError("sweep requires 0 <= k_min < k_max")
    if args.n_points < 2:
        raise ConfigError("sweep requires n_points >= 2")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = _parse_method(args.method)
    step = (args.k_max - args.k_min) / (args.n_points - 1)
    grid_points = [(args.k_min + i * step, theta_deg)
                   for theta_deg in args.theta
                   for i in range(args.n_points)]

    def row(point):
        k, theta_deg = point
        theta = math.radians(theta_deg)
        pt = polariton_branches(k, theta, params, method)
        e_s = exciton_energy(k, theta, "symmetric", params, method)
        e_a = exciton_energy(k, theta, "antisymmetric", params, method)
        return (k, theta_deg, photon_energy(k, params.fiber), e_s.energy,
                e_a.energy, e_s.damping, pt.omega_plus, pt.omega_minus,
                pt.gamma_plus, pt.gamma_minus)

    rows = _map_grid(row, grid_points, args.threads)
    columns = ["k", "theta_deg", "E_ph", "E_ex_s", "E_ex_a", "gamma_ex_s",
               "E_pol_plus", "E_pol_minus", "gamma_pol_plus", "gamma_pol_minus"]
    name = f"sweep.{args.format}"
    path = out_dir / name
    grid = {"k_min": args.k_min, "k_max": args.k_max, "n_points": args.n_points,
            "theta_deg": list(args.theta), "method": method.value}
    _write_table(path, columns, rows, _manifest("sweep", params, grid, [name]), args.format)
    print(path)
    return 0


def run_validation(params: ModelParams, n_list, hbar_c: float | None = None) -> list[dict]:
    """Golden numbers, method cross-checks, and the finite-lattice oracle.

    ``hbar_c`` is a test hook: when given, the golden-number formulas are
    evaluated with that constant instead of the library value, so a corrupted
    unit system fails the suite.
    """
    checks = []

    def record(name, measured, expected, tol, relative=True):
        err = abs(measured - expected) / abs(expected) if relative else abs(measured - expected)
        checks.append({"name": name, "ok": bool(err <= tol), "measured": measured,
                       "expected": expected, "tolerance": tol})

    if hbar_c is None:
        gamma_a = single_atom_damping(params)
        gamma_ex = exciton_damping(1e-6, math.pi / 2, params, "symmetric")
    else:
        mu = params.dipole.mu
        e_atom = params.atom_energy
        gamma_a = (4.0 / 3.0) * COULOMB * mu * mu * e_atom**3 / hbar_c**3
        k = 1e-6
        bracket = 1.0 + (hbar_c * k / e_atom) ** 2
        gamma_ex = 2.0 * math.pi * COULOMB * mu * mu * e_atom**2 \
            / (params.geometry.a * hbar_c**2) * bracket
    record("golden_gamma_A", gamma_a, GOLDEN_GAMMA_A, GOLDEN_TOL)
    record("golden_gamma_ex_s", gamma_ex, GOLDEN_GAMMA_EX_S, GOLDEN_TOL)

    for k in AGREEMENT_K_GRID:
        s_direct = s_function(k, params.geometry, SumMethod.DIRECT, params.numerics)
        s_bessel = s_function(k, params.geometry, SumMethod.BESSEL_SERIES, params.numerics)
        record(f"s_agreement_k{k:g}", s_bessel.value, s_direct.value, AGREEMENT_TOL)
        jp_direct = inter_dynamical_matrix(k, params, SumMethod.DIRECT)
        jp_bessel = inter_dynamical_matrix(k, params, SumMethod.BESSEL_SERIES)
        record(f"jprime_agreement_k{k:g}", jp_bessel.value, jp_direct.value, AGREEMENT_TOL)

    for n in n_list:
        report = compare_dispersion(params, n)
        checks.append({"name": f"oracle_N{n}", "ok": bool(report.all_matched),
                       "measured": report.max_error, "expected": 0.0,
                       "tolerance": ORACLE_TOL})
    return checks


def cmd_validate(args, params: ModelParams) -> int:
    for n in args.n_list:
        if n < 4:
            raise ConfigError("validate requires every N >= 4")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    checks = run_validation(params, args.n_list, hbar_c=args.hbar_c_override)
    for check in checks:
        status = "PASS" if check["ok"] else "FAIL"
        print(f"{status} {check['name']}: measured={check['measured']:.6e} "
              f"expected={check['expected']:.6e} tol={check['tolerance']:g}")
    report_path = out_dir / "validate_report.json"
    manifest = _manifest("validate", params, {"n_list": list(args.n_list)},
                         ["validate_report.json"])
    report_path.write_text(json.dumps({"manifest": manifest, "checks": checks}, indent=1) + "\n")
    print(report_path)
    return 0 if all(c["ok"] for c in checks) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberpol",
        description="Excitons and fiber polaritons of two atom chains coupled "
                    "to a nanofiber mode")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--method", default=SumMethod.BESSEL_SERIES.value,
                        choices=[m.value for m in SumMethod])
    common.add_argument("--theta", type=float, nargs="+", default=[90.0],
                        help="dipole angle(s) in degrees")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", parents=[common], help="band structure vs k")
    p.add_argument("--k-min", type=float, default=0.0)
    p.add_argument("--k-max", type=float, default=1e-3)
    p.add_argument("--n-points", type=int, default=400)
    p.add_argument("--figure-parity", action="store_true",
                   help="add E - E_A and rad/s columns")
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("weights", parents=[common], help="Hopfield weights vs k")
    p.add_argument("--k-min", type=float, default=0.0)
    p.add_argument("--k-max", type=float, default=1e-4)
    p.add_argument("--n-points", type=int, default=400)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("spectrum", parents=[common], help="R/T/A vs probe energy")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--hbar-gamma", type=float, default=None, help="edge coupling, eV")
    p.add_argument("--omega-center", type=float, default=None)
    p.add_argument("--omega-span", type=float, default=None)
    p.add_argument("--n-points", type=int, default=4001)
    p.add_argument("--figure", type=int, default=None,
                   help="preset 4..9 reproducing the reference transmission plots")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("validate", parents=[common],
                       help="oracle, method agreement, and golden numbers")
    p.add_argument("--n-list", type=int, nargs="+", default=[32])
    p.add_argument("--hbar-c-override", type=float, default=None,
                   help="test hook: evaluate golden formulas with this hbar*c")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", parents=[common], help="(k, theta) grid of all bands")
    p.add_argument("--k-min", type=float, default=0.0)
    p.add_argument("--k-max", type=float, default=1e-3)
    p.add_argument("--n-points", type=int, default=100)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = load_config(args.config if args.config else {})
        return args.func(args, params)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

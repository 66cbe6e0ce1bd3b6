"""Command-line interface: ``nanodeco {rate,sweep,budget,oracle,materials}``.

All inputs and outputs are plain SI (K, m, kg, s, Hz). Tables print six
significant digits; ``--json`` prints one document with full precision.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import modesum, rates
from .errors import DecoError, NumericalFailure
from .materials import ENV_VAR, Material, default_db
from .rates import CoefficientMode, SphereConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SWEEP_UNITS = {"T": "K", "a": "m", "dx": "m"}


class UsageError(DecoError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.variable not in SWEEP_UNITS:
            raise UsageError(f"sweep variable must be one of {sorted(SWEEP_UNITS)}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise UsageError("sweep needs finite start < stop")
        if self.points < 2:
            raise UsageError("sweep needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise UsageError("scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise UsageError("log scale requires start > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


def run_sweep(spec: SweepSpec, base: SphereConfig, mat: Material, mode: CoefficientMode) -> list[dict]:
    """Both rates at every sweep point, in sweep order."""
    rows = []
    for v in spec.values():
        v = float(v)
        if spec.variable == "T":
            cfg = SphereConfig(base.radius, base.dx, v)
        elif spec.variable == "a":
            cfg = SphereConfig(v, base.dx, base.T)
        else:
            cfg = SphereConfig(base.radius, v, base.T)
        gb = rates.gamma_magnetic(cfg, mat, mode).gamma.value
        ge = rates.gamma_electric(cfg, mat).gamma.value
        rows.append({spec.variable: v, "gamma_magnetic": gb, "gamma_electric": ge})
    return rows


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise NumericalFailure("log-log slope needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "PASS" if x else "FAIL"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _table(rows: list[tuple], out) -> None:
    cells = [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _mode_notice(args, err) -> CoefficientMode:
    if args.mode is None:
        err.write(
            "note: magnetic coefficient mode 'rederived' (K = Γ(9)ζ(8) = "
            f"{rates.magnetic_coefficient(CoefficientMode.REDERIVED):.6g}); "
            f"--mode paper uses the published Γ(8)ζ(8) = {rates.magnetic_coefficient(CoefficientMode.PAPER):.6g}\n"
        )
        return CoefficientMode.REDERIVED
    return CoefficientMode(args.mode)


def _material(args) -> Material:
    return default_db(args.materials_file).get(args.material)


def _config(args, mat: Material, need_T: bool = True) -> SphereConfig:
    T = getattr(args, "T", None)
    if need_T and T is None:
        raise UsageError("--T is required")
    if args.radius is not None:
        return SphereConfig(args.radius, args.dx, T)
    density = args.density if args.density is not None else mat.density
    if density is None:
        raise UsageError(f"material {mat.name!r} has no density; pass --density or --radius")
    return SphereConfig.from_mass(args.mass, args.dx, T, density)


def _quantity(x) -> dict:
    return {"value": x.value, "unit": str(x.dim)}


def cmd_rate(args, out, err) -> int:
    mat = _material(args)
    cfg = _config(args, mat)
    channels = ["magnetic", "electric"] if args.channel == "both" else [args.channel]
    mode = _mode_notice(args, err) if "magnetic" in channels else None
    results = [rates.gamma(cfg, mat, ch, mode) for ch in channels]
    validity = rates.long_wavelength_check(cfg) if cfg.T > 0 else None
    if args.json:
        doc = {
            "material": mat.name,
            "inputs": {
                "radius": {"value": cfg.radius, "unit": "m"},
                "dx": {"value": cfg.dx, "unit": "m"},
                "T": {"value": cfg.T, "unit": "K"},
            },
            "results": [r.as_dict() for r in results],
            "validity": validity.as_dict() if validity else None,
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
        return EXIT_OK
    rows = [("quantity", "channel", "value", "unit")]
    for r in results:
        ch = r.channel.value
        rows += [
            ("gamma", ch, r.gamma.value, "s^-1"),
            ("Lambda", ch, r.Lambda.value, str(r.Lambda.dim)),
            ("dp2_per_dt", ch, r.dp2_per_dt.value, str(r.dp2_per_dt.dim)),
            ("alpha", ch, r.alpha.value, str(r.alpha.dim)),
        ]
    out.write(f"material {mat.name}  radius {cfg.radius:.6g} m  dx {cfg.dx:.6g} m  T {cfg.T:.6g} K\n")
    _table(rows, out)
    if validity:
        out.write(
            f"long-wavelength check: lambda_th = {validity.wavelength.value:.6g} m, "
            f"lambda_th/a = {validity.ratio_radius:.6g}, lambda_th/dx = {validity.ratio_dx:.6g} "
            f"-> {'PASS' if validity.passed else 'FAIL'}\n"
        )
    else:
        out.write("long-wavelength check: n/a at T = 0\n")
    return EXIT_OK


def cmd_sweep(args, out, err) -> int:
    spec = SweepSpec(args.var, args.start, args.stop, args.points, args.scale)
    mat = _material(args)
    need_T = spec.variable != "T"
    if spec.variable == "a":
        if args.radius is None and args.mass is None:
            args.radius = spec.start
    cfg = _config(args, mat, need_T=need_T)
    if not need_T:
        cfg = SphereConfig(cfg.radius, cfg.dx, spec.start)
    mode = _mode_notice(args, err)
    rows = run_sweep(spec, cfg, mat, mode)
    var = spec.variable
    header = [f"{var} [{SWEEP_UNITS[var]}]", "gamma_magnetic [s^-1]", "gamma_electric [s^-1]"]
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(r[var]), repr(r["gamma_magnetic"]), repr(r["gamma_electric"])])
    return EXIT_OK


def cmd_budget(args, out, err) -> int:
    mat = _material(args)
    cfg = _config(args, mat, need_T=False)
    mode = _mode_notice(args, err) if args.channel == "magnetic" else None
    T_max = rates.temperature_budget(cfg, mat, args.gamma_target, args.channel, mode)
    check = rates.long_wavelength_check(cfg.with_T(T_max.value))
    if args.json:
        doc = {
            "material": mat.name,
            "channel": args.channel,
            "mode": mode.value if mode else None,
            "gamma_target": {"value": args.gamma_target, "unit": "s^-1"},
            "radius": {"value": cfg.radius, "unit": "m"},
            "dx": {"value": cfg.dx, "unit": "m"},
            "T_max": _quantity(T_max),
            "validity": check.as_dict(),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
        return EXIT_OK
    out.write(
        f"T_max = {T_max.value:.6g} K for gamma <= {args.gamma_target:.6g} s^-1 "
        f"({args.channel}, {mat.name}, radius {cfg.radius:.6g} m, dx {cfg.dx:.6g} m)\n"
    )
    out.write(f"thermal wavelength at T_max: {check.wavelength.value:.6g} m -> {'PASS' if check.passed else 'FAIL'}\n")
    return EXIT_OK


def _parse_list(text: str | None, cast):
    if text is None:
        return None
    try:
        return [cast(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad list {text!r}: {exc}") from None


def cmd_oracle(args, out, err) -> int:
    mat = _material(args)
    cfg = _config(args, mat)
    n_list = _parse_list(args.n_list, int)
    dt_list = _parse_list(args.dt_list, float)
    if dt_list is not None:
        if len(dt_list) < 3 or any(b <= a for a, b in zip(dt_list, dt_list[1:])) or dt_list[0] <= 0:
            raise UsageError("--dt-list needs at least 3 positive, strictly increasing values")
    if not n_list or any(n < 2 for n in n_list):
        raise UsageError("--n-list needs integers >= 2")
    alpha = rates.magnetic_polarizability(cfg.radius, mat.chi_v)
    T = cfg.T
    if T == 0:
        rows = [
            {"n_per_axis": n, "slope": 0.0, "r2": 1.0, "rel_err_continuum": 0.0, "rel_err_rederived": 0.0} for n in n_list
        ]
        target_cont = target_red = 0.0
    else:
        study = modesum.convergence_study(alpha, T, n_list, args.k_max_thermal, args.V, dt_list)
        target_cont = modesum.dp2_per_dt_continuum(alpha, T, args.k_max_thermal).value
        target_red = rates.dp2_per_dt_magnetic(cfg, mat, CoefficientMode.REDERIVED).value
        rows = []
        for r in study:
            rows.append(
                {
                    "n_per_axis": r.n_per_axis,
                    "n_modes": r.n_modes,
                    "n_shells": r.n_shells,
                    "dt_lo": r.dt_lo,
                    "dt_hi": r.dt_hi,
                    "slope": r.slope,
                    "r2": r.r2,
                    "polarization_count": [r.polarization_count_min, r.polarization_count_max],
                    "isotropy_spread": r.isotropy_spread,
                    "rel_err_continuum": (r.slope / target_cont - 1.0) if target_cont else 0.0,
                    "rel_err_rederived": (r.slope / target_red - 1.0) if target_red else 0.0,
                }
            )
    final = rows[-1]
    converged = abs(final["rel_err_continuum"]) < args.tol and final["r2"] > 0.999
    if args.json:
        doc = {
            "material": mat.name,
            "radius": cfg.radius,
            "T": T,
            "k_max_thermal": args.k_max_thermal,
            "units": {"slope": "m^2·kg^2·s^-3", "dt": "s"},
            "continuum_target": target_cont,
            "rederived_target": target_red,
            "rows": rows,
            "converged": converged,
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(
            f"mode-sum oracle: {mat.name}, radius {cfg.radius:.6g} m, T {T:.6g} K, "
            f"k_max = {args.k_max_thermal:g} k_BT/(ħc)\n"
        )
        out.write(f"continuum limit of the mode sum: {target_cont:.6g} m^2·kg^2·s^-3\n")
        out.write(f"closed form (rederived):         {target_red:.6g} m^2·kg^2·s^-3\n")
        table = [("n", "slope", "R^2", "rel.err continuum", "rel.err rederived")]
        for r in rows:
            table.append((r["n_per_axis"], r["slope"], r["r2"], r["rel_err_continuum"], r["rel_err_rederived"]))
        _table(table, out)
    if not converged:
        err.write(
            f"error: final grid misses its continuum limit (rel.err {final['rel_err_continuum']:.3g}, "
            f"R^2 {final['r2']:.6g}); refine --n-list or lower --k-max-thermal\n"
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_materials(args, out, err) -> int:
    db = default_db(args.materials_file)
    if args.json:
        doc = {m.name: {**m.to_table(), "source": db.provenance(m.name)} for m in db}
        json.dump(doc, out, indent=2)
        out.write("\n")
        return EXIT_OK
    rows = [("name", "chi_v", "epsilon", "density [kg/m^3]", "source")]
    for m in db:
        eps = "inf" if m.epsilon_infinite else m.epsilon
        rows.append((m.name, m.chi_v, eps, m.density if m.density is not None else "-", db.provenance(m.name)))
    _table(rows, out)
    return EXIT_OK


def _add_sphere(p, need_T=True, require_size=True):
    g = p.add_mutually_exclusive_group(required=require_size)
    g.add_argument("--radius", type=float, help="sphere radius [m]")
    g.add_argument("--mass", type=float, help="sphere mass [kg] (radius from density)")
    p.add_argument("--density", type=float, help="density [kg/m^3] for --mass (default: material's)")
    p.add_argument("--dx", type=float, required=True, help="superposition size [m]")
    if need_T:
        p.add_argument("--T", type=float, help="ambient temperature [K]")


def _add_common(p):
    p.add_argument("--material", default="diamond")
    p.add_argument("--materials-file", help=f"extra material TOML file (also ${ENV_VAR})")
    p.add_argument("--json", action="store_true", help="emit one JSON document")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nanodeco", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="decoherence rates at one operating point")
    _add_common(p)
    _add_sphere(p)
    p.add_argument("--channel", choices=["magnetic", "electric", "both"], default="both")
    p.add_argument("--mode", choices=[m.value for m in CoefficientMode])
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep", help="CSV of both rates over one variable")
    p.add_argument("--material", default="diamond")
    p.add_argument("--materials-file")
    _add_sphere(p, require_size=False)
    p.add_argument("--var", choices=sorted(SWEEP_UNITS), required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--scale", choices=["linear", "log"], default="log")
    p.add_argument("--mode", choices=[m.value for m in CoefficientMode])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("budget", help="maximum temperature for a target rate")
    _add_common(p)
    _add_sphere(p, need_T=False)
    p.add_argument("--gamma-target", type=float, required=True, help="target rate [s^-1]")
    p.add_argument("--channel", choices=["magnetic", "electric"], default="electric")
    p.add_argument("--mode", choices=[m.value for m in CoefficientMode])
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("oracle", help="discrete mode-sum convergence study (magnetic channel)")
    _add_common(p)
    p.add_argument("--radius", type=float, default=1e-6, help="sphere radius [m]")
    p.add_argument("--mass", type=float, help=argparse.SUPPRESS)
    p.add_argument("--density", type=float, help=argparse.SUPPRESS)
    p.add_argument("--dx", type=float, default=0.0, help=argparse.SUPPRESS)
    p.add_argument("--T", type=float, default=300.0, help="ambient temperature [K]")
    p.add_argument("--n-list", default="16,24,32", help="grid resolutions, comma separated")
    p.add_argument("--k-max-thermal", type=float, default=modesum.DEFAULT_KMAX_THERMAL, help="cutoff in k_BT/(ħc)")
    p.add_argument("--V", type=float, default=1.0, help="quantization volume [m^3] (cancels)")
    p.add_argument("--dt-list", help="explicit dt values [s]; default spans 0.3-0.9 of the lattice revival time")
    p.add_argument("--tol", type=float, default=0.01, help="relative tolerance on the final grid")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("materials", help="list known materials")
    p.add_argument("--materials-file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_materials)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out, err)
    except NumericalFailure as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except (DecoError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end.

Every subcommand produces a flat list of records (name, value, units, label)
plus optional CSV files. Text output is one aligned line per record; JSON
output embeds the run manifest. Exit codes: 0 success, 1 solver failure,
2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import __version__
from . import bounds, star, tf_atom, white_dwarf, zeeman
from .constants import codata

DEFAULT_SWEEP = (31.0, 45.0, 57)  # log10 of n_c in m^-3, point count


# --- records ---------------------------------------------------------------


def _display(value: float) -> str:
    return f"{value:.6g}"


def record(name: str, value: Any, units: str = "", label: str = "") -> dict:
    """Flat JSON-ready record; rationals become strings, floats get a display field."""
    out: dict = {"name": name}
    if isinstance(value, Fraction):
        out["value"] = str(value)
        out["display"] = str(value)
    elif isinstance(value, (bool, np.bool_)):
        out["value"] = bool(value)
        out["display"] = str(bool(value))
    elif isinstance(value, (int, np.integer)):
        out["value"] = int(value)
        out["display"] = str(int(value))
    elif isinstance(value, (float, np.floating)):
        out["value"] = float(value)
        out["display"] = _display(float(value))
    elif value is None:
        out["value"] = None
        out["display"] = "n/a"
    else:
        out["value"] = str(value)
        out["display"] = str(value)
    out["units"] = units
    if label:
        out["label"] = label
    return out


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    constants_tag: str
    tool_version: str
    timestamp: str
    digests: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
            else _dt.datetime.now(_dt.timezone.utc))
    return when.replace(microsecond=0).isoformat()


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _csv_bytes(rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().encode()


class Outputs:
    """Collects records and files for one run."""

    def __init__(self):
        self.records: list[dict] = []
        self.files: dict[str, bytes] = {}

    def add(self, *args, **kwargs):
        self.records.append(record(*args, **kwargs))

    def csv(self, path: Optional[str], rows):
        if path:
            self.files[path] = _csv_bytes(rows)


# --- subcommands ---------------------------------------------------------------


def _quantum(text: str) -> zeeman.HalfInt:
    try:
        return zeeman.HalfInt.of(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a half-integer: {text}") from exc


def run_zeeman(args, out: Outputs):
    L, S = args.L, args.S
    m = zeeman.TermMultiplet(L, S)
    out.add("term", m.label)
    if args.strong:
        for s in zeeman.strong_field_table(L, S):
            out.add(f"M_L={s.M_L} M_S={s.M_S} M={s.M}", s.strong_field_slope, "mu_0 B")
        return
    g_rule = zeeman.g_from_sum_rule(L, S)
    for J in m.J_values:
        g = g_rule[J]
        if g is zeeman.UNDEFINED:
            out.add(f"g(J={J})", "undefined (J=0)")
            continue
        if args.weak:
            for M, dE in zeeman.weak_field_splitting(g, J):
                out.add(f"J={J} M={M}", dE, "mu_0 B")
        else:
            out.add(f"g(J={J})", g)
            out.add(f"g(J={J}) matches Lande", g == zeeman.lande_g(L, S, J))
    if not (args.strong or args.weak) and m.L > m.S:
        out.add("mean g", zeeman.mean_g(L, S))


def run_bounds(args, out: Outputs):
    N, Z, which = args.N, args.Z, args.which
    if which != "boson":
        if not float(N).is_integer():
            raise ValueError(f"--N must be an integer for --which {which}")
        N = int(N)
    if which == "shell":
        lo = bounds.shell_fill_lower_bound(N, Z)
        up = bounds.shell_fill_upper_bound(N, Z)
        out.add("lower bound (finite N)", lo.finite.value, "Ry")
        out.add("lower bound", lo.asymptotic.value, "Ry", "asymptotic")
        out.add("upper bound", up.value, "Ry", "asymptotic" if up.asserted else "not asserted")
        out.add("Thomas-Fermi reference", bounds.tf_reference_energy(Z), "Ry", "asymptotic")
        out.add("unperturbed energy", bounds.unperturbed_energy(N, Z), "Ry")
    elif which == "sobolev":
        res = bounds.sobolev_hydrogen_bound(Z)
        out.add("analytic minimum", res.analytic, "Ry")
        out.add("numeric minimum", res.numeric, "Ry")
        if res.minimizer is not None:
            out.csv(args.profile_out, res.minimizer.to_csv_rows())
    elif which == "holder":
        res = bounds.holder_bound(Z, args.K1)
        out.add("analytic minimum", res.analytic, "Ry")
        out.add("numeric minimum", res.numeric, "Ry")
        out.add("Sobolev value", res.sobolev, "Ry")
        out.csv(args.profile_out, res.minimizer.to_csv_rows())
    elif which == "size":
        res = bounds.atom_size_lower_bound(N)
        out.add("radius lower bound", res.radius, "a0", "asymptotic")
        out.add("radius coefficient", res.radius_coefficient, "a0", "asymptotic")
        out.add("oscillator coefficient", res.oscillator_coefficient, "")
        out.add("sum p^2 upper", res.sum_p2_upper, "hartree atomic units")
        out.add("sum x^2 lower", res.sum_x2_lower, "a0^2")
    elif which == "lt":
        spec = bounds.SystemSpec(N=N, nuclei=tuple((Z, None) for _ in range(args.k)))
        out.add("Lieb-Thirring lower bound", bounds.lieb_thirring_bound(spec).value, "Ry")
    elif which == "boson":
        res = bounds.boson_bounds(N)
        out.add("upper bound", res.upper.value, "Ry", "asymptotic, display constant")
        out.add("lower bound", res.lower.value, "Ry", "asymptotic")


def run_tf_atom(args, out: Outputs):
    res = tf_atom.tf_energy(args.Z)
    out.add("energy", res.energy, "Ry")
    out.add("energy per Z^(7/3)", res.energy / args.Z ** (7.0 / 3.0), "Ry")
    out.add("energy (direct quadrature)", res.direct, "Ry")
    out.add("kinetic", res.kinetic, "Ry")
    out.add("nuclear attraction", res.nuclear, "Ry")
    out.add("electron repulsion", res.repulsion, "Ry")
    out.add("screening slope phi'(0)", res.slope0, "")
    if args.profile_out:
        r = np.geomspace(1e-4, 50.0, 400) * tf_atom.tf_length(args.Z)
        n = tf_atom.tf_density(args.Z, r)
        rows = [("r_a0", "n_per_a0^3")] + [(repr(float(a)), repr(float(b))) for a, b in zip(r, n)]
        out.csv(args.profile_out, rows)


def run_star(args, out: Outputs):
    k = codata()
    if args.relativistic:
        res = star.relativistic_minimum(args.N, args.Z, args.A)
        out.add("relativistic threshold N", star.relativistic_threshold(args.Z, args.A), "", "model")
    else:
        res = star.minimize_nonrel(star.HeuristicInput(
            N=args.N, Z=args.Z, A=args.A, include_gravity=not args.no_gravity,
            statistics="boson" if args.bosons else "fermion"))
    out.add("regime", res.regime)
    out.add("p0", res.p0, "m_e c", res.label)
    out.add("E0", res.E0, "Ry", res.label)
    out.add("binding", res.binding, "Ry", res.label)
    out.add("n0", res.n0, "m^-3", res.label)
    out.add("rho0", res.rho0, "g/cm^3", res.label)
    crit = star.critical_numbers(args.Z, args.A, k)
    out.add("N_c", crit.N_c, "", "model")
    out.add("N_r (quoted form)", crit.N_r, "", "model")
    out.add("N_r (derived)", crit.N_r_derived, "", "model")
    out.add("M_r", crit.M_r_solar, "M_sun", "model")


def _parse_nc(text: str):
    """A value in m^-3, or sweep[:lo:hi:count] with lo, hi in log10 m^-3."""
    if text.startswith("sweep"):
        parts = text.split(":")[1:]
        lo, hi, count = DEFAULT_SWEEP
        try:
            if parts:
                if len(parts) != 3:
                    raise ValueError
                lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise argparse.ArgumentTypeError("sweep format is sweep:lo:hi:count") from exc
        return ("sweep", lo, hi, count)
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --nc value: {text}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError("--nc must be > 0")
    return ("value", value)


def run_wd(args, out: Outputs):
    k = codata()
    if args.ZA is not None:
        if not 0 < args.ZA <= 1:
            raise ValueError("--ZA must be in (0, 1]")
        mpe = k.m_N / args.ZA
    else:
        mpe = args.mu_per_electron * k.m_N
    kappa = k.kappa_natural(mpe)
    out.add("kappa", kappa, "")
    crit = white_dwarf.critical_tau()
    out.add("critical kappa N^(2/3)", crit.tau_raw, "")
    out.add("critical kappa^(3/2) N", crit.tau_mass, "")
    out.add("quoted tau_c", crit.quoted_value, "", "reference, convention differs")
    out.add("convention", crit.convention)
    out.add("critical mass", k.kg_to_solar(white_dwarf.critical_electron_number(kappa) * mpe), "M_sun")
    nc = args.nc
    if nc[0] == "value":
        model = white_dwarf.solve_structure(k.si_density_to_natural(nc[1]), kappa, mpe)
        out.add("N", model.N, "electrons")
        out.add("mass", model.mass_solar, "M_sun")
        out.add("radius", model.radius_m, "m")
        out.add("E_TF", model.E_TF_joule, "J")
        out.add("kappa N^(2/3)", model.tau, "")
        out.add("hydrostatic residual", white_dwarf.hydrostatic_residual(model), "relative")
        out.add("Euler-Lagrange residual", white_dwarf.euler_lagrange_residual(model), "relative")
        out.csv(args.curve_out, [("n_c", "N", "M_kg", "M_solar", "R_m", "E_TF"),
                                 tuple(repr(float(v)) for v in (nc[1], model.N, model.mass_kg,
                                                                model.mass_solar, model.radius_m,
                                                                model.E_TF_joule))])
        return
    _, lo, hi, count = nc
    grid = k.si_density_to_natural(np.logspace(lo, hi, count))
    curve = white_dwarf.mass_radius_curve(kappa, grid, mpe, workers=args.workers)
    out.add("points", len(curve.points), "")
    out.add("gaps", len(curve.gaps), "")
    out.add("limiting N", curve.limiting_N, "electrons", "extrapolated")
    out.add("limiting mass", curve.limiting_mass_solar, "M_sun", "extrapolated")
    out.add("limiting kappa N^(2/3)", curve.limiting_tau, "", "extrapolated")
    out.csv(args.curve_out, curve.csv_rows())


def run_constants(args, out: Outputs):
    k = codata()
    units = {"alpha": "", "c": "m/s", "hbar": "J s", "G": "m^3 kg^-1 s^-2", "m_e": "kg",
             "m_N": "kg", "m_p": "kg", "eV": "J", "Ry_eV": "eV", "a0": "m", "mu_B": "J/T",
             "M_sun": "kg", "M_jupiter": "kg", "Ry_J": "J", "MPl": "kg"}
    out.add("tag", k.tag)
    for name, value in k.as_dict().items():
        out.add(name, value, units.get(name, ""))


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON instead of text")
    common.add_argument("--manifest-out", default=argparse.SUPPRESS, metavar="PATH",
                        help="write the run manifest to PATH")
    p = argparse.ArgumentParser(prog="paulilab", parents=[common],
                                description="Exclusion principle and stability of matter, numerically.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeeman", parents=[common], help="g-factors and Zeeman patterns")
    z.add_argument("--L", type=_quantum, required=True)
    z.add_argument("--S", type=_quantum, required=True)
    mode = z.add_mutually_exclusive_group()
    mode.add_argument("--g", action="store_true", help="g-factors from the sum rule (default)")
    mode.add_argument("--strong", action="store_true", help="strong-field slopes")
    mode.add_argument("--weak", action="store_true", help="weak-field splittings")
    z.set_defaults(func=run_zeeman)

    b = sub.add_parser("bounds", parents=[common], help="energy and size bounds")
    b.add_argument("--N", type=float, default=1.0)
    b.add_argument("--Z", type=float, default=1.0)
    b.add_argument("--k", type=int, default=1, help="number of nuclei (lt)")
    b.add_argument("--K1", type=float, default=bounds.IMPROVED_K1, help="kinetic constant (holder)")
    b.add_argument("--which", choices=["shell", "sobolev", "holder", "size", "lt", "boson"],
                   default="shell")
    b.add_argument("--profile-out", metavar="CSV")
    b.set_defaults(func=run_bounds)

    t = sub.add_parser("tf-atom", parents=[common], help="Thomas-Fermi neutral atom")
    t.add_argument("--Z", type=float, required=True)
    t.add_argument("--profile-out", metavar="CSV")
    t.set_defaults(func=run_tf_atom)

    s = sub.add_parser("star", parents=[common], help="heuristic gravitating matter")
    s.add_argument("--N", type=float, required=True)
    s.add_argument("--Z", type=float, default=1.0)
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--relativistic", action="store_true")
    s.add_argument("--bosons", action="store_true")
    s.add_argument("--no-gravity", action="store_true")
    s.set_defaults(func=run_star)

    w = sub.add_parser("wd", parents=[common], help="white-dwarf structure and limiting mass")
    comp = w.add_mutually_exclusive_group(required=True)
    comp.add_argument("--mu-per-electron", type=float, metavar="AMU")
    comp.add_argument("--ZA", type=float)
    w.add_argument("--nc", type=_parse_nc, default=("sweep",) + DEFAULT_SWEEP,
                   help="central density in m^-3, or sweep[:lo:hi:count] in log10 m^-3")
    w.add_argument("--curve-out", metavar="CSV")
    w.add_argument("--workers", type=int, default=None)
    w.set_defaults(func=run_wd)

    c = sub.add_parser("constants", parents=[common], help="the constant set in use")
    c.set_defaults(func=run_constants)
    return p


def _parameters(args) -> dict:
    skip = {"func", "json", "manifest_out"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, zeeman.HalfInt):
            value = str(value.value)
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _format_text(records: list[dict]) -> str:
    width = max((len(r["name"]) for r in records), default=0)
    lines = []
    for r in records:
        extra = " ".join(x for x in (r["units"], f"[{r['label']}]" if r.get("label") else "") if x)
        lines.append(f"{r['name']:<{width}}  {r['display']}" + (f"  {extra}" if extra else ""))
    return "\n".join(lines) + "\n"


def dispatch(argv: Optional[list[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Outputs()
    try:
        args.func(args, out)
    except (bounds.ConvergenceError, white_dwarf.UnboundedProfile, tf_atom.BracketError,
            zeeman.SumRuleError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2

    payload = json.dumps(out.records, sort_keys=True).encode()
    manifest = RunManifest(
        subcommand=args.command,
        parameters=_parameters(args),
        constants_tag=codata().tag,
        tool_version=__version__,
        timestamp=_timestamp(),
        digests={"results": _sha256(payload), **{p: _sha256(b) for p, b in out.files.items()}},
    )
    for path, data in out.files.items():
        with open(path, "wb") as fh:
            fh.write(data)
    if getattr(args, "manifest_out", None):
        with open(args.manifest_out, "w") as fh:
            fh.write(manifest.to_json() + "\n")
    if getattr(args, "json", False):
        doc = {"manifest": asdict(manifest), "results": out.records}
        stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        stdout.write(_format_text(out.records))
        stdout.write(f"# results sha256 {manifest.digests['results']}  constants {manifest.constants_tag}\n")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    raise SystemExit(main())

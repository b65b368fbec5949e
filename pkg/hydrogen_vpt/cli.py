"""
Command-line interface.

    hydrogen-vpt potential --beta 100 --B 2 --direction both --grid 0.5:50:20:log
    hydrogen-vpt ground-state --B-grid 1e-3:1e5:25:log
    hydrogen-vpt weak-field --order 3 --exact
    hydrogen-vpt strong-field --B 1e5
    hydrogen-vpt partition --beta 1 --B 0 --rho-grid 0:8:9 --z-grid 0:8:9
    hydrogen-vpt units --value 2.35e14G --kind field

Exit status: 0 success, 2 usage error, 3 domain error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from typing import Any, Callable, Sequence, TextIO

import numpy as np

from . import ground_state, strong_field, units, variational_optimizer, weak_field
from .effective_potential import partition_integral
from .errors import DomainError, VptError
from .output import RunConfig, emit, render
from .telemetry import EventRecorder, set_default_recorder

log = logging.getLogger(__name__)

# columns, rows and table-level details for the metadata
Table = tuple[list[str], list[dict[str, Any]], dict[str, Any]]


def parse_grid(spec: str, kind: str | None = None) -> list[float]:
    """``start:stop:count[:log]`` to an ascending list; a single number is a one-point grid."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [units.parse_quantity(parts[0], kind)]
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise DomainError.invalid_argument("grid", f"expected start:stop:count[:log], got '{spec}'")
    start, stop = units.parse_quantity(parts[0], kind), units.parse_quantity(parts[1], kind)
    try:
        count = int(parts[2])
    except ValueError:
        raise DomainError.invalid_argument("grid", f"count '{parts[2]}' is not an integer") from None
    if count < 1:
        raise DomainError.invalid_argument("grid", "count must be at least 1", count)
    if len(parts) == 4:
        if start <= 0 or stop <= 0:
            raise DomainError.invalid_argument("grid", "log spacing needs positive end points")
        return np.geomspace(start, stop, count).tolist()
    return np.linspace(start, stop, count).tolist()


def parse_list(spec: str, kind: str | None = None) -> list[float]:
    return [units.parse_quantity(item, kind) for item in spec.split(",") if item.strip()]


def _natural(kind: str) -> Callable[[str], float]:
    def parse(text: str) -> float:
        try:
            return units.parse_quantity(text, kind)
        except DomainError as e:
            raise argparse.ArgumentTypeError(e.message) from None

    parse.__name__ = kind
    return parse


def _physical(value: float, kind: str) -> float:
    return units.natural_to_physical(value, kind).value


def _potential(args: argparse.Namespace) -> Table:
    directions = ["transverse", "longitudinal"] if args.direction == "both" else [args.direction]
    grid = parse_grid(args.grid)
    columns = ["direction", "distance", "W1", "omega_perp1", "omega_perp2", "omega_par", "residual", "status"]
    if args.units == "physical":
        columns += ["distance_cm", "W1_eV"]
    rows = []
    for direction in directions:
        for row in variational_optimizer.potential_profile(args.beta, args.B, direction, grid, tol=args.tol):
            freqs = row.frequencies.as_tuple() if row.frequencies is not None else (None, None, None)
            record = {
                "direction": direction,
                "distance": row.distance,
                "W1": row.value,
                "omega_perp1": freqs[0],
                "omega_perp2": freqs[1],
                "omega_par": freqs[2],
                "residual": row.residual,
                "status": row.status,
            }
            if args.units == "physical":
                record["distance_cm"] = _physical(row.distance, "length")
                record["W1_eV"] = _physical(row.value, "energy")
            rows.append(record)
    return columns, rows, {}


def _ground_state(args: argparse.Namespace) -> Table:
    B_values = parse_list(args.B_list, "field") if args.B_list is not None else parse_grid(args.B_grid, "field")
    results = ground_state.binding_scan(B_values, coulomb=not args.no_coulomb, precision=args.precision)
    columns = ["B", "energy", "binding", "omega_perp2", "omega_par", "landau_estimate", "status"]
    if args.units == "physical":
        columns += ["B_T", "energy_eV", "binding_eV"]
    rows = []
    for r in results:
        record = {
            "B": r.B,
            "energy": r.energy,
            "binding": r.binding,
            "omega_perp2": r.omega_perp2,
            "omega_par": r.omega_par,
            "landau_estimate": r.landau_estimate,
            "status": r.status,
        }
        if args.units == "physical":
            record["B_T"] = _physical(r.B, "field")
            record["energy_eV"] = _physical(r.energy, "energy")
            record["binding_eV"] = _physical(r.binding, "energy")
        rows.append(record)
    return columns, rows, {}


def _weak_field(args: argparse.Namespace) -> Table:
    table = weak_field.solve_weak_field(args.order, precision=args.precision, exact_mode=args.exact)
    columns = ["n", "eta_n", "omega_n", "epsilon_n", "epsilon_n_exact_hydrogen"]
    if args.exact:
        columns += ["eta_closed_form", "omega_closed_form", "epsilon_closed_form"]
    rows = []
    for row in table.rows:
        record: dict[str, Any] = {
            "n": row.n,
            "eta_n": float(row.eta),
            "omega_n": float(row.omega),
            "epsilon_n": float(row.epsilon),
            "epsilon_n_exact_hydrogen": row.epsilon_exact_hydrogen,
        }
        if args.exact:
            for family in ("eta", "omega", "epsilon"):
                record[f"{family}_closed_form"] = row.closed_forms.get(family)
        rows.append(record)
    return columns, rows, {}


def _strong_field(args: argparse.Namespace) -> Table:
    breakdown = strong_field.binding_lnB_expansion(args.B)
    columns = ["B", *(f"term_{i}" for i in range(1, 7)), "partial_sum", "correction_1_over_lnB", "total",
               "landau_estimate", "omega_par_expansion"]
    record = {"B": args.B, **{f"term_{i}": t for i, t in enumerate(breakdown.terms, start=1)},
              "partial_sum": breakdown.partial_sum, "correction_1_over_lnB": breakdown.correction_1_over_lnB,
              "total": breakdown.total, "landau_estimate": breakdown.landau_estimate,
              "omega_par_expansion": strong_field.omega_par_expansion(args.B)}
    return columns, [record], {}


def _partition(args: argparse.Namespace) -> Table:
    rho, z = parse_grid(args.rho_grid, "length"), parse_grid(args.z_grid, "length")
    potential = variational_optimizer.optimized_potential_grid(args.beta, args.B, rho, z, tol=args.tol_residual)
    result = partition_integral(args.beta, args.B, rho, z, potential, tol=args.tol)
    columns = ["beta", "B", "value", "error_estimate", "w_far", "plateau_weight"]
    return columns, [{"beta": args.beta, "B": args.B, "value": result.value, "error_estimate": result.error_estimate,
                      "w_far": result.w_far, "plateau_weight": result.plateau_weight}], result.meta


def _units(args: argparse.Namespace) -> Table:
    if args.to == "natural":
        value = units.parse_quantity(args.value, args.kind)
        unit = "natural"
    else:
        quantity = units.natural_to_physical(units.parse_quantity(args.value, args.kind), args.kind, args.unit)
        value, unit = quantity.value, quantity.unit
    return ["kind", "value", "unit"], [{"kind": args.kind, "value": value, "unit": unit}], {}


_COMMANDS: dict[str, Callable[[argparse.Namespace], Table]] = {
    "potential": _potential,
    "ground-state": _ground_state,
    "weak-field": _weak_field,
    "strong-field": _strong_field,
    "partition": _partition,
    "units": _units,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    common.add_argument("--output", default=None, help="Write to this file instead of stdout")
    common.add_argument("--precision", type=int, default=None, help="Decimal digits for high-precision work")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])

    parser = argparse.ArgumentParser(
        prog="hydrogen-vpt",
        description="Variational effective classical potential of hydrogen in a magnetic field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", parents=[common], help="Optimized W1 profiles along the field axes")
    p.add_argument("--beta", type=float, required=True, help="Inverse temperature (natural units)")
    p.add_argument("--B", type=_natural("field"), required=True, help="Field strength (natural units or T/G)")
    p.add_argument("--direction", choices=["transverse", "longitudinal", "both"], default="both")
    p.add_argument("--grid", required=True, help="Distances as start:stop:count[:log]")
    p.add_argument("--tol", type=float, default=None, help="Stationarity residual tolerance")
    p.add_argument("--units", choices=["natural", "physical"], default="natural")

    g = sub.add_parser("ground-state", parents=[common], help="Zero-temperature binding energies")
    source = g.add_mutually_exclusive_group(required=True)
    source.add_argument("--B-list", dest="B_list", help="Comma-separated field strengths")
    source.add_argument("--B-grid", dest="B_grid", help="Field strengths as start:stop:count[:log]")
    g.add_argument("--no-coulomb", action="store_true", help="Drop the Coulomb term (Landau level check)")
    g.add_argument("--units", choices=["natural", "physical"], default="natural")

    w = sub.add_parser("weak-field", parents=[common], help="Weak-field expansion coefficients")
    w.add_argument("--order", type=int, default=3)
    w.add_argument("--exact", action="store_true", help="Recover rational*pi^k closed forms")

    s = sub.add_parser("strong-field", parents=[common], help="ln B expansion of the binding energy")
    s.add_argument("--B", type=_natural("field"), required=True)

    z = sub.add_parser("partition", parents=[common], help="Relative configuration-space partition integral")
    z.add_argument("--beta", type=float, required=True)
    z.add_argument("--B", type=_natural("field"), required=True)
    z.add_argument("--rho-grid", dest="rho_grid", required=True, help="start:stop:count, odd count")
    z.add_argument("--z-grid", dest="z_grid", required=True, help="start:stop:count, odd count, z >= 0")
    z.add_argument("--tol", type=float, default=1e-4, help="Tolerance on the Richardson error estimate")
    z.add_argument("--tol-residual", dest="tol_residual", type=float, default=None)

    u = sub.add_parser("units", parents=[common], help="Convert between natural and physical units")
    u.add_argument("--value", required=True, help="Number with optional unit suffix (eV, K, cm, T, G)")
    u.add_argument("--kind", choices=["energy", "temperature", "length", "field"], required=True)
    u.add_argument("--to", choices=["natural", "physical"], default="natural")
    u.add_argument("--unit", default=None, help="Target physical unit, e.g. G for fields")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "format", "output", "precision", "log_level"}
    parameters = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    fields: dict[str, Any] = {"command": args.command, "parameters": parameters,
                              "output_format": args.format, "output_path": args.output}
    if args.precision is not None:
        fields["precision"] = args.precision
    return RunConfig(**fields)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(level=args.log_level, stream=stderr, format="%(levelname)s %(name)s: %(message)s")
    recorder = EventRecorder()
    set_default_recorder(recorder)
    try:
        config = _config(args)
        columns, rows, details = _COMMANDS[args.command](args)
        emit(render(columns, rows, config, recorder.as_dicts(), details), args.output, stdout)
    except VptError as e:
        stderr.write(f"error: {e}\n")
        return e.exit_status
    finally:
        set_default_recorder(None)
    return 0


if __name__ == "__main__":
    sys.exit(main())

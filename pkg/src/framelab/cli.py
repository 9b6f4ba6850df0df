"""Command-line interface: spec parsing, dispatch, deterministic emission.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 missing file,
4 malformed spec file, 5 output I/O error. Output files are written to a
temporary sibling and renamed into place, so failed runs leave no partial
files. Floats are printed with 17 significant digits so CSV output
round-trips exactly; identical configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dextrodual, hardy, kaczmarz, realline
from .errors import FramelabError, SpecParseError
from .measures import (
    CircleMeasure,
    FunctionSpec,
    MomentTable,
    function_from_dict,
    measure_from_dict,
    moments,
)

FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: command path plus the flags it consumes."""

    command: tuple
    measure_path: str | None = None
    function_path: str | None = None
    values_path: str | None = None
    orders: tuple = ()
    tolerance: float | None = None
    seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"
    extra: dict = field(default_factory=dict)


class UsageError(Exception):
    """Bad command line; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_orders(text: str) -> tuple:
    try:
        orders = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"orders {text!r} are not integers") from None
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise UsageError(f"orders {text!r} must be strictly increasing")
    if any(n < 0 for n in orders):
        raise UsageError("orders must be nonnegative")
    return orders


def _parse_floats(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"{text!r} is not a comma-separated list of numbers") from None


def _parse_complex(text: str) -> complex:
    try:
        return complex(text)
    except ValueError:
        raise UsageError(f"{text!r} is not a complex number") from None


def _add_common(parser, measure=True, function=False, values=False, orders=False,
                order=False):
    if measure:
        parser.add_argument("--measure", required=True, help="measure spec JSON file")
    if function:
        parser.add_argument("--function", required=True, help="function spec JSON file")
    if values:
        parser.add_argument("--values", required=True, help="atom-values JSON file")
    if orders:
        parser.add_argument("--orders", required=True, help="strictly increasing list, e.g. 8,16,32")
    if order:
        parser.add_argument("--order", required=True, type=int, help="truncation order")
    parser.add_argument("--tol", type=float, default=None, help="tolerance override")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output path (stdout if omitted)")


def build_parser() -> _Parser:
    parser = _Parser(prog="framelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="Fourier moments of a measure")
    _add_common(p, order=True)

    p = sub.add_parser("aux", help="Kaczmarz auxiliary triangle")
    _add_common(p, order=True)

    p = sub.add_parser("effective", help="Parseval defect and residual by order")
    _add_common(p, function=True, orders=True)

    p = sub.add_parser("dextrodual", help="extension-plan dual systems")
    dsub = p.add_subparsers(dest="subcommand", required=True)
    b = dsub.add_parser("build")
    b.add_argument("--parseval", action="store_true")
    _add_common(b)
    c = dsub.add_parser("coeffs")
    c.add_argument("--parseval", action="store_true")
    _add_common(c, function=True, order=True)
    r = dsub.add_parser("reconstruct")
    r.add_argument("--parseval", action="store_true")
    _add_common(r, function=True, orders=True)
    bd = dsub.add_parser("bounds")
    bd.add_argument("--parseval", action="store_true")
    _add_common(bd)

    p = sub.add_parser("witness", help="least-squares non-representability witness")
    p.add_argument("--atom", required=True, type=float, help="atom location of the target")
    _add_common(p, orders=True)

    p = sub.add_parser("examplecase", help="separated singular/density duals")
    esub = p.add_subparsers(dest="subcommand", required=True)
    b = esub.add_parser("build")
    _add_common(b, order=True)
    c = esub.add_parser("coeffs")
    _add_common(c, function=True, order=True)
    r = esub.add_parser("reconstruct")
    _add_common(r, function=True, orders=True)
    k = esub.add_parser("check")
    _add_common(k, function=True, orders=True)

    p = sub.add_parser("realline", help="expansions for atomic measures on the line")
    rsub = p.add_subparsers(dest="subcommand", required=True)
    pz = rsub.add_parser("periodize")
    pz.add_argument("--period", required=True, type=float)
    _add_common(pz)
    lt = rsub.add_parser("lattice")
    lt.add_argument("--freq", required=True, type=float, help="frequency scale c")
    _add_common(lt, values=True, orders=True)
    db = rsub.add_parser("double")
    db.add_argument("--N", required=True, help="inner orders, e.g. 8,64")
    db.add_argument("--M", required=True, help="outer orders, e.g. 16,256")
    _add_common(db, values=True)
    wt = rsub.add_parser("weighted")
    wt.add_argument("--a", required=True, help="lattice weights a_n, comma list")
    wt.add_argument("--c", required=True, help="exponential weights c_k, comma list")
    _add_common(wt, measure=False)

    p = sub.add_parser("hardy", help="disk extensions, Cauchy transforms, kernels")
    hsub = p.add_subparsers(dest="subcommand", required=True)
    for name in ("cauchy", "vmu"):
        q = hsub.add_parser(name)
        _add_common(q, function=True, order=True)
    bo = hsub.add_parser("boundary")
    bo.add_argument("--r", default="0.9,0.99,0.999", help="radii, comma list")
    bo.add_argument("--parseval", action="store_true")
    _add_common(bo, function=True, order=True)
    ke = hsub.add_parser("kernel")
    ke.add_argument("--w", default="0.25", help="kernel parameter(s), comma list")
    ke.add_argument("--z", default=None, help="evaluation point(s), defaults to --w")
    _add_common(ke, order=True)
    sh = hsub.add_parser("shift")
    _add_common(sh, order=True)

    return parser


def parse_config(argv) -> RunConfig:
    """Parse and validate a command line into a RunConfig."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    command = (ns.command,) + (
        (ns.subcommand,) if getattr(ns, "subcommand", None) else ()
    )
    orders = ()
    if getattr(ns, "orders", None) is not None:
        orders = _parse_orders(ns.orders)
    elif getattr(ns, "order", None) is not None:
        if ns.order < 0:
            raise UsageError("order must be nonnegative")
        orders = (ns.order,)
    extra = {
        key: getattr(ns, key)
        for key in ("parseval", "atom", "period", "freq", "N", "M", "a", "c", "r", "w", "z")
        if hasattr(ns, key)
    }
    return RunConfig(
        command=command,
        measure_path=getattr(ns, "measure", None),
        function_path=getattr(ns, "function", None),
        values_path=getattr(ns, "values", None),
        orders=orders,
        tolerance=ns.tol,
        seed=ns.seed,
        output_path=ns.out,
        output_format=ns.format,
        extra=extra,
    )


# ---------------------------------------------------------------------------
# Spec file loading
# ---------------------------------------------------------------------------

def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None


def load_measure(path: str) -> CircleMeasure:
    try:
        return measure_from_dict(_load_json(path))
    except SpecParseError as exc:
        raise SpecParseError(f"{path}: {exc}") from None


def load_function(path: str) -> FunctionSpec:
    try:
        return function_from_dict(_load_json(path))
    except SpecParseError as exc:
        raise SpecParseError(f"{path}: {exc}") from None


def load_real_measure(path: str) -> realline.RealAtomicMeasure:
    data = _load_json(path)
    atoms = []
    for i, entry in enumerate(data.get("atoms", []) or []):
        try:
            atoms.append((float(entry["y"]), float(entry["w"])))
        except (KeyError, TypeError, ValueError):
            raise SpecParseError(f"{path}: atoms[{i}] needs numeric 'y' and 'w'") from None
    try:
        return realline.RealAtomicMeasure(atoms=tuple(atoms))
    except ValueError as exc:
        raise SpecParseError(f"{path}: {exc}") from None


def load_values(path: str, measure: realline.RealAtomicMeasure) -> list:
    """Atom values keyed by position, returned aligned with the sorted atoms."""
    data = _load_json(path)
    entries = []
    for i, entry in enumerate(data.get("values", []) or []):
        try:
            entries.append(
                (float(entry["y"]), complex(float(entry["re"]), float(entry.get("im", 0.0))))
            )
        except (KeyError, TypeError, ValueError):
            raise SpecParseError(f"{path}: values[{i}] needs numeric 'y' and 're'") from None
    out = []
    for y, _ in measure.atoms:
        matches = [v for (yy, v) in entries if abs(yy - y) <= 1e-12]
        if not matches:
            raise SpecParseError(f"{path}: no value supplied for atom at {y}")
        out.append(matches[0])
    return out


# ---------------------------------------------------------------------------
# Deterministic test-function generation
# ---------------------------------------------------------------------------

def generate_test_functions(measure: CircleMeasure, seed: int, count: int) -> list:
    """Seeded pseudo-random FunctionSpecs compatible with the measure.

    Frequencies lie in [-8, 8], at most 4 terms, coefficients in the complex
    unit box, and every atom receives a sampled value. Measures carrying a
    Cantor component only receive pure trig polynomials.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        nterms = int(rng.integers(1, 5))
        terms = []
        for _ in range(nterms):
            m = int(rng.integers(-8, 9))
            coeff = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            if measure.has_cantor:
                u, v = 0.0, 1.0
            else:
                u, v = np.sort(rng.uniform(0.0, 1.0, size=2))
                if v - u < 1e-9:
                    u, v = 0.0, 1.0
            terms.append((m, float(u), float(v), coeff))
        values = tuple(
            (x, complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            for x, _ in measure.atoms
        )
        out.append(FunctionSpec(terms=tuple(terms), atom_values=values))
    return out


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _format_value(value):
    if isinstance(value, (bool, int, np.integer)):
        return str(int(value))
    return FLOAT_FORMAT % float(value)


def emit(rows, header, fmt: str, path: str | None):
    """Write rows under a fixed header as CSV or JSON, atomically when to a file."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(v) for v in row])
        payload = buffer.getvalue()
    elif fmt == "json":
        records = [
            {key: (int(v) if isinstance(v, (bool, int, np.integer)) else float(v))
             for key, v in zip(header, row)}
            for row in rows
        ]
        payload = json.dumps({"columns": list(header), "rows": records}, indent=2) + "\n"
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path is None:
        sys.stdout.write(payload)
        return
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------

def _cmd_moments(config: RunConfig):
    measure = load_measure(config.measure_path)
    order = config.orders[0]
    ns = np.arange(-order, order + 1)
    vals = moments(measure, ns)
    return [(int(n), v.real, v.imag) for n, v in zip(ns, vals)], ("n", "re", "im")


def _cmd_aux(config: RunConfig):
    measure = load_measure(config.measure_path)
    order = config.orders[0]
    table = MomentTable.from_measure(measure, order)
    triangle = kaczmarz.auxiliary_sequence(table, order)
    rows = []
    for n in range(order + 1):
        for k in range(n + 1):
            entry = triangle.rows[n, k]
            rows.append((n, k, entry.real, entry.imag))
    return rows, ("n", "k", "re", "im")


def _cmd_effective(config: RunConfig):
    measure = load_measure(config.measure_path)
    f = load_function(config.function_path)
    top = max(config.orders)
    table = MomentTable.from_measure(measure, top)
    triangle = kaczmarz.auxiliary_sequence(table, top)
    rows = kaczmarz.defect_table(measure, triangle, f, config.orders)
    return rows, ("N", "defect", "residual")


def _plan(config: RunConfig):
    measure = load_measure(config.measure_path)
    return dextrodual.build_extension_plan(measure, parseval=config.extra.get("parseval", False))


def _cmd_dextrodual(config: RunConfig):
    sub = config.command[1]
    plan = _plan(config)
    if sub == "build":
        rows = [
            (x, w, start, end)
            for (x, w), (start, end) in zip(plan.measure.atoms, plan.intervals)
        ]
        return rows, ("x", "w", "jStart", "jEnd")
    if sub == "bounds":
        lo, hi = dextrodual.frame_bounds_extension(plan)
        return [(lo, hi)], ("A", "B")
    f = load_function(config.function_path)
    if sub == "coeffs":
        order = config.orders[0]
        coeffs = dextrodual.analysis_coefficients_mixed(plan, f, order)
        ns = np.arange(-order, order + 1)
        return [(int(n), c.real, c.imag) for n, c in zip(ns, coeffs)], ("n", "re", "im")
    rows = []
    for order in config.orders:
        rep = dextrodual.reconstruct_mixed(plan, f, order)
        rows.append((order, rep.atom_error_sq, rep.density_error_sq, rep.total_error_sq))
    return rows, ("M", "atomErrorSq", "densityErrorSq", "totalErrorSq")


def _cmd_witness(config: RunConfig):
    measure = load_measure(config.measure_path)
    target = FunctionSpec(atom_values=((config.extra["atom"], 1.0),))
    rows = []
    for order in config.orders:
        report = dextrodual.nonrepresentability_witness(measure, target, order)
        rows.append(
            (order, report.atom_mismatch, report.lebesgue_norm_sq, report.distance_sq)
        )
    return rows, ("M", "atomMismatch", "lebesgueNormSq", "distanceSq")


def _cmd_examplecase(config: RunConfig):
    sub = config.command[1]
    measure = load_measure(config.measure_path)
    if sub == "build":
        dual = dextrodual.build_examplecase_dual(measure, config.orders[0])
        return (
            [(dual.i1[0], dual.i1[1], dual.i2[0], dual.i2[1])],
            ("i1Start", "i1End", "i2Start", "i2End"),
        )
    f = load_function(config.function_path)
    top = max(config.orders)
    dual = dextrodual.build_examplecase_dual(measure, 4 * top)
    if sub == "coeffs":
        coeffs = dextrodual.analysis_coefficients_examplecase(dual, f, top)
        ns = np.arange(-top, top + 1)
        return [(int(n), c.real, c.imag) for n, c in zip(ns, coeffs)], ("n", "re", "im")
    if sub == "reconstruct":
        rows = []
        for order in config.orders:
            rep = dextrodual.reconstruct_examplecase(dual, f, order)
            rows.append(
                (order, rep.atom_error_sq, rep.density_error_sq, rep.total_error_sq)
            )
        return rows, ("M", "atomErrorSq", "densityErrorSq", "totalErrorSq")
    rows = []
    for order in config.orders:
        lhs, rhs = dextrodual.bessel_pythagoras_check(dual, f, order)
        rows.append((order, lhs, rhs))
    return rows, ("M", "lhs", "rhs")


def _cmd_realline(config: RunConfig):
    sub = config.command[1]
    if sub == "weighted":
        a = _parse_floats(config.extra["a"])
        c = _parse_floats(config.extra["c"])
        table = realline.weighted_bessel_decay(a, c)
        return [(n, v) for n, v in enumerate(table)], ("n", "value")
    measure = load_real_measure(config.measure_path)
    if sub == "periodize":
        folded = realline.periodize(measure, config.extra["period"])
        return [(x, w) for x, w in folded.atoms], ("x", "w")
    values = load_values(config.values_path, measure)
    if sub == "lattice":
        _, rows = realline.lattice_effective_expansion(
            measure, config.extra["freq"], config.orders, values
        )
        return rows, ("N", "defect")
    system = realline.disintegrate(measure)
    inner = _parse_orders(config.extra["N"])
    outer = _parse_orders(config.extra["M"])
    rows = realline.double_defect_table(system, values, inner, outer)
    return rows, ("N", "M", "defect")


def _cmd_hardy(config: RunConfig):
    sub = config.command[1]
    measure = load_measure(config.measure_path)
    order = config.orders[0]
    if sub in ("cauchy", "vmu"):
        f = load_function(config.function_path)
        series = (
            hardy.cauchy_series(measure, f, order)
            if sub == "cauchy"
            else hardy.normalized_cauchy_series(measure, f, order)
        )
        return (
            [(int(n), c.real, c.imag) for n, c in enumerate(series.coeffs)],
            ("n", "re", "im"),
        )
    if sub == "boundary":
        f = load_function(config.function_path)
        plan = dextrodual.build_extension_plan(
            measure, parseval=config.extra.get("parseval", False)
        )
        coeffs = dextrodual.analysis_coefficients_mixed(plan, f, order)
        rows = []
        for r in _parse_floats(config.extra["r"]):
            rows.append((r, hardy.boundary_error(measure, coeffs, -order, f, r)))
        return rows, ("r", "errorSq")
    family = hardy.family_from_measure(measure, order)
    if sub == "shift":
        residual, op_norm = hardy.shift_residual(family)
        return [(residual, op_norm)], ("residual", "operatorNorm")
    ws = [_parse_complex(part) for part in config.extra["w"].split(",")]
    z_text = config.extra.get("z")
    zs = ws if z_text is None else [_parse_complex(part) for part in z_text.split(",")]
    rows = []
    for w in ws:
        for z in zs:
            val = hardy.reproducing_kernel_eval(family, w, z)
            rows.append((w.real, w.imag, z.real, z.imag, val.real, val.imag))
    return rows, ("re(w)", "im(w)", "re(z)", "im(z)", "re(K)", "im(K)")


_HANDLERS = {
    "moments": _cmd_moments,
    "aux": _cmd_aux,
    "effective": _cmd_effective,
    "dextrodual": _cmd_dextrodual,
    "witness": _cmd_witness,
    "examplecase": _cmd_examplecase,
    "realline": _cmd_realline,
    "hardy": _cmd_hardy,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"framelab: usage error: {exc}", file=sys.stderr)
        return 2
    try:
        rows, header = _HANDLERS[config.command[0]](config)
        emit(rows, header, config.output_format, config.output_path)
    except UsageError as exc:
        print(f"framelab: usage error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"framelab: file not found: {exc.filename or exc}", file=sys.stderr)
        return 3
    except SpecParseError as exc:
        print(f"framelab: spec error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"framelab: io error: {exc}", file=sys.stderr)
        return 5
    except FramelabError as exc:
        print(f"framelab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"framelab: {exc}", file=sys.stderr)
        return 1
    return 0


def main_entry():
    raise SystemExit(main())

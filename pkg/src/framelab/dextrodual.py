"""Dual systems reproducing f = sum_n <f, g_n> e^{2 pi i n x} for mixed measures.

Two constructions are provided for measures that carry both an atomic part and
a density supported away from it:

* extension plans: each atom receives a disjoint interval below the density
  support, f is extended to a step function on [0,1), and the analysis
  coefficients are ordinary Fourier coefficients of the extension;
* separated duals: the atomic part is handled by its Kaczmarz auxiliary
  sequence localized to an inflated open interval, the density part by the
  reciprocal-density exponentials, and the two coefficient streams add.

A least-squares witness demonstrates why no such expansion can converge when
an atom sits inside the closure of a density bounded below: the best trig
polynomials match the atom value only as their Lebesgue norms vanish.

All partial sums are symmetric, p(x) = sum_{|n| <= M} c_n e^{2 pi i n x}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AtomTooClose,
    MissingAtomValue,
    NotSeparated,
    ParsevalInfeasible,
    TruncationOrder,
)
from .kaczmarz import (
    CoefficientTriangle,
    analysis_coefficients,
    auxiliary_sequence,
)
from .measures import (
    ATOM_TOL,
    CircleMeasure,
    FunctionSpec,
    MomentTable,
    analysis_inner_products,
    evaluate,
    interval_exp_integral,
    moments,
    norm_sq,
    trig_distance_sq,
    trig_eval,
    trig_norm_sq,
)

_LEBESGUE = CircleMeasure.lebesgue()


@dataclass(frozen=True)
class ReconstructionReport:
    """Squared reconstruction errors of a symmetric partial sum."""

    atom_error_sq: float
    density_error_sq: float

    @property
    def total_error_sq(self) -> float:
        return self.atom_error_sq + self.density_error_sq


@dataclass(frozen=True)
class ExtensionPlan:
    """Per-atom extension intervals below the density cut.

    measure has all atoms strictly inside (0, cut) and density pieces in
    [cut, 1). intervals[k] = (start, end) is the interval J_k that carries
    the constant f(atom_k) in the extension; intervals are pairwise disjoint
    and contain their atoms strictly.
    """

    measure: CircleMeasure
    cut: float
    intervals: tuple
    parseval: bool = False


def _extension_cut(measure: CircleMeasure) -> float:
    if measure.has_cantor:
        raise ValueError("extension plans require a purely atomic singular part")
    for a, b, h in measure.pieces:
        if not h > 0.0:
            raise ValueError("extension plans require density heights > 0")
    return min((a for a, _, _ in measure.pieces), default=1.0)


def build_extension_plan(measure: CircleMeasure, parseval: bool = False) -> ExtensionPlan:
    """Assign disjoint intervals in [0, cut) to the atoms.

    Default intervals are centered with radius min(gap/3, x/2, (cut-x)/2).
    With parseval=True each interval must have length equal to its atom's
    weight; intervals are centered and shifted right past earlier ones, and
    ParsevalInfeasible is raised when an atom is no longer strictly interior
    or the packing overflows the cut.
    """
    cut = _extension_cut(measure)
    locs = [x for x, _ in measure.atoms]
    for x in locs:
        if not (0.0 < x < cut):
            raise ValueError(f"atom at {x} is not strictly inside (0, {cut})")
    intervals = []
    if parseval:
        cursor = 0.0
        for x, w in measure.atoms:
            start = max(x - w / 2.0, cursor, 0.0)
            end = start + w
            if not (start < x < end) or end > cut + ATOM_TOL:
                raise ParsevalInfeasible(
                    f"cannot pack an interval of length {w} around atom {x} in [0,{cut})"
                )
            intervals.append((start, min(end, cut)))
            cursor = end
    else:
        for i, (x, _) in enumerate(measure.atoms):
            gap = min(
                (abs(x - y) for j, (y, _) in enumerate(measure.atoms) if j != i),
                default=np.inf,
            )
            radius = min(gap / 3.0, x / 2.0, (cut - x) / 2.0)
            if not radius > 0.0:
                raise AtomTooClose(f"no positive margin available around atom {x}")
            intervals.append((x - radius, x + radius))
    return ExtensionPlan(
        measure=measure, cut=cut, intervals=tuple(intervals), parseval=parseval
    )


def _atom_value(f: FunctionSpec, x: float) -> complex:
    if f.override_at(x) is not None:
        return evaluate(f, x)
    for _, u, v, c in f.terms:
        if c != 0 and (abs(x - u) <= ATOM_TOL or abs(x - v) <= ATOM_TOL):
            raise MissingAtomValue(
                f"function value at atom {x} sits on a term boundary; "
                "supply an explicit atom value"
            )
    return evaluate(f, x)


def _restrict_to_pieces(f: FunctionSpec, pieces) -> FunctionSpec:
    terms = []
    for m, u, v, c in f.terms:
        if c == 0:
            continue
        for a, b, _ in pieces:
            lo, hi = max(u, a), min(v, b)
            if lo < hi:
                terms.append((m, lo, hi, c))
    return FunctionSpec(terms=tuple(terms))


def extended_function(plan: ExtensionPlan, f: FunctionSpec) -> FunctionSpec:
    """The step extension: f(atom_k) on J_k plus f restricted to the density support."""
    terms = []
    for (x, _), (start, end) in zip(plan.measure.atoms, plan.intervals):
        val = _atom_value(f, x)
        if val != 0:
            terms.append((0, start, end, val))
    restricted = _restrict_to_pieces(f, plan.measure.pieces)
    return FunctionSpec(terms=tuple(terms) + restricted.terms)


def analysis_coefficients_mixed(
    plan: ExtensionPlan, f: FunctionSpec, order: int
) -> np.ndarray:
    """Fourier coefficients of the extension, n = -order..order."""
    ext = extended_function(plan, f)
    ns = np.arange(-order, order + 1)
    return analysis_inner_products(_LEBESGUE, ext, ns)


def _reconstruction_report(
    measure: CircleMeasure, coeffs: np.ndarray, order: int, f: FunctionSpec
) -> ReconstructionReport:
    atom_err = 0.0
    for x, w in measure.atoms:
        target = evaluate(f, x)
        atom_err += w * abs(trig_eval(coeffs, -order, x) - target) ** 2
    density = CircleMeasure(pieces=measure.pieces) if measure.pieces else None
    density_err = trig_distance_sq(density, coeffs, -order, f) if density else 0.0
    return ReconstructionReport(atom_error_sq=atom_err, density_error_sq=density_err)


def reconstruct_mixed(
    plan: ExtensionPlan, f: FunctionSpec, order: int
) -> ReconstructionReport:
    """Error report of the symmetric partial sum against the mixed measure."""
    coeffs = analysis_coefficients_mixed(plan, f, order)
    return _reconstruction_report(plan.measure, coeffs, order, f)


def frame_bounds_extension(plan: ExtensionPlan) -> tuple[float, float]:
    """Tight frame bounds (A, B); A = B = 1 exactly for Parseval plans."""
    ratios = [
        (end - start) / w
        for (_, w), (start, end) in zip(plan.measure.atoms, plan.intervals)
    ]
    ratios += [1.0 / h for _, _, h in plan.measure.pieces]
    return min(ratios), max(ratios)


# ---------------------------------------------------------------------------
# Separated singular/absolutely-continuous duals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExamplecaseDual:
    """Dual data for a measure whose atoms and density live in disjoint intervals.

    i1 inflates the hull of the atoms, i2 the hull of the density support,
    each side by one third of the distance to the nearest obstruction (the
    other interval or the endpoints of [0,1]). triangle is the Kaczmarz
    auxiliary triangle of the normalized atomic part, of order aux_order.
    """

    measure: CircleMeasure
    i1: tuple
    i2: tuple
    triangle: CoefficientTriangle
    aux_order: int

    @property
    def singular_part(self) -> CircleMeasure:
        return self.measure.atomic_part()

    @property
    def reciprocal_density(self) -> tuple:
        return tuple((a, b, 1.0 / h) for a, b, h in self.measure.pieces)


def _inflate(interval, other, factor=1.0 / 3.0):
    p, q = interval
    lo, hi = other
    left_edge = hi if hi <= p else 0.0
    right_edge = lo if lo >= q else 1.0
    return (p - factor * (p - left_edge), q + factor * (right_edge - q))


def build_examplecase_dual(measure: CircleMeasure, aux_order: int) -> ExamplecaseDual:
    """Inflate the two supports and build the singular auxiliary triangle."""
    if measure.has_cantor:
        raise ValueError("separated duals require a purely atomic singular part")
    if not measure.atoms or not measure.pieces:
        raise ValueError("measure needs both an atomic part and a density part")
    for _, _, h in measure.pieces:
        if not h > 0.0:
            raise ValueError("density must be bounded below on its support")
    a = min(x for x, _ in measure.atoms)
    b = max(x for x, _ in measure.atoms)
    c = min(p for p, _, _ in measure.pieces)
    d = max(q for _, q, _ in measure.pieces)
    if a <= 0.0 or c <= 0.0:
        raise NotSeparated("both supports must stay away from 0")
    if not (b < c or d < a):
        raise NotSeparated(f"supports [{a},{b}] and [{c},{d}] are not disjoint")
    i1 = _inflate((a, b), (c, d))
    i2 = _inflate((c, d), (a, b))
    singular = measure.atomic_part()
    table = MomentTable.from_measure(singular, aux_order)
    triangle = auxiliary_sequence(table, aux_order)
    return ExamplecaseDual(
        measure=measure, i1=i1, i2=i2, triangle=triangle, aux_order=aux_order
    )


def singular_analysis(dual: ExamplecaseDual, f: FunctionSpec) -> np.ndarray:
    """One-sided coefficients <f, h_n> of the atomic part, n = 0..aux_order."""
    return analysis_coefficients(dual.triangle, dual.singular_part, f)


def analysis_coefficients_examplecase(
    dual: ExamplecaseDual, f: FunctionSpec, order: int
) -> np.ndarray:
    """Coefficients <A(f) chi_I1 + f chi_supp, e_n>_Lebesgue for n = -order..order."""
    if order > dual.aux_order:
        raise TruncationOrder(
            f"order {order} exceeds the dual's analysis truncation {dual.aux_order}"
        )
    h = singular_analysis(dual, f)
    # part one: coefficients of the localized trig polynomial sum_j h_j e_j chi_I1;
    # entry n = sum_j h_j * K(n - j) with K the interval integral over I1.
    u, v = dual.i1
    q_min = -order - dual.aux_order
    kernel = interval_exp_integral(np.arange(q_min, order + 1), u, v)
    conv = np.convolve(h, kernel)
    c1 = conv[-q_min - order : -q_min + order + 1]
    # part two: plain Fourier coefficients of f restricted to the density support
    restricted = _restrict_to_pieces(f, dual.measure.pieces)
    ns = np.arange(-order, order + 1)
    c2 = analysis_inner_products(_LEBESGUE, restricted, ns)
    return c1 + c2


def reconstruct_examplecase(
    dual: ExamplecaseDual, f: FunctionSpec, order: int
) -> ReconstructionReport:
    """Error report of the symmetric partial sum against the full measure."""
    coeffs = analysis_coefficients_examplecase(dual, f, order)
    return _reconstruction_report(dual.measure, coeffs, order, f)


def bessel_pythagoras_check(
    dual: ExamplecaseDual, f: FunctionSpec, order: int
) -> tuple[float, float]:
    """(truncated coefficient sum, exact split norm); lhs <= rhs always.

    rhs = ||A(f) chi_I1||^2 + ||f chi_supp||^2 over Lebesgue measure, with
    A(f) materialized at the dual's analysis truncation.
    """
    coeffs = analysis_coefficients_examplecase(dual, f, order)
    lhs = float(np.sum(np.abs(coeffs) ** 2))
    h = singular_analysis(dual, f)
    u, v = dual.i1
    i1_measure = CircleMeasure(pieces=((u, v, 1.0),))
    part1 = trig_norm_sq(i1_measure, h, 0)
    restricted = _restrict_to_pieces(f, dual.measure.pieces)
    part2 = norm_sq(_LEBESGUE, restricted)
    return lhs, part1 + part2


# ---------------------------------------------------------------------------
# Non-representability witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    """Least-squares obstruction data for a Lebesgue-null target."""

    atom_mismatch: float
    lebesgue_norm_sq: float
    distance_sq: float
    regularized: bool = False


RIDGE = 1e-12


def nonrepresentability_witness(
    measure: CircleMeasure, target: FunctionSpec, order: int
) -> WitnessReport:
    """Best symmetric trig polynomial of degree <= order approximating the target.

    Solves the dense (2*order+1)^2 Gram system for min ||p - target||^2_mu and
    reports how the minimizer trades atom agreement against Lebesgue norm.
    A numerically singular Gram system is re-solved with a 1e-12 ridge and
    flagged in the report rather than raised.
    """
    ns = np.arange(-order, order + 1)
    window = moments(measure, np.arange(-2 * order, 2 * order + 1))
    idx = np.subtract.outer(ns, ns) + 2 * order
    gram = window[idx]
    rhs = analysis_inner_products(measure, target, ns)
    regularized = False
    try:
        sol = np.linalg.solve(gram, rhs)
        ok = np.all(np.isfinite(sol)) and (
            np.linalg.norm(gram @ sol - rhs) <= 1e-8 * max(1.0, np.linalg.norm(rhs))
        )
    except np.linalg.LinAlgError:
        ok = False
    if not ok:
        regularized = True
        sol = np.linalg.solve(gram + RIDGE * np.eye(len(ns)), rhs)
    mismatch = 0.0
    for x, val in target.atom_values:
        mismatch += abs(trig_eval(sol, -order, x) - val)
    leb_norm = float(np.sum(np.abs(sol) ** 2))
    dist = trig_distance_sq(measure, sol, -order, target)
    return WitnessReport(
        atom_mismatch=mismatch,
        lebesgue_norm_sq=leb_norm,
        distance_sq=dist,
        regularized=regularized,
    )

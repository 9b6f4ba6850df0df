"""Expansions for atomic measures on the real line.

Covers periodization onto the circle, effective lattice expansions with an
incommensurate frequency, disintegration into integer slices with a marginal
measure, the double-indexed expansion whose inner index runs over the slice
exponentials e^{2 pi i n x} and outer index over the marginal exponentials
e^{i m k}, and the decay table showing why weighted exponentials on an
unbounded lattice never admit a lower frame bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderTooLarge, ZeroMass
from .kaczmarz import (
    CoefficientTriangle,
    auxiliary_sequence,
    coefficients_from_inner_products,
)
from .measures import ATOM_TOL, CircleMeasure, MomentTable

MARGINAL_FREQUENCY_STEP = 1.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class RealAtomicMeasure:
    """Finite positive atomic measure on the real line."""

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple(sorted((float(y), float(w)) for y, w in self.atoms))
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("measure needs at least one atom")
        for y, w in atoms:
            if not w > 0.0:
                raise ValueError(f"atom weight {w} must be positive")
        for (y1, _), (y2, _) in zip(atoms, atoms[1:]):
            if y2 - y1 <= ATOM_TOL:
                raise ValueError(f"atom positions {y1} and {y2} coincide")

    @property
    def total_mass(self) -> float:
        return sum(w for _, w in self.atoms)

    def to_dict(self) -> dict:
        return {"atoms": [{"y": y, "w": w} for y, w in self.atoms]}


def _cluster(pairs):
    """Merge (position, weight) pairs whose positions agree within ATOM_TOL."""
    merged = []
    for pos, w in sorted(pairs):
        if merged and pos - merged[-1][0] <= ATOM_TOL:
            merged[-1][1] += w
        else:
            merged.append([pos, w])
    return tuple((p, w) for p, w in merged)


def periodize(measure: RealAtomicMeasure, period: float) -> CircleMeasure:
    """Fold the measure into [0,1) by x -> (x mod period)/period, mass preserved."""
    if not period > 0.0:
        raise ValueError("period must be positive")
    folded = _cluster(((y % period) / period, w) for y, w in measure.atoms)
    # wrap positions that landed within tolerance of 1 back onto 0
    cleaned = []
    for pos, w in folded:
        cleaned.append((0.0 if pos >= 1.0 - ATOM_TOL else pos, w))
    return CircleMeasure(atoms=_cluster(cleaned))


# ---------------------------------------------------------------------------
# Lattice expansions with frequencies n / c
# ---------------------------------------------------------------------------

def lattice_inner_products(
    measure: RealAtomicMeasure, c: float, values, orders: int
) -> tuple[np.ndarray, float]:
    """(phi, norm): phi[k] = <f, e^{2 pi i k x / c}> and ||f||^2, both normalized."""
    mass = measure.total_mass
    ys = np.array([y for y, _ in measure.atoms])
    ws = np.array([w for _, w in measure.atoms]) / mass
    vals = np.asarray(values, dtype=complex)
    if len(vals) != len(ys):
        raise ValueError("need one function value per atom")
    ks = np.arange(orders + 1)
    phases = np.exp(-2j * np.pi * np.outer(ks, ys) / c)
    phi = phases @ (ws * vals)
    return phi, float(np.sum(ws * np.abs(vals) ** 2))


def lattice_effective_expansion(
    measure: RealAtomicMeasure, c: float, orders, values
) -> tuple[CoefficientTriangle, list[tuple[int, float]]]:
    """Auxiliary triangle for the frequencies {n/c} plus a defect table.

    c is caller-chosen and must not be a rational multiple of the lattice
    spacing for the expansion to be complete; sqrt(2) times the spacing is a
    reasonable default. Near-rational choices degrade convergence without
    raising. Returns rows (N, defect) for each requested truncation order.
    """
    if not c > 0.0:
        raise ValueError("frequency scale c must be positive")
    orders = [int(n) for n in orders]
    top = max(orders)
    mass = measure.total_mass
    if not mass > 0.0:
        raise ZeroMass("measure has no mass")
    ys = np.array([y for y, _ in measure.atoms])
    ws = np.array([w for _, w in measure.atoms]) / mass

    def generalized_moment(q: int) -> complex:
        return complex(np.sum(ws * np.exp(-2j * np.pi * q * ys / c)))

    table = MomentTable.from_callable(generalized_moment, top, frequency_step=1.0 / c)
    triangle = auxiliary_sequence(table, top)
    phi, norm = lattice_inner_products(measure, c, values, top)
    coeffs = coefficients_from_inner_products(triangle, phi)
    sums = np.cumsum(np.abs(coeffs) ** 2)
    rows = []
    for order in orders:
        defect = norm - float(sums[order])
        rows.append((order, 0.0 if -1e-12 < defect < 0.0 else defect))
    return triangle, rows


# ---------------------------------------------------------------------------
# Slice disintegration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SliceSystem:
    """Integer-slice disintegration of an atomic measure on the line.

    keys[i] is an occupied integer k, weights[i] = mu([k, k+1)) unnormalized,
    and slices[i] is the conditional probability measure on [0,1) carrying
    the fractional parts of the atoms in that slice.
    """

    keys: tuple
    weights: tuple
    slices: tuple
    total_mass: float

    @property
    def marginal_weights(self) -> np.ndarray:
        return np.asarray(self.weights) / self.total_mass

    def marginal_moment(self, q: int) -> complex:
        """m(q) = sum_k w_k e^{-i q k} over the normalized marginal."""
        ks = np.asarray(self.keys, dtype=float)
        return complex(np.sum(self.marginal_weights * np.exp(-1j * q * ks)))

    def reassemble(self) -> RealAtomicMeasure:
        atoms = []
        for k, w, gamma in zip(self.keys, self.weights, self.slices):
            for x, rel in gamma.atoms:
                atoms.append((k + x, w * rel))
        return RealAtomicMeasure(atoms=tuple(atoms))


def disintegrate(measure: RealAtomicMeasure) -> SliceSystem:
    """Split into marginal weights on Z and per-slice probability measures."""
    buckets: dict[int, list] = {}
    for y, w in measure.atoms:
        k = math.floor(y)
        buckets.setdefault(k, []).append((y - k, w))
    keys = tuple(sorted(buckets))
    weights = tuple(sum(w for _, w in buckets[k]) for k in keys)
    slices = tuple(
        CircleMeasure(atoms=tuple((x, w / wk) for x, w in buckets[k]))
        for k, wk in zip(keys, weights)
    )
    return SliceSystem(
        keys=keys, weights=weights, slices=slices, total_mass=measure.total_mass
    )


def _slice_values(system: SliceSystem, values) -> list[np.ndarray]:
    """Group the per-atom values of f by slice, aligned with each slice's atoms."""
    vals = np.asarray(values, dtype=complex)
    measure = system.reassemble()
    if len(vals) != len(measure.atoms):
        raise ValueError("need one function value per atom (sorted by position)")
    out = []
    pos = 0
    for gamma in system.slices:
        n = len(gamma.atoms)
        out.append(vals[pos : pos + n])
        pos += n
    return out


def double_expansion_coefficients(
    system: SliceSystem, values, inner_order: int, outer_order: int
) -> np.ndarray:
    """Coefficient matrix c[n, m], inner slice index n <= N, marginal index m <= M.

    values lists f at the atoms of the reassembled measure in sorted order.
    Inner functionals h_n(k) = <f(.+k), g_n^k> use each slice's auxiliary
    triangle; outer coefficients pair h_n with the marginal auxiliary
    triangle built on the integer-argument exponentials e^{i m k}.
    """
    grouped = _slice_values(system, values)
    ks = np.asarray(system.keys, dtype=float)
    wk = system.marginal_weights
    n_slices = len(system.keys)
    h = np.zeros((inner_order + 1, n_slices), dtype=complex)
    for i, (gamma, vals) in enumerate(zip(system.slices, grouped)):
        table = MomentTable.from_measure(gamma, inner_order)
        triangle = auxiliary_sequence(table, inner_order)
        xs = np.array([x for x, _ in gamma.atoms])
        rel = np.array([w for _, w in gamma.atoms])
        phases = np.exp(-2j * np.pi * np.outer(np.arange(inner_order + 1), xs))
        phi = phases @ (rel * vals)
        h[:, i] = coefficients_from_inner_products(triangle, phi)

    marginal_table = MomentTable.from_callable(
        system.marginal_moment, outer_order, frequency_step=MARGINAL_FREQUENCY_STEP
    )
    marginal_triangle = auxiliary_sequence(marginal_table, outer_order)
    # psi[j, n] = <h_n, eps_j> with eps_j(k) = e^{i j k}
    phases = np.exp(-1j * np.outer(np.arange(outer_order + 1), ks))
    psi = phases @ (wk[:, None] * h.T)
    return (np.conj(marginal_triangle.rows) @ psi).T


def double_norm_sq(system: SliceSystem, values) -> float:
    """||f||^2 against the normalized measure."""
    vals = np.asarray(values, dtype=complex)
    ws = np.array([w for _, w in system.reassemble().atoms]) / system.total_mass
    return float(np.sum(ws * np.abs(vals) ** 2))


def double_parseval_defect(
    system: SliceSystem, values, inner_order: int, outer_order: int
) -> float:
    """||f||^2 - sum_{n<=N, m<=M} |c[n,m]|^2, clamped at 0 within 1e-12."""
    coeffs = double_expansion_coefficients(system, values, inner_order, outer_order)
    defect = double_norm_sq(system, values) - float(np.sum(np.abs(coeffs) ** 2))
    return 0.0 if -1e-12 < defect < 0.0 else defect


def double_defect_table(
    system: SliceSystem, values, inner_orders, outer_orders
) -> list[tuple[int, int, float]]:
    """Rows (N, M, defect) over the grid of requested truncations."""
    inner_orders = [int(n) for n in inner_orders]
    outer_orders = [int(m) for m in outer_orders]
    coeffs = double_expansion_coefficients(
        system, values, max(inner_orders), max(outer_orders)
    )
    norm = double_norm_sq(system, values)
    grid = np.cumsum(np.cumsum(np.abs(coeffs) ** 2, axis=0), axis=1)
    rows = []
    for n in inner_orders:
        for m in outer_orders:
            defect = norm - float(grid[n, m])
            rows.append((n, m, 0.0 if -1e-12 < defect < 0.0 else defect))
    return rows


# ---------------------------------------------------------------------------
# Weighted exponentials on an unbounded lattice
# ---------------------------------------------------------------------------

def weighted_bessel_decay(a_values, c_values) -> np.ndarray:
    """Frame functional a_n * sum_k c_k^2 on the unit vector at lattice site n.

    a_values are the measure weights along the lattice (indexing the table),
    c_values the square-summable exponential weights, both as finite
    truncations. Entries tend to 0 whenever a_n does, which is the whole
    obstruction to a lower frame bound.
    """
    a = np.asarray(a_values, dtype=float)
    c = np.asarray(c_values, dtype=float)
    if np.any(a <= 0.0) or np.any(c < 0.0):
        raise ValueError("lattice weights must be positive, c entries nonnegative")
    return a * float(np.sum(c**2))


def weighted_frame_functional(a_values, c_values, n: int) -> float:
    """Same entry evaluated the long way, with the actual lattice phases.

    The measure sits on 2*pi*Z, so <f_n, c_k e^{2 pi i k x}> picks up the
    phase e^{-i (2 pi k)(2 pi n)}; the squared modulus kills it, which is
    what the closed form exploits.
    """
    a = np.asarray(a_values, dtype=float)
    c = np.asarray(c_values, dtype=float)
    ks = np.arange(len(c))
    inner = np.sqrt(a[n]) * c * np.exp(-1j * (2.0 * np.pi * ks) * (2.0 * np.pi * n))
    return float(np.sum(np.abs(inner) ** 2))

"""Kaczmarz auxiliary sequences for stationary exponential families.

Given moments muhat of a probability measure, the auxiliary sequence is the
monic triangular recursion

    g_0 = e_0,    g_n = e_n - sum_{k<n} <e_n, e_k> g_k,

with <e_n, e_k> = muhat(k - n). All diagnostics here (analysis coefficients,
Parseval defect, reconstruction residual) are computed with respect to the
measure normalized to unit mass; the triangle records the original mass as
``scale`` so callers can undo the normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OrderTooLarge, ZeroMass
from .measures import (
    CircleMeasure,
    FunctionSpec,
    MomentTable,
    analysis_inner_products,
    norm_sq,
    trig_norm_sq,
)

DEFAULT_ORDER_CAP = 4096


@dataclass(frozen=True)
class CoefficientTriangle:
    """Rows of the auxiliary sequence: g_n = sum_{k<=n} rows[n,k] e_k.

    rows is dense lower-triangular with unit diagonal. frequency_step is the
    base frequency multiplier of the exponentials the rows refer to; scale is
    the total mass of the source measure (1 after internal normalization).
    """

    rows: np.ndarray = field(repr=False)
    frequency_step: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        self.rows.flags.writeable = False

    @property
    def order(self) -> int:
        return self.rows.shape[0] - 1

    def row(self, n: int) -> np.ndarray:
        return self.rows[n, : n + 1]


def auxiliary_sequence(
    moments: MomentTable, order: int, order_cap: int = DEFAULT_ORDER_CAP
) -> CoefficientTriangle:
    """Build the auxiliary triangle of the given order from cached moments."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order > order_cap:
        raise OrderTooLarge(f"order {order} exceeds cap {order_cap}")
    if order > moments.order:
        raise OrderTooLarge(
            f"order {order} exceeds cached moment window {moments.order}"
        )
    mass = moments.mass
    if not mass > 0.0:
        raise ZeroMass("moment table has no mass at frequency 0")
    values = moments.values / mass
    center = moments.order
    rows = np.zeros((order + 1, order + 1), dtype=complex)
    rows[0, 0] = 1.0
    for n in range(1, order + 1):
        # weights muhat(k - n) for k = 0..n-1
        w = values[center - n : center]
        rows[n, :n] = -(w @ rows[:n, :n])
        rows[n, n] = 1.0
    return CoefficientTriangle(
        rows=rows, frequency_step=moments.frequency_step, scale=mass
    )


def coefficients_from_inner_products(
    triangle: CoefficientTriangle, phi: np.ndarray
) -> np.ndarray:
    """<f, g_n> from the vector phi[k] = <f, e_k>, both in the normalized space."""
    phi = np.asarray(phi, dtype=complex)
    n = triangle.order + 1
    if len(phi) < n:
        raise ValueError("need inner products <f, e_k> for every k <= order")
    return np.conj(triangle.rows) @ phi[:n]


def analysis_coefficients(
    triangle: CoefficientTriangle, measure: CircleMeasure, f: FunctionSpec
) -> np.ndarray:
    """Sequence <f, g_n> for n = 0..order, in the normalized probability space."""
    ks = np.arange(triangle.order + 1)
    phi = analysis_inner_products(measure, f, ks) / triangle.scale
    return coefficients_from_inner_products(triangle, phi)


def _clamp_defect(value: float) -> float:
    if -1e-12 < value < 0.0:
        return 0.0
    return value


def _residual_from(
    measure: CircleMeasure,
    coeffs: np.ndarray,
    phi: np.ndarray,
    total: float,
    scale: float,
) -> float:
    cross = float(np.sum(np.conj(coeffs) * phi).real)
    partial = trig_norm_sq(measure, coeffs, 0) / scale
    return _clamp_defect(total - 2.0 * cross + partial)


def parseval_defect(
    measure: CircleMeasure,
    triangle: CoefficientTriangle,
    f: FunctionSpec,
    order: int | None = None,
) -> float:
    """||f||^2 - sum_{n<=order} |<f, g_n>|^2 (normalized measure), clamped at 0."""
    order = triangle.order if order is None else order
    coeffs = analysis_coefficients(triangle, measure, f)[: order + 1]
    total = norm_sq(measure, f) / triangle.scale
    return _clamp_defect(total - float(np.sum(np.abs(coeffs) ** 2)))


def reconstruction_residual(
    measure: CircleMeasure,
    triangle: CoefficientTriangle,
    f: FunctionSpec,
    order: int | None = None,
) -> float:
    """||f - sum_{k<=order} <f, g_k> e_k||^2 via moment quadratic forms."""
    order = triangle.order if order is None else order
    ks = np.arange(order + 1)
    phi = analysis_inner_products(measure, f, ks) / triangle.scale
    coeffs = np.conj(triangle.rows[: order + 1, : order + 1]) @ phi
    total = norm_sq(measure, f) / triangle.scale
    return _residual_from(measure, coeffs, phi, total, triangle.scale)


def defect_table(
    measure: CircleMeasure,
    triangle: CoefficientTriangle,
    f: FunctionSpec,
    orders,
) -> list[tuple[int, float, float]]:
    """Rows (N, defect, residual) for each requested truncation order."""
    orders = [int(n) for n in orders]
    top = max(orders)
    if top > triangle.order:
        raise OrderTooLarge(
            f"requested order {top} exceeds triangle order {triangle.order}"
        )
    ks = np.arange(top + 1)
    phi = analysis_inner_products(measure, f, ks) / triangle.scale
    coeffs = np.conj(triangle.rows[: top + 1, : top + 1]) @ phi
    total = norm_sq(measure, f) / triangle.scale
    sums = np.cumsum(np.abs(coeffs) ** 2)
    rows = []
    for order in orders:
        defect = _clamp_defect(total - float(sums[order]))
        residual = _residual_from(
            measure, coeffs[: order + 1], phi[: order + 1], total, triangle.scale
        )
        rows.append((order, defect, residual))
    return rows

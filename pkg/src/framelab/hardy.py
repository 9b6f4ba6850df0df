"""Harmonic extensions to the disk, Cauchy transforms, and frame kernels.

Coefficient sequences produced by any of the dual systems extend to harmonic
functions sum_n c_n r^{|n|} e^{2 pi i n theta} on the unit disk; the boundary
error against the generating measure recovers the reconstruction error as
r -> 1. One-sided sequences give the Cauchy transform and its normalization,
and finite frame families in coordinates carry the frame operator, the
reproducing kernel of their analytic image, and a least-squares test for a
bounded shift g_n -> g_{n+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotAFrame, ZeroMass
from .measures import (
    CircleMeasure,
    FunctionSpec,
    analysis_inner_products,
    trig_distance_sq,
)

# Kernel evaluation refuses arguments this close to the boundary so that the
# dropped geometric tail stays certified.
DISK_RADIUS_LIMIT = 0.999
FRAME_EIGENVALUE_FLOOR = 1e-10


@dataclass(frozen=True)
class DiskSeries:
    """Harmonic series on the disk with coefficients on n = n_min..n_min+len-1."""

    coeffs: np.ndarray = field(repr=False)
    n_min: int = 0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", coeffs)
        coeffs.flags.writeable = False

    @property
    def order(self) -> int:
        return self.n_min + len(self.coeffs) - 1

    def coefficient(self, n: int) -> complex:
        if self.n_min <= n <= self.order:
            return complex(self.coeffs[n - self.n_min])
        return 0.0j

    def evaluate(self, r: float, theta: float) -> complex:
        ns = self.n_min + np.arange(len(self.coeffs))
        radial = np.power(float(r), np.abs(ns))
        return complex(np.sum(self.coeffs * radial * np.exp(2j * np.pi * ns * theta)))

    def evaluate_z(self, z: complex) -> complex:
        """Value at z for one-sided series (n_min >= 0), summing c_n z^n."""
        if self.n_min < 0:
            raise ValueError("evaluate_z applies to one-sided series only")
        powers = z ** (self.n_min + np.arange(len(self.coeffs)))
        return complex(np.sum(self.coeffs * powers))

    def square_sums(self) -> np.ndarray:
        """Partial sums of |c_n|^2 by truncation order, for Bessel diagnostics."""
        return np.cumsum(np.abs(self.coeffs) ** 2)


def cauchy_series(measure: CircleMeasure, f: FunctionSpec, order: int) -> DiskSeries:
    """Cauchy transform: one-sided series with coefficients <f, e_n>, n = 0..order."""
    ns = np.arange(order + 1)
    return DiskSeries(coeffs=analysis_inner_products(measure, f, ns), n_min=0)


def normalized_cauchy_series(
    measure: CircleMeasure, f: FunctionSpec, order: int
) -> DiskSeries:
    """Normalized Cauchy transform via power-series division by the transform of 1.

    The leading denominator coefficient is the total mass; zeros of the
    denominator inside the disk surface as large division coefficients and
    are the caller's concern, not handled here.
    """
    num = cauchy_series(measure, f, order).coeffs
    den = cauchy_series(measure, FunctionSpec.constant(1.0), order).coeffs
    if not abs(den[0]) > 0.0:
        raise ZeroMass("measure has zero mass; cannot normalize")
    out = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        acc = num[n]
        if n:
            acc = acc - np.sum(out[:n] * den[n:0:-1])
        out[n] = acc / den[0]
    return DiskSeries(coeffs=out, n_min=0)


def disk_extension(coeffs: np.ndarray, n_min: int, r: float, theta: float) -> complex:
    """Evaluate sum_n c_n r^{|n|} e^{2 pi i n theta} from a raw coefficient array."""
    return DiskSeries(coeffs=np.asarray(coeffs, dtype=complex), n_min=n_min).evaluate(
        r, theta
    )


def boundary_error(
    measure: CircleMeasure,
    coeffs: np.ndarray,
    n_min: int,
    f: FunctionSpec,
    r: float,
) -> float:
    """||sum_n c_n r^{|n|} e_n - f||^2 in L^2(mu); at r = 1 the reconstruction error."""
    c = np.asarray(coeffs, dtype=complex)
    ns = n_min + np.arange(len(c))
    scaled = c * np.power(float(r), np.abs(ns))
    return trig_distance_sq(measure, scaled, n_min, f)


# ---------------------------------------------------------------------------
# Finite frame families in coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteFrameFamily:
    """Vectors g_0..g_L in d complex coordinates, stored as rows of a matrix."""

    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        object.__setattr__(self, "vectors", mat)
        mat.flags.writeable = False

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def orthonormal(cls, dimension: int, count: int) -> "FiniteFrameFamily":
        return cls(vectors=np.eye(count, dimension))

    def gram(self) -> np.ndarray:
        """G[n, k] = <g_n, g_k>."""
        return self.vectors @ np.conj(self.vectors.T)

    def smallest_frame_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(frame_operator(self))[0])

    def is_parseval(self, tol: float = 1e-10) -> bool:
        s = frame_operator(self)
        return bool(np.max(np.abs(s - np.eye(self.dimension))) <= tol)


def frame_operator(family: FiniteFrameFamily) -> np.ndarray:
    """S = sum_n g_n g_n^*, self-adjoint positive semidefinite."""
    v = family.vectors
    return v.T @ np.conj(v)


def _require_frame(family: FiniteFrameFamily) -> np.ndarray:
    s = frame_operator(family)
    if np.linalg.eigvalsh(s)[0] <= FRAME_EIGENVALUE_FLOOR:
        raise NotAFrame("frame operator is not invertible at the working tolerance")
    return s


def _kernel_matrix(family: FiniteFrameFamily, truncation: int | None) -> np.ndarray:
    """Q[k, n] = <S^{-1} g_n, g_k> over the first `truncation` family members."""
    s = _require_frame(family)
    v = family.vectors if truncation is None else family.vectors[: truncation + 1]
    return np.conj(v) @ np.linalg.solve(s, v.T)


def _check_disk_argument(name: str, z: complex):
    if abs(z) >= DISK_RADIUS_LIMIT:
        raise ValueError(
            f"|{name}| = {abs(z):.4f} too close to the boundary; "
            f"kernel tails are certified only for |{name}| < {DISK_RADIUS_LIMIT}"
        )


def reproducing_kernel_eval(
    family: FiniteFrameFamily, w: complex, z: complex, truncation: int | None = None
) -> complex:
    """K_w(z) = sum_{k,n} <S^{-1} g_n, g_k> conj(w)^n z^k over the family."""
    _check_disk_argument("w", w)
    _check_disk_argument("z", z)
    q = _kernel_matrix(family, truncation)
    count = q.shape[0]
    wpow = np.conj(w) ** np.arange(count)
    zpow = z ** np.arange(count)
    return complex(zpow @ q @ wpow)


def analytic_image_coefficients(family: FiniteFrameFamily, f: np.ndarray) -> np.ndarray:
    """Coefficients <f, g_n> of the analytic image of f."""
    f = np.asarray(f, dtype=complex)
    return np.conj(family.vectors) @ f


def kernel_reproduces(
    family: FiniteFrameFamily, f: np.ndarray, w: complex
) -> tuple[complex, complex]:
    """(direct value at w, kernel pairing); equal when the family is a frame.

    lhs sums <f, g_n> w^n directly; rhs pairs the image's coefficients with
    the kernel's coefficients in the square-summable disk pairing.
    """
    _check_disk_argument("w", w)
    coeffs = analytic_image_coefficients(family, f)
    powers = w ** np.arange(family.count)
    lhs = complex(np.sum(coeffs * powers))
    q = _kernel_matrix(family, None)
    kernel_coeffs = q @ np.conj(powers)  # K_hat[k] = sum_n Q[k,n] conj(w)^n
    rhs = complex(np.sum(coeffs * np.conj(kernel_coeffs)))
    return lhs, rhs


def shift_residual(family: FiniteFrameFamily) -> tuple[float, float]:
    """Least-squares misfit of a single matrix T with T g_n = g_{n+1} for all n.

    Returns (sum of squared residual norms, operator 2-norm of the minimizer).
    Zero residual certifies shift-compatibility at this truncation; a positive
    residual certifies that no exact shift map exists.
    """
    if family.count < 2:
        raise ValueError("need at least two vectors to test the shift relation")
    a = family.vectors[:-1].T  # columns g_0..g_{L-1}
    b = family.vectors[1:].T  # columns g_1..g_L
    solution, *_ = np.linalg.lstsq(a.T, b.T, rcond=None)
    t = solution.T
    residual = float(np.linalg.norm(t @ a - b) ** 2)
    if residual < 1e-300:
        residual = 0.0
    operator_norm = float(np.linalg.norm(t, 2))
    return residual, operator_norm


def family_from_measure(
    measure: CircleMeasure, order: int, kind: str = "auxiliary"
) -> FiniteFrameFamily:
    """Represent the first order+1 auxiliary (or exponential) vectors in
    orthonormal coordinates of span{e_0..e_order} under the measure's Gram.

    Null directions of the Gram (rank-deficient spans over atomic measures)
    are dropped, so the coordinate dimension equals the numerical rank.
    """
    from .kaczmarz import auxiliary_sequence
    from .measures import MomentTable, moments

    window = moments(measure, np.arange(-order, order + 1))
    idx = np.subtract.outer(np.arange(order + 1), np.arange(order + 1)) + order
    gram = window[idx]  # gram[j, k] = <e_k, e_j> = muhat(j - k)
    vals, vecs = np.linalg.eigh(gram)
    keep = vals > max(1e-12 * vals[-1], 1e-300)
    # coordinates phi(u) = diag(sqrt(l)) V^H u give <u, v> = phi(v)^H phi(u)
    basis = np.sqrt(vals[keep])[:, None] * np.conj(vecs[:, keep].T)
    if kind == "exponential":
        coeff_rows = np.eye(order + 1, dtype=complex)
    elif kind == "auxiliary":
        table = MomentTable.from_measure(measure, order)
        coeff_rows = auxiliary_sequence(table, order).rows
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    return FiniteFrameFamily(vectors=coeff_rows @ basis.T)

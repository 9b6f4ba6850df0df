"""Measures on [0,1) and test functions with closed-form Fourier data.

A measure is a sum of finitely many atoms, a piecewise-constant density, and
an optional Cantor-type singular-continuous component. A test function is a
finite combination of modulated interval indicators, optionally overridden
pointwise at atom locations. Every inner product, norm, and Fourier moment
of these objects is evaluated in closed form; numerical quadrature exists
only as an independent oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CantorRestriction, SpecParseError

TWO_PI = 2.0 * math.pi

# Product factors cos(pi*n/3^j) with |pi*n/3^j| below this cutoff are
# replaced by 1; the dropped tail multiplies the result by 1 + O(cutoff^2).
CANTOR_FACTOR_CUTOFF = 1e-8

# Two atom locations closer than this are treated as the same point.
ATOM_TOL = 1e-12


def _as_complex(value) -> complex:
    return complex(value)


@dataclass(frozen=True)
class CircleMeasure:
    """Finite nonnegative Borel measure on [0,1).

    atoms: ((location, weight), ...), distinct locations in [0,1), weights > 0.
    pieces: ((start, end, height), ...), disjoint subintervals of [0,1] with
        nonnegative constant heights, kept sorted by start.
    cantor_weight: mass placed on the unit-mass ternary Cantor-type measure
        whose Fourier coefficients are ``cantor_fourier``.
    """

    atoms: tuple = ()
    pieces: tuple = ()
    cantor_weight: float = 0.0

    def __post_init__(self):
        atoms = tuple(sorted((float(x), float(w)) for x, w in self.atoms))
        pieces = tuple(sorted((float(a), float(b), float(h)) for a, b, h in self.pieces))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "cantor_weight", float(self.cantor_weight))
        for x, w in atoms:
            if not 0.0 <= x < 1.0:
                raise ValueError(f"atom location {x} outside [0,1)")
            if not w > 0.0:
                raise ValueError(f"atom weight {w} must be positive")
        for (x1, _), (x2, _) in zip(atoms, atoms[1:]):
            if x2 - x1 <= ATOM_TOL:
                raise ValueError(f"atom locations {x1} and {x2} coincide")
        for a, b, h in pieces:
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"density piece [{a},{b}) is not a subinterval of [0,1)")
            if h < 0.0:
                raise ValueError(f"density height {h} must be nonnegative")
        for (_, b1, _), (a2, _, _) in zip(pieces, pieces[1:]):
            if a2 < b1 - ATOM_TOL:
                raise ValueError("density pieces overlap")
        if self.cantor_weight < 0.0:
            raise ValueError("cantor weight must be nonnegative")
        if not self.total_mass > 0.0:
            raise ValueError("measure must have positive total mass")

    @property
    def total_mass(self) -> float:
        return (
            sum(w for _, w in self.atoms)
            + sum(h * (b - a) for a, b, h in self.pieces)
            + self.cantor_weight
        )

    @property
    def has_cantor(self) -> bool:
        return self.cantor_weight > 0.0

    @classmethod
    def lebesgue(cls) -> "CircleMeasure":
        return cls(pieces=((0.0, 1.0, 1.0),))

    def atomic_part(self) -> "CircleMeasure":
        if not self.atoms:
            raise ValueError("measure has no atoms")
        return CircleMeasure(atoms=self.atoms)

    def continuous_part(self) -> "CircleMeasure":
        return CircleMeasure(pieces=self.pieces, cantor_weight=self.cantor_weight)

    def normalized(self) -> "CircleMeasure":
        m = self.total_mass
        return CircleMeasure(
            atoms=tuple((x, w / m) for x, w in self.atoms),
            pieces=tuple((a, b, h / m) for a, b, h in self.pieces),
            cantor_weight=self.cantor_weight / m,
        )

    def to_dict(self) -> dict:
        return {
            "atoms": [{"x": x, "w": w} for x, w in self.atoms],
            "pieces": [{"a": a, "b": b, "h": h} for a, b, h in self.pieces],
            "cantor": self.cantor_weight,
        }


@dataclass(frozen=True)
class FunctionSpec:
    """Finite combination of modulated interval indicators with atom overrides.

    terms: ((frequency, u, v, coefficient), ...) where each term denotes
        coefficient * exp(2*pi*i*frequency*x) on [u, v) and 0 elsewhere.
    atom_values: ((location, value), ...) pointwise overrides that replace
        the term formula exactly at those locations.
    """

    terms: tuple = ()
    atom_values: tuple = ()

    def __post_init__(self):
        terms = tuple(
            (int(m), float(u), float(v), _as_complex(c)) for m, u, v, c in self.terms
        )
        values = tuple((float(x), _as_complex(v)) for x, v in self.atom_values)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "atom_values", values)
        for m, u, v, _ in terms:
            if not (0.0 <= u < v <= 1.0):
                raise ValueError(f"term interval [{u},{v}) is not a subinterval of [0,1)")
        for x, _ in values:
            if not 0.0 <= x < 1.0:
                raise ValueError(f"atom-value location {x} outside [0,1)")

    @classmethod
    def zero(cls) -> "FunctionSpec":
        return cls()

    @classmethod
    def constant(cls, value=1.0) -> "FunctionSpec":
        return cls(terms=((0, 0.0, 1.0, value),))

    @classmethod
    def exponential(cls, frequency: int, coefficient=1.0, interval=(0.0, 1.0)) -> "FunctionSpec":
        return cls(terms=((frequency, interval[0], interval[1], coefficient),))

    @classmethod
    def indicator(cls, start: float, end: float, coefficient=1.0) -> "FunctionSpec":
        return cls(terms=((0, start, end, coefficient),))

    def with_atom_values(self, values) -> "FunctionSpec":
        items = values.items() if isinstance(values, dict) else values
        return FunctionSpec(terms=self.terms, atom_values=tuple(items))

    def override_at(self, x: float):
        """Return the explicit override at x, or None."""
        for ax, av in self.atom_values:
            if abs(ax - x) <= ATOM_TOL:
                return av
        return None

    @property
    def is_trig_polynomial(self) -> bool:
        return all(u == 0.0 and v == 1.0 for _, u, v, _ in self.terms)

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"m": m, "u": u, "v": v, "re": c.real, "im": c.imag}
                for m, u, v, c in self.terms
            ],
            "atomValues": [
                {"x": x, "re": v.real, "im": v.imag} for x, v in self.atom_values
            ],
        }


def evaluate(f: FunctionSpec, x: float) -> complex:
    """Pointwise value of f at x in [0,1); atom overrides take precedence."""
    override = f.override_at(x)
    if override is not None:
        return override
    total = 0.0 + 0.0j
    for m, u, v, c in f.terms:
        if u <= x < v:
            total += c * np.exp(2j * np.pi * m * x)
    return complex(total)


def interval_exp_integral(q, u: float, v: float):
    """Integral of exp(-2*pi*i*q*x) over [u, v) for integer q (scalar or array)."""
    q = np.asarray(q)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    out = np.empty(q.shape, dtype=complex)
    zero = q == 0
    out[zero] = v - u
    nz = ~zero
    if np.any(nz):
        qa = q[nz]
        out[nz] = (np.exp(-2j * np.pi * qa * u) - np.exp(-2j * np.pi * qa * v)) / (
            2j * np.pi * qa
        )
    return complex(out[0]) if scalar else out


def cantor_fourier(q):
    """Fourier coefficients of the unit-mass Cantor-type component.

    chat(q) = exp(-i*pi*q) * prod_{j>=1} cos(pi*q/3^j), with factors whose
    argument falls below CANTOR_FACTOR_CUTOFF replaced by 1.
    """
    q = np.asarray(q, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    prod = np.ones(q.shape)
    amax = float(np.max(np.abs(q), initial=0.0))
    pow3 = 3.0
    while math.pi * amax / pow3 >= CANTOR_FACTOR_CUTOFF:
        arg = np.pi * q / pow3
        prod *= np.where(np.abs(arg) >= CANTOR_FACTOR_CUTOFF, np.cos(arg), 1.0)
        pow3 *= 3.0
    out = np.exp(-1j * np.pi * q) * prod
    return complex(out[0]) if scalar else out


def moments(measure: CircleMeasure, ns) -> np.ndarray:
    """Fourier moments muhat(n) = integral of exp(-2*pi*i*n*x) dmu, vectorized."""
    ns = np.atleast_1d(np.asarray(ns))
    out = np.zeros(ns.shape, dtype=complex)
    for x, w in measure.atoms:
        out += w * np.exp(-2j * np.pi * ns * x)
    for a, b, h in measure.pieces:
        if h != 0.0:
            out += h * interval_exp_integral(ns, a, b)
    if measure.has_cantor:
        out += measure.cantor_weight * cantor_fourier(ns)
    return out


def moment(measure: CircleMeasure, n: int) -> complex:
    """Single Fourier moment muhat(n)."""
    return complex(moments(measure, [int(n)])[0])


def _require_trig_term(measure: CircleMeasure, u: float, v: float):
    if measure.has_cantor and not (u == 0.0 and v == 1.0):
        raise CantorRestriction(
            "terms paired with a Cantor component must live on the full interval [0,1)"
        )


def analysis_inner_products(measure: CircleMeasure, f: FunctionSpec, ns) -> np.ndarray:
    """<f, e_n>_mu = integral of f(x) exp(-2*pi*i*n*x) dmu, vectorized over n."""
    ns = np.atleast_1d(np.asarray(ns))
    out = np.zeros(ns.shape, dtype=complex)
    for x, w in measure.atoms:
        val = evaluate(f, x)
        if val != 0:
            out += w * val * np.exp(-2j * np.pi * ns * x)
    for m, u, v, c in f.terms:
        if c == 0:
            continue
        _require_trig_term(measure, u, v)
        for a, b, h in measure.pieces:
            lo, hi = max(u, a), min(v, b)
            if lo < hi and h != 0.0:
                out += c * h * interval_exp_integral(ns - m, lo, hi)
        if measure.has_cantor:
            out += c * measure.cantor_weight * cantor_fourier(ns - m)
    return out


def inner_product(measure: CircleMeasure, f: FunctionSpec, g: FunctionSpec) -> complex:
    """Sesquilinear <f, g>_mu, atoms evaluated pointwise with overrides."""
    total = 0.0 + 0.0j
    for x, w in measure.atoms:
        total += w * evaluate(f, x) * np.conj(evaluate(g, x))
    for mf, uf, vf, cf in f.terms:
        if cf == 0:
            continue
        _require_trig_term(measure, uf, vf)
        for mg, ug, vg, cg in g.terms:
            if cg == 0:
                continue
            _require_trig_term(measure, ug, vg)
            lo, hi = max(uf, ug), min(vf, vg)
            weight = cf * np.conj(cg)
            for a, b, h in measure.pieces:
                plo, phi_ = max(lo, a), min(hi, b)
                if plo < phi_ and h != 0.0:
                    # integral of exp(2*pi*i*(mf-mg)*x) = muhat restricted at mg-mf
                    total += weight * h * interval_exp_integral(mg - mf, plo, phi_)
            if measure.has_cantor:
                total += weight * measure.cantor_weight * cantor_fourier(mg - mf)
    return complex(total)


def norm_sq(measure: CircleMeasure, f: FunctionSpec) -> float:
    """||f||^2 in L^2(mu); clamps float dust within 1e-12 below zero."""
    value = inner_product(measure, f, f).real
    if -1e-12 < value < 0.0:
        return 0.0
    return value


# ---------------------------------------------------------------------------
# Dense trigonometric polynomials: P(x) = sum_n coeffs[n - n_min] e^{2 pi i n x}
# ---------------------------------------------------------------------------

def trig_eval(coeffs: np.ndarray, n_min: int, x: float) -> complex:
    ns = n_min + np.arange(len(coeffs))
    return complex(np.sum(coeffs * np.exp(2j * np.pi * ns * x)))


def autocorrelation(coeffs: np.ndarray) -> np.ndarray:
    """rho(q) = sum_j c_j * conj(c_{j+q}) for q = -(T-1)..(T-1), FFT-based."""
    c = np.asarray(coeffs, dtype=complex)
    t = len(c)
    size = 1
    while size < 2 * t - 1:
        size *= 2
    spec = np.fft.fft(c, size)
    raw = np.fft.ifft(spec * np.conj(spec))  # raw[s] = sum_j c_{j+s} conj(c_j), circular
    rho = np.empty(2 * t - 1, dtype=complex)
    rho[t - 1 :] = np.conj(raw[:t])          # q >= 0
    rho[: t - 1] = np.conj(raw[size - t + 1 :])  # q = -(t-1)..-1
    return rho


def trig_norm_sq(measure: CircleMeasure, coeffs: np.ndarray, n_min: int = 0) -> float:
    """||P||^2 in L^2(mu) for a dense trig polynomial, via moment quadratic form."""
    c = np.asarray(coeffs, dtype=complex)
    t = len(c)
    if t == 0:
        return 0.0
    rho = autocorrelation(c)
    qs = np.arange(-(t - 1), t)
    value = float(np.real(np.sum(moments(measure, qs) * rho)))
    if -1e-12 < value < 0.0:
        return 0.0
    return value


def trig_inner_with_function(
    measure: CircleMeasure, coeffs: np.ndarray, n_min: int, f: FunctionSpec
) -> complex:
    """<P, f>_mu = sum_n c_n * conj(<f, e_n>_mu)."""
    c = np.asarray(coeffs, dtype=complex)
    ns = n_min + np.arange(len(c))
    return complex(np.sum(c * np.conj(analysis_inner_products(measure, f, ns))))


def trig_distance_sq(
    measure: CircleMeasure, coeffs: np.ndarray, n_min: int, f: FunctionSpec
) -> float:
    """||P - f||^2 in L^2(mu), clamped at 0 within 1e-12."""
    value = (
        trig_norm_sq(measure, coeffs, n_min)
        - 2.0 * trig_inner_with_function(measure, coeffs, n_min, f).real
        + norm_sq(measure, f)
    )
    if value < 0.0:
        return 0.0 if value > -1e-12 else value
    return value


# ---------------------------------------------------------------------------
# Cached moment windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    """Moments muhat(n) for |n| <= order, cached as a dense window.

    frequency_step records the base frequency multiplier of the underlying
    exponential family (1 for e^{2 pi i n x}, 1/c for a lattice family on the
    line, 1/(2 pi) for integer-argument exponentials e^{i m k}).
    """

    order: int
    values: np.ndarray = field(repr=False)
    frequency_step: float = 1.0

    def __post_init__(self):
        if len(self.values) != 2 * self.order + 1:
            raise ValueError("moment window must have length 2*order + 1")
        self.values.flags.writeable = False

    @classmethod
    def from_measure(cls, measure: CircleMeasure, order: int) -> "MomentTable":
        ns = np.arange(-order, order + 1)
        return cls(order=order, values=moments(measure, ns))

    @classmethod
    def from_callable(cls, fn, order: int, frequency_step: float = 1.0) -> "MomentTable":
        ns = np.arange(-order, order + 1)
        values = np.asarray([complex(fn(int(n))) for n in ns], dtype=complex)
        return cls(order=order, values=values, frequency_step=frequency_step)

    def value(self, n: int) -> complex:
        if abs(n) > self.order:
            raise IndexError(f"moment {n} outside cached window |n| <= {self.order}")
        return complex(self.values[n + self.order])

    @property
    def mass(self) -> float:
        return float(self.values[self.order].real)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def _field(entry: dict, key: str, where: str) -> float:
    try:
        return float(entry[key])
    except KeyError:
        raise SpecParseError(f"{where}: missing field '{key}'") from None
    except (TypeError, ValueError):
        raise SpecParseError(f"{where}: field '{key}' is not a number") from None


def measure_from_dict(data: dict) -> CircleMeasure:
    if not isinstance(data, dict):
        raise SpecParseError("measure spec: top level must be an object")
    atoms = []
    for i, entry in enumerate(data.get("atoms", []) or []):
        where = f"measure spec: atoms[{i}]"
        atoms.append((_field(entry, "x", where), _field(entry, "w", where)))
    pieces = []
    for i, entry in enumerate(data.get("pieces", []) or []):
        where = f"measure spec: pieces[{i}]"
        pieces.append(
            (_field(entry, "a", where), _field(entry, "b", where), _field(entry, "h", where))
        )
    cantor = data.get("cantor", 0.0)
    try:
        cantor = float(cantor)
    except (TypeError, ValueError):
        raise SpecParseError("measure spec: field 'cantor' is not a number") from None
    try:
        return CircleMeasure(atoms=tuple(atoms), pieces=tuple(pieces), cantor_weight=cantor)
    except ValueError as exc:
        raise SpecParseError(f"measure spec: {exc}") from None


def function_from_dict(data: dict) -> FunctionSpec:
    if not isinstance(data, dict):
        raise SpecParseError("function spec: top level must be an object")
    terms = []
    for i, entry in enumerate(data.get("terms", []) or []):
        where = f"function spec: terms[{i}]"
        terms.append(
            (
                int(_field(entry, "m", where)),
                _field(entry, "u", where),
                _field(entry, "v", where),
                complex(_field(entry, "re", where), float(entry.get("im", 0.0))),
            )
        )
    values = []
    for i, entry in enumerate(data.get("atomValues", []) or []):
        where = f"function spec: atomValues[{i}]"
        values.append(
            (
                _field(entry, "x", where),
                complex(_field(entry, "re", where), float(entry.get("im", 0.0))),
            )
        )
    try:
        return FunctionSpec(terms=tuple(terms), atom_values=tuple(values))
    except ValueError as exc:
        raise SpecParseError(f"function spec: {exc}") from None

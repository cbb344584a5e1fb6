"""Cauchy kernel and its derivatives as exact radial-rational functions.

A :class:`RadialRationalFunction` is ``pi^p * sum_j p_j(x) |x|^-(m+1+2j)`` with
exact polynomial numerators. The power of pi stays symbolic; floats only
appear in :meth:`RadialRationalFunction.evaluate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraError, AlgebraSpec
from .polynomials import AlgebraPolynomial, NumericPolynomial

__all__ = [
    "SurfaceConstant",
    "RadialRationalFunction",
    "surface_area_sigma",
    "cauchy_kernel",
    "differentiate_kernel",
    "evaluate_radial",
    "kernel_table",
]


@dataclass(frozen=True)
class SurfaceConstant:
    """Surface area ``sigma_m = rational * pi^pi_power`` of the unit sphere in R^(m+1)."""

    m: int
    rational: Fraction
    pi_power: int

    @property
    def value(self) -> float:
        return float(self.rational) * math.pi**self.pi_power

    def __str__(self) -> str:
        return f"{self.rational}*pi^{self.pi_power}"


def surface_area_sigma(m: int) -> SurfaceConstant:
    """``2 Gamma(1/2)^(m+1) / Gamma((m+1)/2)`` in exact form."""
    if m < 1:
        raise AlgebraError("m must be >= 1")
    n = m + 1
    if n % 2 == 0:
        half = n // 2
        return SurfaceConstant(m, Fraction(2, math.factorial(half - 1)), half)
    # Gamma(h + 1/2) = (2h)! sqrt(pi) / (4^h h!)
    h = (n - 1) // 2
    return SurfaceConstant(m, Fraction(2 * 4**h * math.factorial(h), math.factorial(2 * h)), h)


def _radius_squared(spec: AlgebraSpec) -> AlgebraPolynomial:
    r2 = AlgebraPolynomial.zero(spec)
    for s in range(spec.dim_hyper):
        x = AlgebraPolynomial.coordinate(spec, s)
        r2 = r2 + x * x
    return r2


class RadialRationalFunction:
    """``pi^pi_power * sum_j numerators[j](x) / |x|^(m+1+2j)``."""

    __slots__ = ("spec", "terms", "pi_power")

    def __init__(self, spec: AlgebraSpec, terms: dict[int, AlgebraPolynomial], pi_power: int = 0):
        self.spec = spec
        self.pi_power = pi_power
        self.terms = {j: p for j, p in sorted(terms.items()) if not p.is_zero()}
        if any(j < 0 for j in self.terms):
            raise AlgebraError("radial powers must be nonnegative")

    @property
    def m(self) -> int:
        return self.spec.m

    def _compatible(self, other: "RadialRationalFunction") -> None:
        if other.spec != self.spec:
            raise AlgebraError("spec mismatch")
        if other.pi_power != self.pi_power and not (self.is_zero() or other.is_zero()):
            raise AlgebraError("cannot add radial functions with different powers of pi")

    def __add__(self, other: "RadialRationalFunction") -> "RadialRationalFunction":
        if not isinstance(other, RadialRationalFunction):
            return NotImplemented
        self._compatible(other)
        terms = dict(self.terms)
        for j, p in other.terms.items():
            terms[j] = terms[j] + p if j in terms else p
        power = self.pi_power if self.terms else other.pi_power
        return RadialRationalFunction(self.spec, terms, power)

    def __neg__(self):
        return RadialRationalFunction(self.spec, {j: -p for j, p in self.terms.items()}, self.pi_power)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "RadialRationalFunction":
        return RadialRationalFunction(self.spec, {j: p.scale(r) for j, p in self.terms.items()}, self.pi_power)

    def __mul__(self, other):
        """Right multiplication by an algebra constant or rational."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return RadialRationalFunction(self.spec, {j: p * other for j, p in self.terms.items()}, self.pi_power)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return RadialRationalFunction(self.spec, {j: other * p for j, p in self.terms.items()}, self.pi_power)
        return NotImplemented

    def map_coefficients(self, fn: Callable[[AlgebraElement], AlgebraElement]) -> "RadialRationalFunction":
        return RadialRationalFunction(
            self.spec, {j: p.map_coefficients(fn) for j, p in self.terms.items()}, self.pi_power
        )

    def component(self, t: int) -> "RadialRationalFunction":
        return RadialRationalFunction(self.spec, {j: p.component(t) for j, p in self.terms.items()}, self.pi_power)

    # -- canonical form and equality ---------------------------------------

    def combined_numerator(self, top: int | None = None) -> tuple[AlgebraPolynomial, int]:
        """Single numerator over ``|x|^(m+1+2*top)``; ``top`` defaults to the max power."""
        if not self.terms:
            return AlgebraPolynomial.zero(self.spec), 0
        top = max(self.terms) if top is None else top
        r2 = _radius_squared(self.spec)
        total = AlgebraPolynomial.zero(self.spec)
        for j, p in self.terms.items():
            term = p
            for _ in range(top - j):
                term = r2 * term
            total = total + term
        return total, top

    def is_zero(self) -> bool:
        return self.combined_numerator()[0].is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialRationalFunction):
            return NotImplemented
        return (self - other).is_zero() if other.pi_power == self.pi_power or self.is_zero() or other.is_zero() else False

    __hash__ = None

    def __repr__(self) -> str:
        body = " + ".join(f"({p!r})/|x|^{self.m + 1 + 2 * j}" for j, p in self.terms.items()) or "0"
        return f"pi^{self.pi_power} * [{body}]"

    # -- calculus -----------------------------------------------------------

    def partial(self, s: int) -> "RadialRationalFunction":
        xs = AlgebraPolynomial.coordinate(self.spec, s)
        out: dict[int, AlgebraPolynomial] = {}
        base = self.m + 1
        for j, p in self.terms.items():
            d = p.partial(s)
            if not d.is_zero():
                out[j] = out[j] + d if j in out else d
            tail = (xs * p).scale(-(base + 2 * j))
            out[j + 1] = out[j + 1] + tail if j + 1 in out else tail
        return RadialRationalFunction(self.spec, out, self.pi_power)

    def partial_derivative(self, k: Sequence[int]) -> "RadialRationalFunction":
        if len(k) != self.spec.dim_hyper:
            raise AlgebraError(f"multi-index needs {self.spec.dim_hyper} slots")
        out = self
        for s, order in enumerate(k):
            for _ in range(order):
                out = out.partial(s)
        return out

    def _dbar(self, left: bool, conj: bool) -> "RadialRationalFunction":
        result = RadialRationalFunction(self.spec, {}, self.pi_power)
        for s in range(self.spec.dim_hyper):
            v = self.spec.basis(s)
            if conj and s:
                v = -v
            d = self.partial(s)
            result = result + (v * d if left else d * v)
        return result

    def apply_operator(self, op: str) -> "RadialRationalFunction":
        try:
            return RADIAL_OPERATORS[op](self)
        except KeyError:
            raise AlgebraError(f"unknown operator {op!r}") from None

    def laplacian(self) -> "RadialRationalFunction":
        result = RadialRationalFunction(self.spec, {}, self.pi_power)
        for s in range(self.spec.dim_hyper):
            result = result + self.partial(s).partial(s)
        return result

    # -- evaluation ---------------------------------------------------------

    def numerator_at(self, x: Sequence) -> tuple[AlgebraElement, int]:
        """Exact value of the combined numerator at a rational point."""
        num, top = self.combined_numerator()
        return num.evaluate(x), top

    def evaluate(self, x) -> AlgebraElement:
        arr = self.evaluate_many(np.asarray([_coords(self.spec, x)], dtype=float))[0]
        return AlgebraElement(self.spec, tuple(float(c) for c in arr))

    def numeric(self) -> Callable[[np.ndarray], np.ndarray]:
        """Vectorized float evaluator ``points (N, m+1) -> values (N, d+1)``."""
        parts = [(j, NumericPolynomial(p)) for j, p in self.terms.items()]
        scale = math.pi**self.pi_power
        base = self.m + 1
        dim = self.spec.dim_total

        def fn(points: np.ndarray) -> np.ndarray:
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            r2 = np.einsum("ij,ij->i", pts, pts)
            if np.any(r2 == 0):
                raise AlgebraError("radial-rational function evaluated at the origin")
            out = np.zeros((pts.shape[0], dim))
            for j, p in parts:
                out += p(pts) * (r2 ** (-(base + 2 * j) / 2))[:, None]
            return out * scale

        return fn

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return self.numeric()(points)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "pi_power": self.pi_power,
            "terms": [{"radial_power": j, "numerator": p.to_json()} for j, p in self.terms.items()],
        }

    @classmethod
    def from_json(cls, spec: AlgebraSpec, doc: dict) -> "RadialRationalFunction":
        terms = {}
        for item in doc["terms"]:
            p = AlgebraPolynomial.from_json(spec, item["numerator"])
            j = int(item["radial_power"])
            terms[j] = terms[j] + p if j in terms else p
        return cls(spec, terms, int(doc["pi_power"]))


def _coords(spec: AlgebraSpec, x) -> tuple:
    if isinstance(x, AlgebraElement):
        if not x.in_M():
            raise AlgebraError("point must lie in M")
        return tuple(x.coeffs[: spec.dim_hyper])
    x = tuple(x)
    if len(x) != spec.dim_hyper:
        raise AlgebraError(f"point needs {spec.dim_hyper} coordinates")
    return x


def cauchy_kernel(spec: AlgebraSpec) -> RadialRationalFunction:
    """``E(x) = x^c / (sigma_m |x|^(m+1))``."""
    return _cauchy_kernel(spec)


@lru_cache(maxsize=32)
def _cauchy_kernel(spec: AlgebraSpec) -> RadialRationalFunction:
    sigma = surface_area_sigma(spec.m)
    inv = 1 / sigma.rational
    num = AlgebraPolynomial.zero(spec)
    for s in range(spec.dim_hyper):
        sign = 1 if s == 0 else -1
        num = num + AlgebraPolynomial.coordinate(spec, s) * (spec.basis(s) * (sign * inv))
    return RadialRationalFunction(spec, {0: num}, -sigma.pi_power)


def differentiate_kernel(f: RadialRationalFunction, k: Sequence[int]) -> RadialRationalFunction:
    """``Q_k = (-1)^|k| d_k f`` (``k`` over m+1 slots)."""
    d = f.partial_derivative(k)
    return d.scale(-1) if sum(k) % 2 else d


@lru_cache(maxsize=2048)
def _q_cached(spec: AlgebraSpec, k: tuple) -> RadialRationalFunction:
    if sum(k) == 0:
        return cauchy_kernel(spec)
    s = next(i for i, a in enumerate(k) if a)
    prev = list(k)
    prev[s] -= 1
    return _q_cached(spec, tuple(prev)).partial(s).scale(-1)


def kernel_table(spec: AlgebraSpec, k: Sequence[int]) -> RadialRationalFunction:
    """Cached ``Q_k`` of the Cauchy kernel; stepwise differentiation, shared read-only."""
    k = tuple(k)
    if len(k) != spec.dim_hyper:
        raise AlgebraError(f"multi-index needs {spec.dim_hyper} slots")
    return _q_cached(spec, k)


def evaluate_radial(f: RadialRationalFunction, x) -> AlgebraElement:
    return f.evaluate(x)


RADIAL_OPERATORS = {
    "dbar_left": lambda f: f._dbar(True, False),
    "dbar_right": lambda f: f._dbar(False, False),
    "dconj_left": lambda f: f._dbar(True, True),
    "dconj_right": lambda f: f._dbar(False, True),
    "laplacian": lambda f: f.laplacian(),
}

"""Numerical Cauchy-type integral formulas over balls in M.

All algebra products follow the bracketing of the formulas: the kernel is
applied to the already-formed product ``n(y) f(y)``. Batched products run
through :meth:`AlgebraSpec.mul_arrays`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraError, AlgebraSpec
from .kernel import cauchy_kernel, kernel_table, surface_area_sigma
from .polynomials import (
    AlgebraPolynomial,
    dbar_left,
    dbar_right,
    fueter_polynomial,
    multi_indices,
)
from .quadrature import QuadratureRule, build_quadrature, focused_ball_rule

__all__ = [
    "AccuracyWarning",
    "SampledFunction",
    "integrate",
    "cauchy_integral",
    "cauchy_transform",
    "cauchy_pompeiu",
    "teodorescu",
    "pi_operator",
    "derivative_formula",
    "mean_value",
    "gauss_residual",
    "taylor_evaluate",
    "shifted_kernel_derivatives",
    "finite_difference_dbar",
    "max_modulus_check",
]

GUARD_FRACTION = 0.1


class AccuracyWarning(UserWarning):
    """Evaluation point is too close to the boundary for a fixed rule."""


class SampledFunction:
    """Deterministic algebra-valued function sampled at batches of points of M."""

    def __init__(self, spec: AlgebraSpec, evaluator: Callable[[np.ndarray], np.ndarray], domain: tuple | None = None, label: str = "f"):
        self.spec = spec
        self._evaluator = evaluator
        self.domain = domain
        self.label = label

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.asarray(self._evaluator(pts), dtype=float)
        if out.shape != (pts.shape[0], self.spec.dim_total):
            raise AlgebraError(f"evaluator returned shape {out.shape}")
        return out

    def at(self, x) -> AlgebraElement:
        return AlgebraElement(self.spec, tuple(float(c) for c in self(_coords(self.spec, x))[0]))

    @classmethod
    def from_polynomial(cls, p: AlgebraPolynomial, label: str = "p") -> "SampledFunction":
        return cls(p.spec, p.numeric(), label=label)

    @classmethod
    def from_pointwise(cls, spec: AlgebraSpec, fn: Callable, label: str = "f") -> "SampledFunction":
        """Wrap ``fn(coords) -> AlgebraElement | sequence`` evaluated one point at a time."""

        def batched(points):
            rows = []
            for pt in points:
                val = fn(tuple(pt))
                rows.append(val.to_array() if isinstance(val, AlgebraElement) else np.asarray(val, dtype=float))
            return np.array(rows).reshape(len(points), spec.dim_total)

        return cls(spec, batched, label=label)

    @classmethod
    def constant(cls, value: AlgebraElement) -> "SampledFunction":
        arr = value.to_array()
        return cls(value.spec, lambda pts: np.tile(arr, (len(pts), 1)), label="const")

    def times_right(self, a: AlgebraElement) -> "SampledFunction":
        arr = a.to_array()
        spec = self.spec
        return SampledFunction(spec, lambda pts: spec.mul_arrays(self(pts), arr), self.domain, f"{self.label}*a")


def _coords(spec: AlgebraSpec, x) -> np.ndarray:
    if isinstance(x, AlgebraElement):
        if not x.in_M():
            raise AlgebraError("point must lie in M")
        x = x.coeffs[: spec.dim_hyper]
    arr = np.asarray([float(c) for c in x])
    if arr.shape != (spec.dim_hyper,):
        raise AlgebraError(f"point needs {spec.dim_hyper} coordinates")
    return arr


def _embed(spec: AlgebraSpec, pts: np.ndarray) -> np.ndarray:
    out = np.zeros((pts.shape[0], spec.dim_total))
    out[:, : spec.dim_hyper] = pts
    return out


def _as_sampled(spec: AlgebraSpec, f) -> SampledFunction:
    if isinstance(f, SampledFunction):
        return f
    if isinstance(f, AlgebraPolynomial):
        return SampledFunction.from_polynomial(f)
    if isinstance(f, AlgebraElement):
        return SampledFunction.constant(f)
    if callable(f):
        return SampledFunction(spec, f)
    raise TypeError(f"cannot sample {type(f).__name__}")


def _weighted_sum(weights: np.ndarray, values: np.ndarray) -> np.ndarray:
    # contiguous rows so numpy reduces each component pairwise, in fixed order
    return np.ascontiguousarray((values * weights[:, None]).T).sum(axis=1)


def _element(spec: AlgebraSpec, arr: np.ndarray) -> AlgebraElement:
    return AlgebraElement(spec, tuple(float(c) for c in arr))


def _check_rule(spec: AlgebraSpec, rule: QuadratureRule) -> None:
    if rule.m != spec.m:
        raise AlgebraError(f"rule is for m={rule.m}, algebra has m={spec.m}")


def integrate(rule: QuadratureRule, f, spec: AlgebraSpec | None = None) -> AlgebraElement:
    """Componentwise integral ``sum_t w_t int f_t``."""
    if spec is None:
        spec = f.spec
    f = _as_sampled(spec, f)
    _check_rule(spec, rule)
    return _element(spec, _weighted_sum(rule.weights, f(rule.nodes)))


def _boundary_distance(rule: QuadratureRule, x: np.ndarray) -> float:
    return rule.radius - float(np.linalg.norm(x - rule.center))


def _kernel_values(spec: AlgebraSpec, diffs: np.ndarray, k: Sequence[int] | None = None) -> np.ndarray:
    kern = cauchy_kernel(spec) if k is None else kernel_table(spec, k)
    return kern.numeric()(diffs)


def _cauchy_sum(spec: AlgebraSpec, rule: QuadratureRule, fvals: np.ndarray, x: np.ndarray) -> np.ndarray:
    normals = _embed(spec, rule.normals)
    nf = spec.mul_arrays(normals, fvals)
    ker = _kernel_values(spec, rule.nodes - x)  # E_y(x) = E(y - x)
    return _weighted_sum(rule.weights, spec.mul_arrays(ker, nf))


def _guard(rule: QuadratureRule, x: np.ndarray, spec: AlgebraSpec, f: SampledFunction, what: str) -> None:
    dist = abs(_boundary_distance(rule, x))
    if dist < GUARD_FRACTION * rule.radius:
        coarse = rule.rebuild(max(4, rule.resolution // 2))
        est = float(np.linalg.norm(
            _cauchy_sum(spec, rule, f(rule.nodes), x) - _cauchy_sum(spec, coarse, f(coarse.nodes), x)
        ))
        warnings.warn(
            f"{what}: point is {dist:.3g} from the boundary (guard {GUARD_FRACTION * rule.radius:.3g}); "
            f"error estimate {est:.3g}",
            AccuracyWarning,
            stacklevel=3,
        )


def cauchy_integral(boundary_rule: QuadratureRule, f, x, spec: AlgebraSpec | None = None) -> AlgebraElement:
    """``int_{dB} E_y(x) (n(y) f(y)) dS(y)``; equals ``f(x)`` inside for left-monogenic ``f``."""
    spec = spec or f.spec
    f = _as_sampled(spec, f)
    _check_rule(spec, boundary_rule)
    if boundary_rule.kind != "sphere_surface":
        raise ValueError("cauchy_integral needs a surface rule")
    x = _coords(spec, x)
    _guard(boundary_rule, x, spec, f, "cauchy_integral")
    return _element(spec, _cauchy_sum(spec, boundary_rule, f(boundary_rule.nodes), x))


def cauchy_transform(boundary_rule: QuadratureRule, f, x, spec: AlgebraSpec | None = None) -> AlgebraElement:
    """Cauchy transform ``C[f](x)`` of boundary data, defined off the sphere."""
    return cauchy_integral(boundary_rule, f, x, spec)


def _pv_rule(volume_rule: QuadratureRule, x: np.ndarray, epsilon: float, pv: str) -> QuadratureRule:
    dist = _boundary_distance(volume_rule, x)
    if dist <= 0:
        raise ValueError("point must lie inside the ball")
    if epsilon <= 0 or epsilon >= dist / 2:
        raise ValueError(f"epsilon must satisfy 0 < epsilon < dist(x, boundary)/2 = {dist / 2:.3g}")
    if pv == "excise":
        return focused_ball_rule(volume_rule.center, volume_rule.radius, volume_rule.m, volume_rule.resolution, x, epsilon, volume_rule.seed)
    if pv == "drop":
        keep = np.linalg.norm(volume_rule.nodes - x, axis=1) >= epsilon
        return volume_rule.subset(keep)
    raise ValueError("pv must be 'excise' or 'drop'")


def _volume_kernel_sum(spec: AlgebraSpec, rule: QuadratureRule, gvals: np.ndarray, x: np.ndarray) -> np.ndarray:
    ker = _kernel_values(spec, rule.nodes - x)
    return _weighted_sum(rule.weights, spec.mul_arrays(ker, gvals))


def teodorescu(volume_rule: QuadratureRule, f, x, epsilon: float, spec: AlgebraSpec | None = None, pv: str = "excise") -> AlgebraElement:
    """Principal value ``T[f](x) = -int_{B minus B(x, eps)} E_y(x) f(y) dV(y)``.

    ``pv="excise"`` integrates over the punctured ball with a rule centred at
    ``x``; ``pv="drop"`` removes the nodes of ``volume_rule`` lying in
    ``B(x, eps)``.
    """
    spec = spec or f.spec
    f = _as_sampled(spec, f)
    _check_rule(spec, volume_rule)
    x = _coords(spec, x)
    rule = _pv_rule(volume_rule, x, epsilon, pv)
    return _element(spec, -_volume_kernel_sum(spec, rule, f(rule.nodes), x))


def cauchy_pompeiu(boundary_rule: QuadratureRule, volume_rule: QuadratureRule, f, dbar_f, x, epsilon: float, spec: AlgebraSpec | None = None, pv: str = "excise") -> AlgebraElement:
    """Boundary term minus principal-value volume term; equals ``f(x)`` for C^1 ``f``."""
    spec = spec or f.spec
    f = _as_sampled(spec, f)
    dbar_f = _as_sampled(spec, dbar_f)
    x_arr = _coords(spec, x)
    boundary = cauchy_integral(boundary_rule, f, x_arr, spec)
    rule = _pv_rule(volume_rule, x_arr, epsilon, pv)
    _check_rule(spec, rule)
    volume = _volume_kernel_sum(spec, rule, dbar_f(rule.nodes), x_arr)
    return _element(spec, boundary.to_array() - volume)


def finite_difference_dbar(fn: Callable[[np.ndarray], AlgebraElement], x, spec: AlgebraSpec, h: float = 1e-4, conjugate: bool = False, side: str = "left") -> AlgebraElement:
    """``sum_s v_s d_s fn(x)`` by central differences with one Richardson step."""
    x = _coords(spec, x)
    total = np.zeros(spec.dim_total)
    for s in range(spec.dim_hyper):
        e = np.zeros(spec.dim_hyper)
        e[s] = 1.0

        def central(step):
            return (fn(x + step * e).to_array() - fn(x - step * e).to_array()) / (2 * step)

        d = (4 * central(h / 2) - central(h)) / 3
        v = spec.basis(s).to_array()
        if conjugate and s:
            v = -v
        total += spec.mul_arrays(v, d) if side == "left" else spec.mul_arrays(d, v)
    return _element(spec, total)


def pi_operator(volume_rule: QuadratureRule, f, x, epsilon: float, spec: AlgebraSpec | None = None, h: float | None = None) -> AlgebraElement:
    """``Pi[f](x) = d_B T[f](x)`` with the conjugate operator taken by finite differences."""
    spec = spec or f.spec
    h = 1e-4 * volume_rule.radius if h is None else h
    return finite_difference_dbar(lambda p: teodorescu(volume_rule, f, p, epsilon, spec), x, spec, h, conjugate=True)


def derivative_formula(boundary_rule: QuadratureRule, f, k: Sequence[int], spec: AlgebraSpec | None = None) -> AlgebraElement:
    """``d_k f(0) = int_{dB} Q_k(y) (n(y) f(y)) dS(y)``; ``k`` over m+1 slots."""
    spec = spec or f.spec
    f = _as_sampled(spec, f)
    _check_rule(spec, boundary_rule)
    k = tuple(k)
    if len(k) != spec.dim_hyper:
        raise AlgebraError(f"multi-index needs {spec.dim_hyper} slots")
    if _boundary_distance(boundary_rule, np.zeros(spec.dim_hyper)) <= 0:
        raise ValueError("the origin must lie inside the ball")
    nf = spec.mul_arrays(_embed(spec, boundary_rule.normals), f(boundary_rule.nodes))
    q = _kernel_values(spec, boundary_rule.nodes, k)
    return _element(spec, _weighted_sum(boundary_rule.weights, spec.mul_arrays(q, nf)))


def mean_value(center, radius: float, f, spec: AlgebraSpec | None = None, resolution: int = 32) -> AlgebraElement:
    """Average of ``f`` over the sphere ``dB(center, radius)``."""
    spec = spec or f.spec
    rule = build_quadrature("sphere_surface", _coords(spec, center), radius, spec.m, resolution)
    total = integrate(rule, f, spec).to_array()
    return _element(spec, total / (surface_area_sigma(spec.m).value * radius**spec.m))


def gauss_residual(boundary_rule: QuadratureRule, volume_rule: QuadratureRule, phi: AlgebraPolynomial, f: AlgebraPolynomial, include_associator: bool = True) -> float:
    """``|int_{dB} phi (n f) dS - int_B ((phi dbar) f + phi (dbar f) - sum_s [v_s, dbar phi_s, f]) dV|``."""
    spec = phi.spec
    if not phi.is_M_valued():
        raise AlgebraError("phi must be M-valued")
    mul = spec.mul_arrays
    nb = boundary_rule.nodes
    lhs = _weighted_sum(
        boundary_rule.weights,
        mul(phi.numeric()(nb), mul(_embed(spec, boundary_rule.normals), f.numeric()(nb))),
    )
    nv = volume_rule.nodes
    fv = f.numeric()(nv)
    integrand = mul(dbar_right(phi).numeric()(nv), fv) + mul(phi.numeric()(nv), dbar_left(f).numeric()(nv))
    if include_associator:
        for s in range(spec.dim_hyper):
            g = dbar_left(phi.component(s)).numeric()(nv)
            v = spec.basis(s).to_array()
            integrand -= mul(mul(v, g), fv) - mul(v, mul(g, fv))
    rhs = _weighted_sum(volume_rule.weights, integrand)
    return float(np.linalg.norm(lhs - rhs))


def taylor_evaluate(spec: AlgebraSpec, derivs: Mapping[tuple, AlgebraElement], x, degree_cap: int) -> AlgebraElement:
    """Partial Taylor sum ``sum_{|k| <= N} P_k(x) d_k f(0)`` (``k`` over m slots)."""
    coords = tuple(float(c) for c in _coords(spec, x))
    total = np.zeros(spec.dim_total)
    for degree in range(degree_cap + 1):
        for k in multi_indices(spec.m, degree):
            if k not in derivs:
                raise KeyError(f"missing derivative for multi-index {k}")
            pk = fueter_polynomial(spec, k).evaluate(coords).to_array()
            total += spec.mul_arrays(pk, derivs[k].to_array())
    return _element(spec, total)


def shifted_kernel_derivatives(spec: AlgebraSpec, y, degree_cap: int) -> dict[tuple, AlgebraElement]:
    """``d_k f(0)`` for ``f = E(. - y)``, from the exact kernel derivatives."""
    y = _coords(spec, y)
    out = {}
    for degree in range(degree_cap + 1):
        for k in multi_indices(spec.m, degree):
            full = (0,) + k
            # d_k E = (-1)^|k| Q_k, evaluated at -y
            val = kernel_table(spec, full).numeric()(-y[None, :])[0] * (-1) ** degree
            out[k] = _element(spec, val)
    return out


@dataclass
class MaxModulusResult:
    interior_max: float
    boundary_max: float
    samples: int

    def holds(self, tol: float = 1e-9) -> bool:
        return self.interior_max <= self.boundary_max + tol


def max_modulus_check(f, spec: AlgebraSpec | None = None, samples: int = 1000, seed: int = 42, resolution: int = 48) -> MaxModulusResult:
    """Compare ``max |f|`` over random points of the closed unit ball with its sphere maximum.

    Boundary samples are the sphere rule nodes plus the radial projections of
    the interior samples.
    """
    spec = spec or f.spec
    f = _as_sampled(spec, f)
    rng = np.random.default_rng(seed)
    n = spec.dim_hyper
    g = rng.standard_normal((samples, n))
    dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    radii = rng.random(samples) ** (1.0 / n)
    interior = dirs * radii[:, None]
    rule = build_quadrature("sphere_surface", np.zeros(n), 1.0, spec.m, resolution)
    boundary = np.vstack([rule.nodes, dirs])
    imax = float(np.max(np.linalg.norm(f(interior), axis=1)))
    bmax = float(np.max(np.linalg.norm(f(boundary), axis=1)))
    return MaxModulusResult(imax, bmax, samples)

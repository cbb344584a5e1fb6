"""Static registry of verification checks driven by the command-line front end."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .algebra import AlgebraSpec, build_algebra, check_algebra_axioms, cone_membership
from .algebra import random_element
from .integration import (
    SampledFunction,
    cauchy_integral,
    cauchy_pompeiu,
    finite_difference_dbar,
    gauss_residual,
    max_modulus_check,
    mean_value,
    shifted_kernel_derivatives,
    taylor_evaluate,
    teodorescu,
)
from .kernel import cauchy_kernel
from .polynomials import (
    AlgebraPolynomial,
    all_multi_indices,
    ck_extension,
    dbar_left,
    dbar_right,
    fueter_polynomial,
    multi_factorial,
    x_power,
)
from .quadrature import build_quadrature

EXACT_ZERO = "exact-zero"
MAX_DEGREE_CAP = 6


@dataclass
class SuiteConfig:
    kind: str = "octonion"
    m: int | None = None
    checks: list[str] | None = None
    resolution: int = 32
    epsilon: float = 0.05
    seed: int = 42
    degree_cap: int = 4
    spec_file: str | None = None
    timings: bool = True

    def echo(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "resolution": self.resolution,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "degree_cap": self.degree_cap,
            "spec_file": self.spec_file,
        }


@dataclass
class CheckRecord:
    name: str
    status: str
    measured_error: float | str | None
    tolerance: float | None
    runtime_ms: float | None = None
    note: str = ""
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured_error": self.measured_error,
            "tolerance": self.tolerance,
            "runtime_ms": self.runtime_ms,
            "note": self.note,
            "details": self.details,
        }


def _exact(name: str, failures: int, note: str = "", **details) -> CheckRecord:
    if failures:
        return CheckRecord(name, "fail", float(failures), 0.0, note=note or f"{failures} nonzero residual(s)", details=details)
    return CheckRecord(name, "pass", EXACT_ZERO, 0.0, note=note, details=details)


def _numeric(name: str, error: float, tol: float, **details) -> CheckRecord:
    return CheckRecord(name, "pass" if error <= tol else "fail", float(error), tol, details=details)


# -- check-algebra ------------------------------------------------------------


@lru_cache(maxsize=16)
def _axioms_cached(spec: AlgebraSpec, seed: int):
    return check_algebra_axioms(spec, samples=64, seed=seed)


def _axioms(spec: AlgebraSpec, cfg: SuiteConfig):
    return _axioms_cached(spec, cfg.seed)


def check_alternation(spec, cfg):
    return _exact("alternation", 0 if _axioms(spec, cfg).alternation else 1)


def check_moufang(spec, cfg):
    rep = _axioms(spec, cfg)
    bad = sum(not ok for ok in rep.moufang.values())
    note = "implied-by-associativity" if rep.associative else "sampled, 64 triples"
    return _exact("moufang", bad, note=note)


def check_anti_involution(spec, cfg):
    return _exact("anti_involution", 0 if _axioms(spec, cfg).anti_involution else 1)


def check_frame(spec, cfg):
    return _exact("hypercomplex_frame", 0 if _axioms(spec, cfg).hypercomplex_frame else 1)


def check_cone(spec, cfg):
    rng = random.Random(cfg.seed)
    bad = 0
    for _ in range(100):
        x = random_element(spec, rng, in_M=True)
        rep = cone_membership(x)
        if not rep.in_cone or x.norm_q() != spec.scalar(x.abs2()):
            bad += 1
    return _exact("cone_sampling", bad, note="M inside the quadratic cone, n(x)=|x|^2")


def check_submultiplicative(spec, cfg):
    c_hat = _axioms(spec, cfg).submultiplicative_constant
    bound = 1e6
    status = "pass" if math.isfinite(c_hat) and c_hat <= bound else "fail"
    return CheckRecord("submultiplicativity", status, c_hat, bound, note="estimated constant C in |ab| <= C|a||b|")


# -- verify-monogenic ---------------------------------------------------------


def _indices(spec, cfg):
    return all_multi_indices(spec.m, cfg.degree_cap)


def check_fueter_left(spec, cfg):
    return _exact("fueter_dbar_left", sum(not dbar_left(fueter_polynomial(spec, k)).is_zero() for k in _indices(spec, cfg)))


def check_fueter_right(spec, cfg):
    return _exact("fueter_dbar_right", sum(not dbar_right(fueter_polynomial(spec, k)).is_zero() for k in _indices(spec, cfg)))


def check_ck(spec, cfg):
    bad = sum(
        ck_extension(spec, x_power(spec, k)) != fueter_polynomial(spec, k) * multi_factorial(k)
        for k in _indices(spec, cfg)
    )
    return _exact("ck_identity", bad)


def check_order(spec, cfg):
    bad = sum(
        fueter_polynomial(spec, k, "left_to_right") != fueter_polynomial(spec, k, "right_to_left")
        for k in _indices(spec, cfg)
    )
    return _exact("order_independence", bad)


def check_m_valued(spec, cfg):
    return _exact("m_valued", sum(not fueter_polynomial(spec, k).is_M_valued() for k in _indices(spec, cfg)))


def check_right_multiple(spec, cfg):
    rng = random.Random(cfg.seed)
    bad = 0
    for k in _indices(spec, cfg):
        a = random_element(spec, rng)
        if not dbar_left(fueter_polynomial(spec, k) * a).is_zero():
            bad += 1
    return _exact("right_multiple_stability", bad)


# -- reconstruct --------------------------------------------------------------


def _test_polys(spec):
    one = AlgebraPolynomial.constant(spec.one())
    polys = {"1": one}
    if spec.m >= 2:
        polys["P(1,1)"] = fueter_polynomial(spec, (1, 1) + (0,) * (spec.m - 2))
    polys["P(2)"] = fueter_polynomial(spec, (2,) + (0,) * (spec.m - 1))
    polys["CK[x1^2]"] = ck_extension(spec, x_power(spec, (2,) + (0,) * (spec.m - 1)))
    return polys


def _probes(spec, count=3, radius=0.5, seed=0):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, spec.dim_hyper))
    return g / np.linalg.norm(g, axis=1, keepdims=True) * radius


def _sphere(spec, res):
    return build_quadrature("sphere_surface", np.zeros(spec.dim_hyper), 1.0, spec.m, res)


def _ball(spec, res):
    return build_quadrature("ball_volume", np.zeros(spec.dim_hyper), 1.0, spec.m, res)


def _cauchy_error(spec, res, p, x):
    got = cauchy_integral(_sphere(spec, res), p, x).to_array()
    want = p.evaluate(tuple(x)).to_array()
    return float(np.linalg.norm(got - want) / max(1.0, np.linalg.norm(want)))


def check_cauchy_interior(spec, cfg):
    worst = 0.0
    table = {}
    for name, p in _test_polys(spec).items():
        errs = [max(_cauchy_error(spec, res, p, x) for x in _probes(spec, seed=cfg.seed)) for res in (max(4, cfg.resolution // 2), cfg.resolution)]
        table[name] = errs
        worst = max(worst, errs[-1])
    return _numeric("cauchy_interior", worst, 1e-6, convergence=table, resolutions=[max(4, cfg.resolution // 2), cfg.resolution])


def check_cauchy_exterior(spec, cfg):
    rule = _sphere(spec, cfg.resolution)
    worst = 0.0
    for p in _test_polys(spec).values():
        for x in _probes(spec, radius=2.0, seed=cfg.seed):
            worst = max(worst, float(np.linalg.norm(cauchy_integral(rule, p, x).to_array())))
    return _numeric("cauchy_exterior", worst, 1e-6)


def check_pompeiu(spec, cfg):
    f = AlgebraPolynomial.coordinate(spec, 0)
    B, V = _sphere(spec, cfg.resolution), _ball(spec, cfg.resolution)
    worst = 0.0
    for x in _probes(spec, radius=0.3, seed=cfg.seed):
        got = cauchy_pompeiu(B, V, f, dbar_left(f), x, cfg.epsilon).to_array()
        worst = max(worst, float(np.linalg.norm(got - f.evaluate(tuple(x)).to_array())))
    return _numeric("cauchy_pompeiu", worst, 1e-3)


def check_mean_value(spec, cfg):
    worst = 0.0
    center = np.zeros(spec.dim_hyper)
    center[0] = 0.1
    for p in _test_polys(spec).values():
        got = mean_value(center, 0.2, p, resolution=cfg.resolution).to_array()
        worst = max(worst, float(np.linalg.norm(got - p.evaluate(tuple(center)).to_array())))
    return _numeric("mean_value", worst, 1e-7)


def check_max_modulus(spec, cfg):
    worst = 0.0
    for p in _test_polys(spec).values():
        res = max_modulus_check(p, samples=1000, seed=cfg.seed)
        worst = max(worst, res.interior_max - res.boundary_max)
    return CheckRecord("max_modulus", "pass" if worst <= 1e-9 else "fail", max(worst, 0.0), 1e-9, note="interior max minus boundary max, clipped at 0")


def check_teodorescu(spec, cfg):
    V = _ball(spec, cfg.resolution)
    one = SampledFunction.constant(spec.one())
    worst = 0.0
    for x in _probes(spec, radius=0.3, seed=cfg.seed):
        d = finite_difference_dbar(lambda p: teodorescu(V, one, p, cfg.epsilon), x, spec, h=1e-4)
        worst = max(worst, float(np.linalg.norm(d.to_array() - spec.one().to_array())))
    return _numeric("teodorescu_inverse", worst, 5e-3)


def check_gauss(spec, cfg):
    rng = random.Random(cfg.seed)
    X = [AlgebraPolynomial.coordinate(spec, s) for s in range(spec.dim_hyper)]
    phi = AlgebraPolynomial.zero(spec)
    for s in range(spec.dim_hyper):
        for t in range(spec.dim_hyper):
            phi = phi + X[t] * spec.basis(s) * rng.randint(-2, 2)
    f = AlgebraPolynomial.constant(random_element(spec, rng))
    for t in range(spec.dim_hyper):
        f = f + X[t] * random_element(spec, rng)
    B, V = _sphere(spec, cfg.resolution), _ball(spec, cfg.resolution)
    with_term = gauss_residual(B, V, phi, f)
    without = gauss_residual(B, V, phi, f, include_associator=False)
    return _numeric("gauss_residual", with_term, 1e-6, residual_without_associator=without)


def taylor_errors(spec, y, x, degree_max):
    derivs = shifted_kernel_derivatives(spec, y, degree_max)
    exact = cauchy_kernel(spec).numeric()(np.array([x], dtype=float) - np.array(y, dtype=float))[0]
    return [
        float(np.linalg.norm(taylor_evaluate(spec, derivs, x, n).to_array() - exact))
        for n in range(degree_max + 1)
    ]


def check_taylor(spec, cfg):
    y = [0.0] * spec.dim_hyper
    x = [0.0] * spec.dim_hyper
    y[1] = 3.0
    x[2 if spec.m >= 2 else 0] = 0.5
    errs = taylor_errors(spec, y, x, 7)
    ratios = [errs[n + 1] / errs[n] for n in range(2, 7)]
    target = 0.5 / 3.0
    worst = max(max(r / target, target / r) for r in ratios)
    return CheckRecord(
        "taylor_decay",
        "pass" if worst <= 2.0 else "fail",
        worst,
        2.0,
        note="worst factor between measured ratio err(N+1)/err(N) and |x|/|y|",
        details={"errors": errs, "ratios": ratios},
    )


REGISTRY: dict[str, dict[str, Callable]] = {
    "check-algebra": {
        "alternation": check_alternation,
        "anti_involution": check_anti_involution,
        "cone_sampling": check_cone,
        "hypercomplex_frame": check_frame,
        "moufang": check_moufang,
        "submultiplicativity": check_submultiplicative,
    },
    "verify-monogenic": {
        "ck_identity": check_ck,
        "fueter_dbar_left": check_fueter_left,
        "fueter_dbar_right": check_fueter_right,
        "m_valued": check_m_valued,
        "order_independence": check_order,
        "right_multiple_stability": check_right_multiple,
    },
    "reconstruct": {
        "cauchy_exterior": check_cauchy_exterior,
        "cauchy_interior": check_cauchy_interior,
        "cauchy_pompeiu": check_pompeiu,
        "gauss_residual": check_gauss,
        "max_modulus": check_max_modulus,
        "mean_value": check_mean_value,
        "taylor_decay": check_taylor,
        "teodorescu_inverse": check_teodorescu,
    },
    "taylor-demo": {
        "taylor_decay": check_taylor,
    },
}


def run_check(name: str, fn: Callable, spec: AlgebraSpec, cfg: SuiteConfig) -> CheckRecord:
    start = time.perf_counter()
    try:
        record = fn(spec, cfg)
    except (ValueError, ArithmeticError) as exc:
        # guard violations at coarse settings are reported, not raised
        record = CheckRecord(name, "fail", None, None, note=f"{type(exc).__name__}: {exc}")
    if cfg.timings:
        record.runtime_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return record


def resolve_spec(cfg: SuiteConfig, default_m: int | None = None) -> AlgebraSpec:
    if cfg.spec_file:
        with open(cfg.spec_file) as fh:
            return AlgebraSpec.loads(fh.read())
    m = cfg.m if cfg.m is not None else default_m
    if cfg.kind == "clifford" and m is None:
        m = 2
    return build_algebra(cfg.kind, m)


"""Exact polynomials on M with algebra-valued coefficients.

A polynomial in the real coordinates ``x_0 .. x_m`` is a dict mapping exponent
tuples ``(a_0, .., a_m)`` to coefficient tuples over the algebra basis. Monomials
are real, so coefficient placement is immaterial; products with algebra
constants and between polynomials are expanded eagerly through the structure
tensor.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraError, AlgebraSpec

__all__ = [
    "AlgebraPolynomial",
    "OPERATORS",
    "apply_operator",
    "ck_extension",
    "distinct_permutations",
    "fueter_polynomial",
    "fueter_variable",
    "fueter_expansion",
    "multi_indices",
    "nested_product",
    "partial_derivative",
    "evaluate",
    "x_power",
    "multi_factorial",
    "all_multi_indices",
    "dbar_left",
    "dbar_right",
    "dconj_left",
    "dconj_right",
    "laplacian",
    "NumericPolynomial",
]

Exponent = tuple  # (a_0, .., a_m)


def _add_into(acc: dict, key, coeffs: Sequence) -> None:
    old = acc.get(key)
    if old is None:
        acc[key] = tuple(coeffs)
    else:
        acc[key] = tuple(a + b for a, b in zip(old, coeffs))


def _frac(x):
    return Fraction(x) if isinstance(x, int) else x


class AlgebraPolynomial:
    """Polynomial ``sum_a x^a c_a`` with ``c_a`` in the algebra."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebraSpec, terms: dict | None = None):
        self.spec = spec
        n = spec.dim_hyper
        clean = {}
        for exp, coeffs in (terms or {}).items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != n or min(exp) < 0:
                raise AlgebraError(f"bad exponent {exp} for {n} variables")
            if isinstance(coeffs, AlgebraElement):
                coeffs = coeffs.coeffs
            coeffs = tuple(coeffs)
            if len(coeffs) != spec.dim_total:
                raise AlgebraError("coefficient length does not match the algebra")
            if any(coeffs):
                clean[exp] = coeffs
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, spec: AlgebraSpec) -> "AlgebraPolynomial":
        return cls(spec)

    @classmethod
    def constant(cls, value: AlgebraElement | int | Fraction, spec: AlgebraSpec | None = None) -> "AlgebraPolynomial":
        if isinstance(value, AlgebraElement):
            spec = value.spec
        else:
            value = spec.scalar(value)
        return cls(spec, {(0,) * spec.dim_hyper: value.coeffs})

    @classmethod
    def coordinate(cls, spec: AlgebraSpec, s: int) -> "AlgebraPolynomial":
        """The real coordinate function ``x_s``."""
        exp = tuple(1 if i == s else 0 for i in range(spec.dim_hyper))
        return cls(spec, {exp: spec.one().coeffs})

    @classmethod
    def monomial(cls, spec: AlgebraSpec, exponents: Sequence[int], coeff: AlgebraElement | None = None) -> "AlgebraPolynomial":
        coeff = spec.one() if coeff is None else coeff
        return cls(spec, {tuple(exponents): coeff.coeffs})

    # -- arithmetic ---------------------------------------------------------

    def _same(self, other: "AlgebraPolynomial") -> None:
        if other.spec is not self.spec and other.spec != self.spec:
            raise AlgebraError(f"spec mismatch: {self.spec.name} vs {other.spec.name}")

    def _lift(self, other):
        if isinstance(other, AlgebraPolynomial):
            self._same(other)
            return other
        if isinstance(other, AlgebraElement):
            return AlgebraPolynomial.constant(other)
        if isinstance(other, (int, Fraction, float)):
            return AlgebraPolynomial.constant(other, self.spec)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(acc, k, v)
        return AlgebraPolynomial(self.spec, acc)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraPolynomial(self.spec, {k: tuple(-c for c in v) for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, r) -> "AlgebraPolynomial":
        return AlgebraPolynomial(self.spec, {k: tuple(r * c for c in v) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self.scale(other)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        mul = self.spec.mul_coeffs
        acc: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                _add_into(acc, tuple(x + y for x, y in zip(ka, kb)), mul(va, vb))
        return AlgebraPolynomial(self.spec, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self.scale(other)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self

    def __truediv__(self, r):
        return self.scale(Fraction(1) / _frac(r))

    def __eq__(self, other) -> bool:
        if isinstance(other, (AlgebraElement, int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, AlgebraPolynomial):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "AlgebraPolynomial(0)"
        parts = []
        for exp in self.sorted_exponents():
            mono = "*".join(f"x{i}^{a}" if a > 1 else f"x{i}" for i, a in enumerate(exp) if a) or "1"
            parts.append(f"{mono}*({self.spec.element(self.terms[exp])!r})")
        return " + ".join(parts)

    # -- structure ----------------------------------------------------------

    def sorted_exponents(self) -> list:
        """Exponents in graded lexicographic order."""
        return sorted(self.terms, key=lambda e: (sum(e), e))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_M_valued(self) -> bool:
        cut = self.spec.dim_hyper
        return all(not any(v[cut:]) for v in self.terms.values())

    def depends_on(self, s: int) -> bool:
        return any(e[s] for e in self.terms)

    def map_coefficients(self, fn: Callable[[AlgebraElement], AlgebraElement]) -> "AlgebraPolynomial":
        """Apply a real-linear map to every coefficient."""
        spec = self.spec
        return AlgebraPolynomial(spec, {k: fn(AlgebraElement(spec, v)).coeffs for k, v in self.terms.items()})

    def component(self, t: int) -> "AlgebraPolynomial":
        """Real-valued component ``p_t`` (coefficient of ``w_t``), as a real polynomial."""
        z = [0] * self.spec.dim_total
        out = {}
        for k, v in self.terms.items():
            if v[t]:
                c = list(z)
                c[0] = v[t]
                out[k] = c
        return AlgebraPolynomial(self.spec, out)

    def translate(self, shift: Sequence) -> "AlgebraPolynomial":
        """``x -> p(x - shift)`` for a real vector ``shift``."""
        spec = self.spec
        result = AlgebraPolynomial.zero(spec)
        lin = [AlgebraPolynomial.coordinate(spec, s) - shift[s] for s in range(spec.dim_hyper)]
        for exp, v in self.terms.items():
            term = AlgebraPolynomial.constant(AlgebraElement(spec, v))
            for s, a in enumerate(exp):
                for _ in range(a):
                    term = lin[s] * term
            result = result + term
        return result

    # -- calculus -----------------------------------------------------------

    def partial(self, s: int, order: int = 1) -> "AlgebraPolynomial":
        acc = {}
        for exp, v in self.terms.items():
            a = exp[s]
            if a < order:
                continue
            f = math.perm(a, order)
            new = exp[:s] + (a - order,) + exp[s + 1:]
            acc[new] = tuple(f * c for c in v)
        return AlgebraPolynomial(self.spec, acc)

    def evaluate(self, x: AlgebraElement | Sequence) -> AlgebraElement:
        """Exact (or float) value at a point of M given by coordinates or element."""
        spec = self.spec
        if isinstance(x, AlgebraElement):
            if not x.in_M():
                raise AlgebraError("evaluation point must lie in M")
            coords = x.coeffs[: spec.dim_hyper]
        else:
            coords = tuple(x)
        if len(coords) != spec.dim_hyper:
            raise AlgebraError(f"point needs {spec.dim_hyper} coordinates")
        out = [0] * spec.dim_total
        for exp, v in self.terms.items():
            mono = 1
            for c, a in zip(coords, exp):
                if a:
                    mono = mono * c**a
            if mono:
                for i, c in enumerate(v):
                    if c:
                        out[i] += mono * c
        return AlgebraElement(spec, out)

    __call__ = evaluate

    def numeric(self) -> "NumericPolynomial":
        return NumericPolynomial(self)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list:
        return [
            {"exponents": list(exp), "coeff": AlgebraElement(self.spec, self.terms[exp]).to_strings()}
            for exp in self.sorted_exponents()
        ]

    @classmethod
    def from_json(cls, spec: AlgebraSpec, doc: list) -> "AlgebraPolynomial":
        terms: dict = {}
        for item in doc:
            coeffs = [Fraction(c) for c in item["coeff"]]
            coeffs = [c.numerator if c.denominator == 1 else c for c in coeffs]
            _add_into(terms, tuple(item["exponents"]), coeffs)
        return cls(spec, terms)


class NumericPolynomial:
    """Vectorized float evaluator for an :class:`AlgebraPolynomial`."""

    def __init__(self, poly: AlgebraPolynomial):
        self.spec = poly.spec
        exps = poly.sorted_exponents()
        n = poly.spec.dim_hyper
        self.exponents = np.array(exps, dtype=int).reshape(len(exps), n)
        self.coeffs = np.array([[float(c) for c in poly.terms[e]] for e in exps]).reshape(
            len(exps), poly.spec.dim_total
        )

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if not len(self.exponents):
            return np.zeros((pts.shape[0], self.spec.dim_total))
        monos = np.prod(pts[:, None, :] ** self.exponents[None, :, :], axis=2)
        return monos @ self.coeffs


# -- free functions mirroring the operation list ------------------------------


def evaluate(p: AlgebraPolynomial, x) -> AlgebraElement:
    return p.evaluate(x)


def partial_derivative(p: AlgebraPolynomial, k: Sequence[int]) -> AlgebraPolynomial:
    """Iterated partials ``d^|k| / dx_0^k_0 .. dx_m^k_m``; ``k`` has m+1 slots."""
    if len(k) != p.spec.dim_hyper:
        raise AlgebraError(f"multi-index needs {p.spec.dim_hyper} slots")
    out = p
    for s, order in enumerate(k):
        if order:
            out = out.partial(s, order)
    return out


def _dbar(p: AlgebraPolynomial, left: bool, conj: bool, start: int = 0) -> AlgebraPolynomial:
    spec = p.spec
    result = AlgebraPolynomial.zero(spec)
    for s in range(start, spec.dim_hyper):
        d = p.partial(s)
        if d.is_zero():
            continue
        v = spec.basis(s)
        if conj and s > 0:
            v = -v
        result = result + (v * d if left else d * v)
    return result


def dbar_left(p):
    return _dbar(p, left=True, conj=False)


def dbar_right(p):
    return _dbar(p, left=False, conj=False)


def dconj_left(p):
    return _dbar(p, left=True, conj=True)


def dconj_right(p):
    return _dbar(p, left=False, conj=True)


def laplacian(p):
    result = AlgebraPolynomial.zero(p.spec)
    for s in range(p.spec.dim_hyper):
        result = result + p.partial(s, 2)
    return result


OPERATORS: dict[str, Callable] = {
    "dbar_left": dbar_left,
    "dbar_right": dbar_right,
    "dconj_left": dconj_left,
    "dconj_right": dconj_right,
    "laplacian": laplacian,
}


def apply_operator(op: str, p):
    """Apply a named differential operator to a polynomial or radial-rational function."""
    if not isinstance(p, AlgebraPolynomial):
        return p.apply_operator(op)
    try:
        fn = OPERATORS[op]
    except KeyError:
        raise AlgebraError(f"unknown operator {op!r}") from None
    return fn(p)


# -- Fueter machinery ---------------------------------------------------------


def fueter_variable(spec: AlgebraSpec, ell: int) -> AlgebraPolynomial:
    """``z_ell = x_ell - x_0 v_ell``."""
    if not 1 <= ell <= spec.m:
        raise AlgebraError(f"Fueter variable index must lie in 1..{spec.m}")
    return AlgebraPolynomial.coordinate(spec, ell) - AlgebraPolynomial.coordinate(spec, 0) * spec.basis(ell)


def distinct_permutations(seq: Sequence[int]) -> Iterator[tuple]:
    """Distinguishable permutations of a multiset, in lexicographic order."""
    items = sorted(seq)
    n = len(items)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(items)
        i = n - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while items[j] <= items[i]:
            j -= 1
        items[i], items[j] = items[j], items[i]
        items[i + 1:] = reversed(items[i + 1:])


def multi_indices(m: int, degree: int) -> list[tuple]:
    """All ``k`` in N^m with ``|k| = degree``, graded-lex order."""
    if m == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in multi_indices(m - 1, degree - first):
            out.append((first,) + rest)
    return out


def nested_product(factors: Sequence, bracketing=None):
    """Product of ``factors`` under a bracketing.

    ``bracketing`` is ``"right_to_left"`` (``a(b(c..))``), ``"left_to_right"``
    (``((ab)c)..``) or a nested tuple of factor positions such as
    ``((0, 1), (2, 3))``.
    """
    factors = list(factors)
    if bracketing is None or bracketing == "right_to_left":
        out = factors[-1]
        for f in reversed(factors[:-1]):
            out = f * out
        return out
    if bracketing == "left_to_right":
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def walk(node):
        if isinstance(node, int):
            return factors[node]
        left, right = node
        return walk(left) * walk(right)

    return walk(bracketing)


def fueter_polynomial(spec: AlgebraSpec, k: Sequence[int], assoc="right_to_left", right_factor: AlgebraElement | None = None) -> AlgebraPolynomial:
    """Fueter polynomial ``P_k = (1/|k|!) sum_sigma z_{i_1} .. z_{i_|k|}``.

    ``assoc`` picks the bracketing of each product (see :func:`nested_product`,
    applied to the ``|k|`` Fueter factors, plus the optional right factor).
    """
    k = tuple(k)
    if len(k) != spec.m:
        raise AlgebraError(f"multi-index needs {spec.m} slots")
    if right_factor is None and isinstance(assoc, str):
        return _fueter_cached(spec, k, assoc)
    return _fueter(spec, k, assoc, right_factor)


@lru_cache(maxsize=4096)
def _fueter_cached(spec, k, assoc):
    return _fueter(spec, k, assoc, None)


def _fueter(spec, k, assoc, right_factor):
    order = [ell + 1 for ell, count in enumerate(k) for _ in range(count)]
    total = len(order)
    if total == 0:
        base = AlgebraPolynomial.constant(spec.one())
        return base if right_factor is None else base * right_factor
    z = {ell: fueter_variable(spec, ell) for ell in set(order)}
    extra = [] if right_factor is None else [AlgebraPolynomial.constant(right_factor)]
    acc = AlgebraPolynomial.zero(spec)
    suffix_cache: dict = {}
    for perm in distinct_permutations(order):
        factors = [z[i] for i in perm] + extra
        if assoc == "right_to_left" and right_factor is None:
            acc = acc + _suffix_product(perm, z, suffix_cache)
        else:
            acc = acc + nested_product(factors, assoc)
    return acc / math.factorial(total)


def _suffix_product(perm, z, cache):
    if len(perm) == 1:
        return z[perm[0]]
    hit = cache.get(perm)
    if hit is None:
        hit = z[perm[0]] * _suffix_product(perm[1:], z, cache)
        cache[perm] = hit
    return hit


def ck_extension(spec: AlgebraSpec, f0: AlgebraPolynomial, side: str = "left") -> AlgebraPolynomial:
    """Cauchy-Kovalevskaya extension ``sum_k (-x_0)^k / k! (dbar_x)^k f0``.

    ``f0`` must not depend on ``x_0``; ``dbar_x = sum_{s>=1} v_s d_s`` acts from
    the left (``side="left"``) or the right.
    """
    if f0.spec != spec:
        raise AlgebraError("spec mismatch")
    if f0.depends_on(0):
        raise AlgebraError("CK-extension input must not depend on x_0")
    if side not in ("left", "right"):
        raise AlgebraError("side must be 'left' or 'right'")
    left = side == "left"
    x0 = AlgebraPolynomial.coordinate(spec, 0)
    result = AlgebraPolynomial.zero(spec)
    term = f0
    power = AlgebraPolynomial.constant(spec.one())
    k = 0
    while not term.is_zero():
        result = result + (power * term) / math.factorial(k)
        term = _dbar(term, left=left, conj=False, start=1)
        power = power * (-x0)
        k += 1
    return result


def fueter_expansion(p: AlgebraPolynomial, assoc="right_to_left") -> AlgebraPolynomial:
    """``sum_k P_k (d_k p)(0)`` over all ``k`` in N^m with ``|k| <= deg p``.

    Reproduces ``p`` exactly when ``p`` is a left-monogenic polynomial.
    """
    spec = p.spec
    result = AlgebraPolynomial.zero(spec)
    for degree in range(max(p.degree(), 0) + 1):
        for k in multi_indices(spec.m, degree):
            coeff = partial_derivative(p, (0,) + k).evaluate((0,) * spec.dim_hyper)
            if coeff.is_zero():
                continue
            result = result + fueter_polynomial(spec, k, assoc) * coeff
    return result


def x_power(spec: AlgebraSpec, k: Sequence[int]) -> AlgebraPolynomial:
    """The real monomial ``x_1^k_1 .. x_m^k_m``."""
    return AlgebraPolynomial.monomial(spec, (0,) + tuple(k))


def multi_factorial(k: Iterable[int]) -> int:
    return math.prod(math.factorial(a) for a in k)


def all_multi_indices(m: int, max_degree: int) -> list[tuple]:
    return [k for d in range(max_degree + 1) for k in multi_indices(m, d)]


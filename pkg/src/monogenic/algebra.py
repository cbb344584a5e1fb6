"""Finite-dimensional real alternative *-algebras given by structure constants.

An algebra is stored as a dense tensor ``c[s][t][u]`` with
``w_s * w_t = sum_u c[s][t][u] w_u`` over a fitted basis ``w_0 .. w_d`` whose
first ``m + 1`` elements ``1, v_1, .., v_m`` span the hypercomplex subspace M.

Scalars are exact (``int`` / ``Fraction``) on the rational track; the same
element class also carries ``float`` coefficients for numerical work, and
:meth:`AlgebraSpec.mul_arrays` multiplies whole batches with numpy.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlgebraError",
    "NonAlternativeError",
    "AlgebraSpec",
    "AlgebraElement",
    "AxiomReport",
    "ConeReport",
    "build_algebra",
    "cayley_dickson_double",
    "check_algebra_axioms",
    "cone_membership",
    "inverse_in_M",
    "associator",
    "SHIPPED_ALGEBRAS",
]


class AlgebraError(ValueError):
    """Raised for invalid algebra data or illegal operations on elements."""


class NonAlternativeError(AlgebraError):
    """A loaded structure tensor failed the associator alternation check."""

    def __init__(self, message: str, report: "AxiomReport"):
        super().__init__(message)
        self.report = report


def _as_rational(value) -> Fraction | int:
    if isinstance(value, bool):
        raise AlgebraError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        f = Fraction(value)
        return f.numerator if f.denominator == 1 else f
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise AlgebraError(f"structure constants must be exact rationals, got {value!r}")


def _rational_str(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


class AlgebraSpec:
    """Immutable description of an algebra together with its hypercomplex frame."""

    def __init__(
        self,
        name: str,
        structure: Sequence[Sequence[Sequence]],
        involution_sign: Sequence[int],
        dim_hyper: int,
        basis_labels: Sequence[str] | None = None,
    ):
        n = len(structure)
        if n < 2:
            raise AlgebraError("algebra must have dimension > 1")
        if any(len(row) != n or any(len(col) != n for col in row) for row in structure):
            raise AlgebraError("structure tensor must be (d+1)^3")
        if len(involution_sign) != n or any(s not in (1, -1) for s in involution_sign):
            raise AlgebraError("involution_sign must hold one +1/-1 per basis element")
        if not 2 <= dim_hyper <= n:
            raise AlgebraError("dim_hyper must satisfy 2 <= m+1 <= d+1")
        self.name = name
        self.dim_total = n
        self.dim_hyper = dim_hyper
        self.structure = tuple(
            tuple(tuple(_as_rational(c) for c in col) for col in row) for row in structure
        )
        self.involution_sign = tuple(int(s) for s in involution_sign)
        if basis_labels is None:
            basis_labels = ["1"] + [f"e{i}" for i in range(1, n)]
        self.basis_labels = tuple(basis_labels)
        # sparse products: table[s][t] -> ((u, c), ...)
        self._table = tuple(
            tuple(
                tuple((u, c) for u, c in enumerate(self.structure[s][t]) if c != 0)
                for t in range(n)
            )
            for s in range(n)
        )
        self.tensor = np.array(
            [[[float(c) for c in col] for col in row] for row in self.structure]
        )
        self.tensor.setflags(write=False)
        self.signs = np.array(self.involution_sign, dtype=float)
        self.signs.setflags(write=False)
        self._validate_unity()

    @property
    def m(self) -> int:
        return self.dim_hyper - 1

    def _validate_unity(self) -> None:
        n = self.dim_total
        for t in range(n):
            for u in range(n):
                want = 1 if t == u else 0
                if self.structure[0][t][u] != want or self.structure[t][0][u] != want:
                    raise AlgebraError(f"{self.name}: basis element 0 is not a two-sided unity")
        if self.involution_sign[0] != 1:
            raise AlgebraError(f"{self.name}: the unity must be self-conjugate")

    # -- elements -----------------------------------------------------------

    def element(self, coeffs: Iterable) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (0,) * self.dim_total)

    def one(self) -> "AlgebraElement":
        return self.basis(0)

    def scalar(self, r) -> "AlgebraElement":
        return AlgebraElement(self, (r,) + (0,) * (self.dim_total - 1))

    def basis(self, s: int) -> "AlgebraElement":
        if not 0 <= s < self.dim_total:
            raise AlgebraError(f"basis index {s} out of range")
        return AlgebraElement(self, tuple(1 if i == s else 0 for i in range(self.dim_total)))

    def point(self, coords: Sequence) -> "AlgebraElement":
        """The element ``sum_s coords[s] v_s`` of M."""
        if len(coords) != self.dim_hyper:
            raise AlgebraError(f"point needs {self.dim_hyper} coordinates, got {len(coords)}")
        return AlgebraElement(self, tuple(coords) + (0,) * (self.dim_total - self.dim_hyper))

    # -- raw coefficient arithmetic ----------------------------------------

    def mul_coeffs(self, a: Sequence, b: Sequence) -> tuple:
        out = [0] * self.dim_total
        table = self._table
        for s, x in enumerate(a):
            if not x:
                continue
            row = table[s]
            for t, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for u, c in row[t]:
                    out[u] += c * xy
        return tuple(out)

    def conj_coeffs(self, a: Sequence) -> tuple:
        return tuple(x if sg == 1 else -x for x, sg in zip(a, self.involution_sign))

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched float product; ``a`` and ``b`` broadcast over leading axes."""
        return np.einsum("...s,...t,stu->...u", a, b, self.tensor, optimize=True)

    def conj_arrays(self, a: np.ndarray) -> np.ndarray:
        return a * self.signs

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        n = self.dim_total
        flat = [
            _rational_str(self.structure[s][t][u])
            for s in range(n)
            for t in range(n)
            for u in range(n)
        ]
        return {
            "name": self.name,
            "dim_total": n,
            "dim_hyper": self.dim_hyper,
            "structure": flat,
            "involution_sign": list(self.involution_sign),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc: dict, *, require_alternative: bool = True) -> "AlgebraSpec":
        try:
            n = int(doc["dim_total"])
            flat = doc["structure"]
            if len(flat) != n**3:
                raise AlgebraError(f"structure has {len(flat)} entries, expected {n**3}")
            structure = [
                [[flat[(s * n + t) * n + u] for u in range(n)] for t in range(n)]
                for s in range(n)
            ]
            spec = cls(
                str(doc["name"]),
                structure,
                doc["involution_sign"],
                int(doc["dim_hyper"]),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, AlgebraError):
                raise
            raise AlgebraError(f"malformed algebra document: {exc}") from exc
        if require_alternative:
            report = check_algebra_axioms(spec, samples=0)
            if not report.alternation:
                raise NonAlternativeError(f"{spec.name}: associator is not alternating", report)
        return spec

    @classmethod
    def loads(cls, text: str, **kwargs) -> "AlgebraSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise AlgebraError("algebra document must be a JSON object")
        return cls.from_json(doc, **kwargs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.dim_hyper == other.dim_hyper
            and self.structure == other.structure
            and self.involution_sign == other.involution_sign
        )

    def __hash__(self) -> int:
        return hash((self.name, self.dim_total, self.dim_hyper))

    def __repr__(self) -> str:
        return f"AlgebraSpec({self.name!r}, d+1={self.dim_total}, m={self.m})"


class AlgebraElement:
    """A value ``sum_s coeffs[s] w_s``; immutable, hashable on the exact track."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: AlgebraSpec, coeffs: Iterable):
        coeffs = tuple(coeffs)
        if len(coeffs) != spec.dim_total:
            raise AlgebraError(f"expected {spec.dim_total} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _check(self, other: "AlgebraElement") -> None:
        if other.spec is not self.spec and other.spec != self.spec:
            raise AlgebraError(f"spec mismatch: {self.spec.name} vs {other.spec.name}")

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, float, Fraction)):
            return self.spec.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return AlgebraElement(self.spec, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return AlgebraElement(self.spec, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return AlgebraElement(self.spec, (-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return AlgebraElement(self.spec, (a * other for a in self.coeffs))
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.spec, self.spec.mul_coeffs(self.coeffs, other.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return AlgebraElement(self.spec, (other * a for a in self.coeffs))
        return NotImplemented

    def __truediv__(self, r):
        if isinstance(r, int):
            r = Fraction(r)
        if not isinstance(r, (float, Fraction)):
            return NotImplemented
        return AlgebraElement(self.spec, (a / r for a in self.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, Fraction)):
            other = self.spec.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = [
            f"{c}*{lab}" for c, lab in zip(self.coeffs, self.spec.basis_labels) if c != 0
        ]
        return f"<{self.spec.name}: {' + '.join(terms) or '0'}>"

    # -- *-algebra structure --------------------------------------------------

    def conjugate(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, self.spec.conj_coeffs(self.coeffs))

    def trace(self) -> "AlgebraElement":
        return self + self.conjugate()

    def norm_q(self) -> "AlgebraElement":
        return self * self.conjugate()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return not any(self.coeffs[1:])

    def in_M(self) -> bool:
        return not any(self.coeffs[self.spec.dim_hyper:])

    def abs2(self):
        """Squared Euclidean norm of the coefficient vector (exact on rationals)."""
        return sum(c * c for c in self.coeffs)

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def to_float(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, (float(c) for c in self.coeffs))

    def to_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def to_strings(self) -> list[str]:
        return [_rational_str(c) for c in self.coeffs]


def associator(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> AlgebraElement:
    """``[a, b, c] = (ab)c - a(bc)``."""
    return (a * b) * c - a * (b * c)


def inverse_in_M(x: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse ``x^c / n(x)`` of a nonzero element of M."""
    if not x.in_M():
        raise AlgebraError("inverse_in_M requires an element of the hypercomplex subspace")
    n = x.abs2()
    if n == 0:
        raise AlgebraError("zero norm element has no inverse")
    if isinstance(n, int):
        n = Fraction(n)
    return x.conjugate() / n


# -- builders -----------------------------------------------------------------


def cayley_dickson_double(spec: AlgebraSpec, name: str, dim_hyper: int | None = None) -> AlgebraSpec:
    """Double ``A`` to ``A + A l`` with ``(a,b)(c,d) = (ac - d^c b, da + b c^c)``."""
    n = spec.dim_total

    def mul(a, b):
        return spec.mul_coeffs(a, b)

    def conj(a):
        return spec.conj_coeffs(a)

    def pair_mul(p, q):
        a, b = p[:n], p[n:]
        c, d = q[:n], q[n:]
        left = tuple(x - y for x, y in zip(mul(a, c), mul(conj(d), b)))
        right = tuple(x + y for x, y in zip(mul(d, a), mul(b, conj(c))))
        return left + right

    unit = [tuple(1 if i == s else 0 for i in range(2 * n)) for s in range(2 * n)]
    structure = [[list(pair_mul(unit[s], unit[t])) for t in range(2 * n)] for s in range(2 * n)]
    signs = list(spec.involution_sign) + [-1] * n
    return AlgebraSpec(name, structure, signs, dim_hyper or 2 * n)


def _clifford(m: int) -> AlgebraSpec:
    blades = sorted(range(1 << m), key=lambda b: (bin(b).count("1"), [i for i in range(m) if b >> i & 1]))
    index = {b: i for i, b in enumerate(blades)}
    n = len(blades)

    def reorder_sign(a: int, b: int) -> int:
        # transpositions needed to sort e_A e_B into canonical order
        swaps = 0
        a >>= 1
        while a:
            swaps += bin(a & b).count("1")
            a >>= 1
        return -1 if swaps & 1 else 1

    structure = [[[0] * n for _ in range(n)] for _ in range(n)]
    for A in blades:
        for B in blades:
            sign = reorder_sign(A, B)
            if bin(A & B).count("1") & 1:  # e_i^2 = -1
                sign = -sign
            structure[index[A]][index[B]][index[A ^ B]] = sign
    signs = []
    labels = []
    for b in blades:
        k = bin(b).count("1")
        signs.append(-1 if (k * (k + 1) // 2) & 1 else 1)
        labels.append("e" + "".join(str(i + 1) for i in range(m) if b >> i & 1) if b else "1")
    return AlgebraSpec(f"clifford({m})", structure, signs, m + 1, labels)


def _dual_quaternion() -> AlgebraSpec:
    H = build_algebra("quaternion")
    n = 4

    def pair_mul(p, q):
        g1, g2 = p[:n], p[n:]
        h1, h2 = q[:n], q[n:]
        eps = tuple(x + y for x, y in zip(H.mul_coeffs(g1, h2), H.mul_coeffs(g2, h1)))
        return H.mul_coeffs(g1, h1) + eps

    unit = [tuple(1 if i == s else 0 for i in range(2 * n)) for s in range(2 * n)]
    structure = [[list(pair_mul(unit[s], unit[t])) for t in range(2 * n)] for s in range(2 * n)]
    signs = list(H.involution_sign) * 2
    labels = ["1", "i", "j", "k", "eps", "eps*i", "eps*j", "eps*k"]
    return AlgebraSpec("dual_quaternion", structure, signs, 4, labels)


def build_algebra(kind: str, m: int | None = None) -> AlgebraSpec:
    """Build one of the shipped algebras.

    ``kind`` is one of ``complex``, ``quaternion``, ``octonion``, ``clifford``,
    ``dual_quaternion``. For ``clifford`` ``m`` is the number of generators and
    M = span(1, e_1, .., e_m). For the other kinds ``m`` optionally shrinks M
    to ``span(1, e_1, .., e_m)``; the default is the largest admissible M
    (the quaternion block for dual quaternions).
    """
    if m is not None and m < 1:
        raise AlgebraError("m must be >= 1")
    if kind == "clifford":
        if m is None:
            raise AlgebraError("clifford needs m")
        return _clifford(m)
    if kind == "dual_quaternion":
        spec = _dual_quaternion()
        max_m = 3
    elif kind in ("complex", "quaternion", "octonion"):
        spec = AlgebraSpec("complex", [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]], [1, -1], 2, ["1", "i"])
        if kind != "complex":
            spec = cayley_dickson_double(spec, "quaternion")
            spec = AlgebraSpec("quaternion", spec.structure, spec.involution_sign, 4, ["1", "i", "j", "k"])
        if kind == "octonion":
            spec = cayley_dickson_double(spec, "octonion")
        max_m = spec.dim_total - 1
    else:
        raise AlgebraError(f"unsupported algebra kind {kind!r}")
    if m is None or m == spec.m:
        return spec
    if m > max_m:
        raise AlgebraError(f"{kind} supports m <= {max_m}")
    return _with_hyper(spec, m)


def _with_hyper(spec: AlgebraSpec, m: int) -> AlgebraSpec:
    name = spec.name if m == spec.m else f"{spec.name}[m={m}]"
    return AlgebraSpec(name, spec.structure, spec.involution_sign, m + 1, spec.basis_labels)


SHIPPED_ALGEBRAS = {
    "quaternion": lambda: build_algebra("quaternion"),
    "octonion": lambda: build_algebra("octonion"),
    "clifford2": lambda: build_algebra("clifford", 2),
    "clifford3": lambda: build_algebra("clifford", 3),
    "dual_quaternion": lambda: build_algebra("dual_quaternion"),
}


# -- axiom checks -------------------------------------------------------------


@dataclass
class AxiomReport:
    alternation: bool
    moufang: dict[str, bool]
    anti_involution: bool
    hypercomplex_frame: bool
    associative: bool
    submultiplicative_constant: float
    samples: int
    seed: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.alternation
            and all(self.moufang.values())
            and self.anti_involution
            and self.hypercomplex_frame
        )


@dataclass
class ConeReport:
    in_cone: bool
    trace_real: bool
    norm_real: bool
    discriminant: object


def random_element(spec: AlgebraSpec, rng: random.Random, *, in_M: bool = False, bound: int = 3) -> AlgebraElement:
    """Small random rational element, for sampled identity checks."""
    n = spec.dim_hyper if in_M else spec.dim_total
    coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, 2)) for _ in range(n)]
    return AlgebraElement(spec, coeffs + [0] * (spec.dim_total - n))


def check_algebra_axioms(spec: AlgebraSpec, samples: int = 64, seed: int = 0) -> AxiomReport:
    """Exhaustive basis checks plus sampled Moufang identities; never raises."""
    n = spec.dim_total
    basis = [spec.basis(s) for s in range(n)]
    failures: list[str] = []

    assoc = [[[associator(basis[a], basis[b], basis[c]) for c in range(n)] for b in range(n)] for a in range(n)]
    alternation = True
    associative = True
    for a in range(n):
        for b in range(n):
            for c in range(n):
                A = assoc[a][b][c]
                if not A.is_zero():
                    associative = False
                if A != -assoc[b][a][c] or A != -assoc[a][c][b]:
                    alternation = False
                    failures.append(f"alternation fails on basis triple {(a, b, c)}")
                if (a == b or b == c or a == c) and not A.is_zero():
                    alternation = False
                    failures.append(f"associator nonzero on repeated triple {(a, b, c)}")

    anti = True
    for s in range(n):
        for t in range(n):
            lhs = (basis[s] * basis[t]).conjugate()
            rhs = basis[t].conjugate() * basis[s].conjugate()
            if lhs != rhs:
                anti = False
                failures.append(f"(ab)^c != b^c a^c for basis pair {(s, t)}")

    frame = True
    for s in range(1, spec.dim_hyper):
        v = basis[s]
        if not v.trace().is_zero() or v.norm_q() != spec.one():
            frame = False
            failures.append(f"v_{s} is not an imaginary unit")
        for t in range(1, spec.dim_hyper):
            if s != t and not (v * basis[t].conjugate()).trace().is_zero():
                frame = False
                failures.append(f"t(v_{s} v_{t}^c) != 0")

    rng = random.Random(seed)
    moufang = {"a(b(ac))=(aba)c": True, "((ab)c)b=a(bcb)": True, "(ab)(ca)=a(bc)a": True}
    c_hat = 1.0
    for _ in range(samples):
        a, b, c = (random_element(spec, rng) for _ in range(3))
        if a * (b * (a * c)) != ((a * b) * a) * c:
            moufang["a(b(ac))=(aba)c"] = False
        if ((a * b) * c) * b != a * ((b * c) * b):
            moufang["((ab)c)b=a(bcb)"] = False
        if (a * b) * (c * a) != (a * (b * c)) * a:
            moufang["(ab)(ca)=a(bc)a"] = False
        x = random_element(spec, rng, in_M=True)
        y = random_element(spec, rng)
        if not x.is_zero() and not y.is_zero():
            c_hat = max(c_hat, abs(x * y) / (abs(x) * abs(y)))
    for key, ok in moufang.items():
        if not ok:
            failures.append(f"Moufang identity {key} fails on a sample")

    return AxiomReport(
        alternation=alternation,
        moufang=moufang,
        anti_involution=anti,
        hypercomplex_frame=frame,
        associative=associative,
        submultiplicative_constant=c_hat,
        samples=samples,
        seed=seed,
        failures=failures,
    )


def cone_membership(x: AlgebraElement) -> ConeReport:
    t = x.trace()
    n = x.norm_q()
    disc = n * 4 - t * t
    trace_real, norm_real = t.is_real(), n.is_real()
    d0 = disc.coeffs[0]
    in_cone = x.is_real() or (trace_real and norm_real and d0 > 0)
    return ConeReport(in_cone=in_cone, trace_real=trace_real, norm_real=norm_real, discriminant=d0)

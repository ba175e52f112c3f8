"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis {1, zeta, ..., zeta^(phi(n)-1)} with
fully reduced rational coefficients, so structural equality coincides with
field equality and values are safely hashable.  Mixed-conductor operands are
embedded into Q(zeta_lcm) first; no conductor minimization is attempted
afterwards.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Coefficient domain: arbitrary-precision rationals with gcd-reduced,
# positive-denominator canonical form.
BigRational = Fraction


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class CycPolynomial:
    """Dense univariate polynomial over Q, coefficients in ascending degree."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_ints(coeffs: Iterable[int]) -> "CycPolynomial":
        return CycPolynomial(_trim(tuple(Fraction(c) for c in coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "CycPolynomial") -> "CycPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return CycPolynomial(_trim(tuple(out)))

    def __neg__(self) -> "CycPolynomial":
        return CycPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CycPolynomial") -> "CycPolynomial":
        return self + (-other)

    def __mul__(self, other: "CycPolynomial") -> "CycPolynomial":
        if self.is_zero() or other.is_zero():
            return CycPolynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return CycPolynomial(_trim(tuple(out)))

    def divmod(self, other: "CycPolynomial") -> tuple["CycPolynomial", "CycPolynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        div = other.coeffs
        lead = div[-1]
        if len(rem) < len(div):
            return CycPolynomial(()), CycPolynomial(_trim(tuple(rem)))
        quot = [Fraction(0)] * (len(rem) - len(div) + 1)
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + len(div) - 1] / lead
            quot[k] = c
            if c:
                for j, d in enumerate(div):
                    rem[k + j] -= c * d
        return CycPolynomial(_trim(tuple(quot))), CycPolynomial(_trim(tuple(rem)))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


def _trim(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    k = len(coeffs)
    while k and not coeffs[k - 1]:
        k -= 1
    return coeffs[:k]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> CycPolynomial:
    """The n-th cyclotomic polynomial Phi_n: monic, integral, degree phi(n).

    Computed by dividing x^n - 1 by the product of Phi_d over proper
    divisors d of n.
    """
    if n < 1:
        raise ValueError(f"cyclotomic_polynomial requires n >= 1, got {n}")
    if n == 1:
        return CycPolynomial.from_ints([-1, 1])
    xn_minus_1 = CycPolynomial.from_ints([-1] + [0] * (n - 1) + [1])
    denom = CycPolynomial.from_ints([1])
    for d in _divisors(n):
        if d < n:
            denom = denom * cyclotomic_polynomial(d)
    quot, rem = xn_minus_1.divmod(denom)
    assert rem.is_zero() and quot.is_integral()
    return quot


class _Context:
    """Per-conductor reduction data: power basis images of zeta^k mod Phi_n."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        poly = cyclotomic_polynomial(n)
        self.poly_ints = tuple(int(c) for c in poly.coeffs)
        # powmat[k] = integer coefficient vector of x^k mod Phi_n, 0 <= k < n
        pm = np.zeros((n, self.phi), dtype=object)
        for k in range(min(self.phi, n)):
            pm[k, k] = 1
        # iterate x^k -> x^(k+1), subtracting the monic modulus on overflow
        cur = [0] * self.phi
        cur[self.phi - 1] = 1
        for k in range(self.phi, n):
            lead = cur[self.phi - 1]
            nxt = [0] + cur[:-1]
            if lead:
                for j in range(self.phi):
                    nxt[j] -= lead * self.poly_ints[j]
            pm[k] = nxt
            cur = nxt
        self.powmat = pm
        self.powmat_i64 = pm.astype(np.int64) if self._fits_i64(pm) else None
        # rows for reducing x^k with phi <= k < n (products of reduced
        # elements have degree < 2*phi - 1 < n for every even conductor,
        # and for odd n we fold exponents mod n first)
        self.red = pm[self.phi:] if n > self.phi else pm[:0]
        self.red_i64 = self.red.astype(np.int64) if self._fits_i64(self.red) else None
        self.red_max = int(max((abs(int(v)) for v in self.red.flat), default=0))
        # conjugation matrix: basis image of zeta^(-k)
        conj = np.zeros((self.phi, self.phi), dtype=object)
        for k in range(self.phi):
            conj[k] = pm[(n - k) % n]
        self.conjmat = conj
        self.conjmat_i64 = conj.astype(np.int64) if self._fits_i64(conj) else None

    @staticmethod
    def _fits_i64(arr: np.ndarray) -> bool:
        return all(abs(int(v)) < 2**62 for v in arr.flat)


@lru_cache(maxsize=None)
def _context(n: int) -> _Context:
    return _Context(n)


def _reduce_dense(n: int, dense: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a coefficient list(indexed by power of zeta_n) mod Phi_n."""
    ctx = _context(n)
    out = [Fraction(0)] * ctx.phi
    folded: dict[int, Fraction] = {}
    for k, c in enumerate(dense):
        if c:
            folded[k % n] = folded.get(k % n, Fraction(0)) + c
    for k, c in folded.items():
        if not c:
            continue
        if k < ctx.phi:
            out[k] += c
        else:
            row = ctx.powmat[k]
            for j in range(ctx.phi):
                if row[j]:
                    out[j] += c * int(row[j])
    return tuple(out)


class CycNumber:
    """An element of Q(zeta_n) in reduced power-basis form."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Sequence[Fraction]):
        phi = _context(conductor).phi
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {conductor}, got {len(coeffs)}")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *args):
        raise AttributeError("CycNumber is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(conductor: int = 1) -> "CycNumber":
        return CycNumber(conductor, [Fraction(0)] * _context(conductor).phi)

    @staticmethod
    def one(conductor: int = 1) -> "CycNumber":
        return CycNumber.from_rational(Fraction(1), conductor)

    @staticmethod
    def from_rational(q, conductor: int = 1) -> "CycNumber":
        phi = _context(conductor).phi
        coeffs = [Fraction(0)] * phi
        coeffs[0] = Fraction(q)
        return CycNumber(conductor, coeffs)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def embed(self, conductor: int) -> "CycNumber":
        """Embed into Q(zeta_m) for a multiple m of the conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of conductor {self.conductor}")
        step = conductor // self.conductor
        dense = [Fraction(0)] * (self.conductor * step)
        for k, c in enumerate(self.coeffs):
            if c:
                dense[k * step] += c
        return CycNumber(conductor, _reduce_dense(conductor, dense))

    @staticmethod
    def _common(a: "CycNumber", b: "CycNumber") -> tuple["CycNumber", "CycNumber"]:
        if a.conductor == b.conductor:
            return a, b
        m = math.lcm(a.conductor, b.conductor)
        return a.embed(m), b.embed(m)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "CycNumber":
        other = _coerce(other, self.conductor)
        a, b = CycNumber._common(self, other)
        return CycNumber(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycNumber":
        return CycNumber(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "CycNumber":
        return self + (-_coerce(other, self.conductor))

    def __rsub__(self, other) -> "CycNumber":
        return _coerce(other, self.conductor) - self

    def __mul__(self, other) -> "CycNumber":
        other = _coerce(other, self.conductor)
        a, b = CycNumber._common(self, other)
        phi = len(a.coeffs)
        dense = [Fraction(0)] * (2 * phi - 1 if phi else 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        dense[i + j] += x * y
        return CycNumber(a.conductor, _reduce_dense(a.conductor, dense))

    __rmul__ = __mul__

    def invert(self) -> "CycNumber":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("invert(0) in cyclotomic field")
        ctx = _context(self.conductor)
        mod = CycPolynomial.from_ints(ctx.poly_ints)
        a = CycPolynomial(_trim(self.coeffs))
        # invariants: r0 = s0*a mod Phi, r1 = s1*a mod Phi
        r0, r1 = mod, a
        s0, s1 = CycPolynomial(()), CycPolynomial.from_ints([1])
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("element shares a factor with the modulus")
        scale = CycPolynomial((Fraction(1) / r1.coeffs[0],))
        inv = scale * s1
        dense = list(inv.coeffs)
        return CycNumber(self.conductor, _reduce_dense(self.conductor, dense))

    def __truediv__(self, other) -> "CycNumber":
        other = _coerce(other, self.conductor)
        a, b = CycNumber._common(self, other)
        return a * b.invert()

    def __rtruediv__(self, other) -> "CycNumber":
        return _coerce(other, self.conductor) / self

    def __pow__(self, k: int) -> "CycNumber":
        if k < 0:
            return self.invert() ** (-k)
        result = CycNumber.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycNumber":
        """Complex conjugation, zeta_n -> zeta_n^(-1)."""
        ctx = _context(self.conductor)
        out = [Fraction(0)] * ctx.phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = ctx.conjmat[k]
                for j in range(ctx.phi):
                    if row[j]:
                        out[j] += c * int(row[j])
        return CycNumber(self.conductor, tuple(out))

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_rational(other, self.conductor)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = CycNumber._common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # hash embeds rational elements consistently across conductors
        if self._hash is None:
            if self.is_rational():
                h = hash(("cyc-rational", self.coeffs[0]))
            else:
                h = hash((self.conductor, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"Cyc({self.conductor}; {body})"

    # -- numerics ------------------------------------------------------------

    def approx(self) -> complex:
        """Value under the standard embedding zeta_n -> exp(2*pi*i/n).

        Used for sanity and sign checks only, never for equality decisions.
        """
        z = cmath.exp(2j * cmath.pi / self.conductor)
        total = 0j
        power = 1 + 0j
        for c in self.coeffs:
            if c:
                total += float(c) * power
            power *= z
        return total

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "conductor": self.conductor,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "CycNumber":
        coeffs = [Fraction(int(num), int(den)) for num, den in data["coeffs"]]
        return CycNumber(int(data["conductor"]), coeffs)


def _coerce(value, conductor: int) -> CycNumber:
    if isinstance(value, CycNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CycNumber.from_rational(value, conductor)
    raise TypeError(f"cannot coerce {type(value).__name__} into a cyclotomic number")


def root_of_unity(n: int, k: int = 1) -> CycNumber:
    """zeta_n^k as an element of Q(zeta_n)."""
    if n < 1:
        raise ValueError(f"root_of_unity requires n >= 1, got {n}")
    ctx = _context(n)
    row = ctx.powmat[k % n]
    return CycNumber(n, tuple(Fraction(int(v)) for v in row))


def gauss_alpha(m: int) -> CycNumber:
    """Exact square root of 2/(m+1) inside Q(zeta_(8m+8)).

    Evaluates the quadratic Gauss sum matching the residue of m+1 mod 4
    (three branches), then inverts: the sum equals 2/alpha for the positive
    real root alpha.  The result is verified exactly against
    alpha^2 = 2/(m+1), and its positivity is checked numerically with a
    safety margin.
    """
    if m < 0:
        raise ValueError(f"gauss_alpha requires m >= 0, got {m}")
    n = 8 * m + 8
    w = root_of_unity(n)
    big_m = 2 * (m + 1)
    if big_m % 4 == 0:
        total = CycNumber.zero(n)
        for j in range(big_m):
            total = total + root_of_unity(n, 4 * j * j)
        pre = total / (CycNumber.one(n) + root_of_unity(n, big_m))
    else:
        total = CycNumber.zero(n)
        for j in range(m + 1):
            total = total + root_of_unity(n, 8 * j * j)
        factor = (root_of_unity(n, m + 1) - root_of_unity(n, -(m + 1))) / root_of_unity(n, 2 * m + 2)
        if (m + 1) % 4 == 1:
            pre = factor * total
        else:
            pre = factor * (total / root_of_unity(n, big_m))
    if pre.is_zero():
        raise ArithmeticError(f"Gauss sum evaluated to zero for m={m}; this cannot happen")
    alpha = CycNumber.from_rational(2, n) / pre
    expected_sq = CycNumber.from_rational(Fraction(2, m + 1), n)
    if alpha * alpha != expected_sq:
        raise ArithmeticError(f"Gauss sum normalization failed the alpha^2 = 2/(m+1) check for m={m}")
    val = alpha.approx()
    if abs(val.imag) > 1e-6 or val.real < 1e-6:
        raise ArithmeticError(f"Gauss sum normalization is not a positive real for m={m}: {val}")
    return alpha


def approx(a: CycNumber) -> complex:
    return a.approx()

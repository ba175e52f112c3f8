"""Exact matrices over cyclotomic fields.

A k x k matrix over Q(zeta_n) is stored as an integer coefficient tensor of
shape (k, k, phi(n)) plus one positive common denominator, kept content-reduced
so the representation (and hence hashing) is canonical.  Arithmetic runs on
int64 numpy tensors with an a-priori overflow bound and falls back to exact
Python integers when the bound fails.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cyclotomic import CycNumber, _context

_I64_LIMIT = 2**62


@lru_cache(maxsize=1 << 16)
def _cached_inverse(x: CycNumber) -> CycNumber:
    # pivot entries repeat heavily during group closures
    return x.invert()


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(v)) for v in arr.flat)
    return int(np.abs(arr).max())


def _content(arr: np.ndarray) -> int:
    if arr.dtype == object:
        g = 0
        for v in arr.flat:
            g = math.gcd(g, abs(int(v)))
            if g == 1:
                return 1
        return g
    flat = np.abs(arr.ravel())
    return int(np.gcd.reduce(flat)) if flat.size else 0


def _shrink(num: np.ndarray) -> np.ndarray:
    """Downcast an object tensor to int64 when every value fits."""
    if num.dtype == object and _maxabs(num) < _I64_LIMIT:
        return num.astype(np.int64)
    return num


class CycMatrix:
    """Immutable exact matrix over Q(zeta_n)."""

    __slots__ = ("conductor", "size", "num", "den", "_key")

    def __init__(self, conductor: int, num: np.ndarray, den: int, *, _reduced: bool = False):
        if den == 0:
            raise ZeroDivisionError("matrix denominator must be nonzero")
        if den < 0:
            den, num = -den, -num
        if not _reduced:
            g = math.gcd(_content(num), den)
            if g > 1:
                num = num // g
                den //= g
            num = _shrink(num)
        num.setflags(write=False)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "size", num.shape[0])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", int(den))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, *args):
        raise AttributeError("CycMatrix is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def identity(conductor: int, size: int) -> "CycMatrix":
        phi = _context(conductor).phi
        num = np.zeros((size, size, phi), dtype=np.int64)
        for i in range(size):
            num[i, i, 0] = 1
        return CycMatrix(conductor, num, 1)

    @staticmethod
    def zero(conductor: int, size: int) -> "CycMatrix":
        phi = _context(conductor).phi
        return CycMatrix(conductor, np.zeros((size, size, phi), dtype=np.int64), 1)

    @staticmethod
    def from_entries(conductor: int, entries: Sequence[Sequence[CycNumber]]) -> "CycMatrix":
        size = len(entries)
        phi = _context(conductor).phi
        den = 1
        grid = []
        for row in entries:
            if len(row) != size:
                raise ValueError("matrix must be square")
            grid.append([e.embed(conductor) for e in row])
        for row in grid:
            for e in row:
                for c in e.coeffs:
                    den = math.lcm(den, c.denominator)
        num = np.zeros((size, size, phi), dtype=object)
        for i, row in enumerate(grid):
            for j, e in enumerate(row):
                for t, c in enumerate(e.coeffs):
                    num[i, j, t] = int(c * den)
        return CycMatrix(conductor, num, den)

    @staticmethod
    def diagonal(conductor: int, values: Sequence[CycNumber]) -> "CycMatrix":
        size = len(values)
        zero = CycNumber.zero(conductor)
        return CycMatrix.from_entries(
            conductor, [[values[i] if i == j else zero for j in range(size)] for i in range(size)]
        )

    # -- accessors -----------------------------------------------------------

    def entry(self, i: int, j: int) -> CycNumber:
        vec = self.num[i, j]
        return CycNumber(self.conductor, [Fraction(int(v), self.den) for v in vec])

    def entries(self) -> list[list[CycNumber]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Numerator slice for the given index lists (shares the denominator)."""
        return self.num[np.ix_(list(rows), list(cols))]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "CycMatrix":
        if len(rows) != len(cols):
            raise ValueError("submatrix must be square")
        return CycMatrix(self.conductor, self.block(rows, cols).copy(), self.den)

    def is_zero(self) -> bool:
        return _maxabs(self.num) == 0

    def embed(self, conductor: int) -> "CycMatrix":
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        src = _context(self.conductor)
        dst = _context(conductor)
        step = conductor // self.conductor
        emb = np.zeros((src.phi, dst.phi), dtype=object)
        for k in range(src.phi):
            emb[k] = dst.powmat[(k * step) % conductor]
        num = np.tensordot(self.num.astype(object), emb, axes=(2, 0))
        return CycMatrix(conductor, num, self.den)

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = _common_pair(self, other)
        ctx = _context(a.conductor)
        num = _mul_arrays(a.num, b.num, ctx)
        return CycMatrix(a.conductor, num, a.den * b.den)

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = _common_pair(self, other)
        den = math.lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        big = _maxabs(a.num) * fa + _maxabs(b.num) * fb
        if a.num.dtype == object or b.num.dtype == object or big >= _I64_LIMIT:
            num = a.num.astype(object) * fa + b.num.astype(object) * fb
        else:
            num = a.num * fa + b.num * fb
        return CycMatrix(a.conductor, num, den)

    def __neg__(self) -> "CycMatrix":
        return CycMatrix(self.conductor, -self.num, self.den, _reduced=True)

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return self + (-other)

    def scale(self, value: CycNumber | int | Fraction) -> "CycMatrix":
        """Multiply every entry by a scalar field element."""
        if isinstance(value, (int, Fraction)):
            q = Fraction(value)
            big = _maxabs(self.num) * abs(q.numerator)
            num = self.num.astype(object) * q.numerator if big >= _I64_LIMIT or self.num.dtype == object else self.num * q.numerator
            return CycMatrix(self.conductor, num, self.den * q.denominator)
        value = value.embed(math.lcm(value.conductor, self.conductor))
        mat = self.embed(value.conductor)
        ctx = _context(value.conductor)
        den_s = 1
        for c in value.coeffs:
            den_s = math.lcm(den_s, c.denominator)
        svec = np.array([int(c * den_s) for c in value.coeffs], dtype=object)
        num = _mul_vec(mat.num, svec, ctx)
        return CycMatrix(value.conductor, num, mat.den * den_s)

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.conductor, np.swapaxes(self.num, 0, 1).copy(), self.den, _reduced=True)

    def conj_transpose(self) -> "CycMatrix":
        ctx = _context(self.conductor)
        cm = ctx.conjmat_i64
        work = self.num
        bound = _maxabs(work) * ctx.phi * max(1, _maxabs(ctx.conjmat))
        if cm is None or work.dtype == object or bound >= _I64_LIMIT:
            work = work.astype(object)
            cm = ctx.conjmat
        num = np.tensordot(work, cm, axes=(2, 0))
        return CycMatrix(self.conductor, np.swapaxes(num, 0, 1).copy(), self.den)

    def power(self, k: int) -> "CycMatrix":
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = CycMatrix.identity(self.conductor, self.size)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def is_invertible(self) -> bool:
        """Exact invertibility via Gaussian elimination on field entries."""
        rows = [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]
        for col in range(self.size):
            pivot = next((r for r in range(col, self.size) if not rows[r][col].is_zero()), None)
            if pivot is None:
                return False
            rows[col], rows[pivot] = rows[pivot], rows[col]
            inv = rows[col][col].invert()
            for r in range(col + 1, self.size):
                if rows[r][col].is_zero():
                    continue
                factor = rows[r][col] * inv
                rows[r] = [rows[r][j] - factor * rows[col][j] for j in range(self.size)]
        return True

    # -- canonical form / hashing --------------------------------------------

    def key(self) -> bytes:
        """Canonical byte key; equal matrices give equal keys."""
        if self._key is None:
            object.__setattr__(self, "_key", _encode(self.num, self.den, self.conductor))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        a, b = _common_pair(self, other)
        return a.den == b.den and a.num.shape == b.num.shape and bool(np.all(a.num == b.num))

    def __hash__(self):
        return hash(self.key())

    def first_nonzero(self) -> tuple[int, int] | None:
        mask = np.any(self.num != 0, axis=2)
        idx = np.argwhere(mask)
        if idx.size == 0:
            return None
        i, j = idx[0]
        return int(i), int(j)

    def projective_canonical(self) -> "CycMatrix":
        """Scale so the first nonzero entry (row-major) equals 1.

        The result is the canonical representative of the matrix's class
        modulo scalar matrices over the field.
        """
        pos = self.first_nonzero()
        if pos is None:
            raise ZeroDivisionError("cannot projectivize the zero matrix")
        pivot = self.entry(*pos)
        return self.scale(_cached_inverse(pivot))

    def approx(self) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=complex)
        for i in range(self.size):
            for j in range(self.size):
                out[i, j] = self.entry(i, j).approx()
        return out

    def __repr__(self):
        return f"CycMatrix(conductor={self.conductor}, size={self.size}, den={self.den})"


def _common_pair(a: CycMatrix, b: CycMatrix) -> tuple[CycMatrix, CycMatrix]:
    if a.conductor == b.conductor:
        return a, b
    m = math.lcm(a.conductor, b.conductor)
    return a.embed(m), b.embed(m)


def _reduce_conv(conv: np.ndarray, red: np.ndarray, ctx) -> np.ndarray:
    """Reduce a convolution (powers 0..2*phi-2 of zeta) to the power basis.

    Powers at or above the conductor wrap around (zeta^n = 1) before the
    table of reductions for phi <= k < n is applied; the wrap only occurs at
    odd conductors, where phi can exceed n/2.
    """
    phi = ctx.phi
    if conv.shape[2] > ctx.n:
        wrapped = conv[:, :, : ctx.n].copy()
        tail = conv[:, :, ctx.n :]
        wrapped[:, :, : tail.shape[2]] += tail
        conv = wrapped
    low = conv[:, :, :phi]
    high = conv[:, :, phi:]
    if high.shape[2]:
        low = low + np.tensordot(high, red[: high.shape[2]], axes=(2, 0))
    return low


def _mul_arrays(na: np.ndarray, nb: np.ndarray, ctx) -> np.ndarray:
    """Matrix product with polynomial-convolution entries, reduced mod Phi_n."""
    k = na.shape[0]
    phi = ctx.phi
    bound = 2 * _maxabs(na) * _maxabs(nb) * k * max(1, phi) * (1 + (ctx.n - phi) * max(1, ctx.red_max))
    exact = na.dtype == object or nb.dtype == object or bound >= _I64_LIMIT or ctx.red_i64 is None
    if exact:
        na = na.astype(object)
        nb = nb.astype(object)
        red = ctx.red
    else:
        red = ctx.red_i64
    prod = np.einsum("ila,ljb->ijab", na, nb)
    conv = np.zeros((k, k, 2 * phi - 1), dtype=prod.dtype)
    for a in range(phi):
        conv[:, :, a : a + phi] += prod[:, :, a, :]
    return _reduce_conv(conv, red, ctx)


def _mul_vec(num: np.ndarray, vec: np.ndarray, ctx) -> np.ndarray:
    """Scale every entry (coefficient vectors) by one coefficient vector."""
    phi = ctx.phi
    bound = 2 * _maxabs(num) * max((abs(int(v)) for v in vec), default=0) * max(1, phi) * (
        1 + (ctx.n - phi) * max(1, ctx.red_max)
    )
    exact = num.dtype == object or bound >= _I64_LIMIT or ctx.red_i64 is None
    if exact:
        work = num.astype(object)
        v = np.asarray(vec, dtype=object)
        red = ctx.red
    else:
        work = num
        v = np.asarray([int(x) for x in vec], dtype=np.int64)
        red = ctx.red_i64
    prod = np.einsum("ija,b->ijab", work, v)
    k = num.shape[0]
    conv = np.zeros((k, k, 2 * phi - 1), dtype=prod.dtype)
    for a in range(phi):
        conv[:, :, a : a + phi] += prod[:, :, a, :]
    return _reduce_conv(conv, red, ctx)


def _encode(num: np.ndarray, den: int, conductor: int) -> bytes:
    top = _maxabs(num)
    header = b"%d:%d:%d:" % (conductor, num.shape[0], den)
    if top < 2**15:
        return header + b"h" + num.astype(np.int16).tobytes()
    if top < 2**31:
        return header + b"i" + num.astype(np.int32).tobytes()
    if top < 2**63:
        return header + b"q" + num.astype(np.int64).tobytes()
    return header + b"s" + repr(num.ravel().tolist()).encode()

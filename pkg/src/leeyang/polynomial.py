"""Dense univariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``. Decimal notation is rejected on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _strip(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class UniPoly:
    """Immutable polynomial; ``coeffs[k]`` is the coefficient of ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def x(cls) -> UniPoly:
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls([c])

    @classmethod
    def from_roots(cls, roots) -> UniPoly:
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    # basic structure

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def zero_multiplicity(self) -> int:
        """Multiplicity of the root at 0 (0 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return 0

    def divide_by_x_power(self, k: int) -> UniPoly:
        if any(c != 0 for c in self.coeffs[:k]):
            raise ValueError("polynomial is not divisible by that power of x")
        return UniPoly(self.coeffs[k:])

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result, base = UniPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> UniPoly:
        c = Fraction(c)
        return UniPoly(a * c for a in self.coeffs)

    def __truediv__(self, c):
        if isinstance(c, UniPoly):
            q, r = divmod(self, c)
            if not r.is_zero():
                raise ValueError("inexact polynomial division")
            return q
        return self.scale(1 / Fraction(c))

    def __divmod__(self, other: UniPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.leading
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + _lift(c, x)
        return acc

    # calculus

    def derivative(self) -> UniPoly:
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def lambda_derivative(self) -> UniPoly:
        """The Euler operator x d/dx."""
        return UniPoly(k * c for k, c in enumerate(self.coeffs))

    # normal forms

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def primitive_int(self) -> list[int]:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return []
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return [a // g for a in ints]

    def reversed(self) -> UniPoly:
        """x**deg * p(1/x) using the true degree."""
        return UniPoly(reversed(self.coeffs))

    def sqrt(self) -> UniPoly:
        """Exact square root with nonnegative trailing coefficient; raises if none."""
        if self.is_zero():
            return self
        m = self.zero_multiplicity()
        if m % 2:
            raise ValueError("not a perfect square")
        body = self.coeffs[m:]
        c0 = _fraction_sqrt(body[0])
        deg = (len(body) - 1) // 2
        if (len(body) - 1) % 2:
            raise ValueError("not a perfect square")
        root = [c0]
        for k in range(1, deg + 1):
            acc = body[k] - sum(root[i] * root[k - i] for i in range(1, k))
            root.append(acc / (2 * c0))
        result = UniPoly([0] * (m // 2) + root)
        if result * result != self:
            raise ValueError("not a perfect square")
        return result

    # serialization

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs] or ["0"]

    @classmethod
    def from_json(cls, items) -> UniPoly:
        return cls(parse_rational(s) for s in items)

    def __repr__(self):
        return f"UniPoly({self.to_json()})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            body = format_rational(abs(c))
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{body}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _coerce(other):
    if isinstance(other, UniPoly):
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return UniPoly([other])
    return NotImplemented


def _lift(c: Fraction, x):
    if isinstance(x, (int, Fraction)):
        return c
    try:
        import mpmath

        if isinstance(x, (mpmath.mpf, mpmath.mpc)):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


def _fraction_sqrt(c: Fraction) -> Fraction:
    if c < 0:
        raise ValueError("not a perfect square")
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n != c.numerator or d * d != c.denominator:
        raise ValueError("not a perfect square")
    return Fraction(n, d)


def fraction_sqrt(c) -> Fraction:
    """Exact square root of a nonnegative rational, raising if irrational."""
    return _fraction_sqrt(Fraction(c))


# integer polynomial helpers (coefficient lists, constant term first)


def _int_content(a: list[int]) -> int:
    return reduce(math.gcd, a, 0)


def _int_primitive(a: list[int]) -> list[int]:
    g = _int_content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    out = [c // g for c in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b over the integers."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, bc in enumerate(b):
            r[shift + j] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
    return r


def _mod_gcd_degree(a: list[int], b: list[int], p: int) -> int:
    """Degree of gcd(a mod p, b mod p) over GF(p)."""

    def trim(v):
        v = [c % p for c in v]
        while v and v[-1] == 0:
            v.pop()
        return v

    x, y = trim(a), trim(b)
    while y:
        inv = pow(y[-1], -1, p)
        while len(x) >= len(y) and x:
            f = x[-1] * inv % p
            shift = len(x) - len(y)
            for j, c in enumerate(y):
                x[shift + j] = (x[shift + j] - f * c) % p
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    return len(x) - 1


_PRIMES = (1000000007, 998244353, 2147483647, 1000000009)


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd, computed by a primitive pseudo-remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    x, y = a.primitive_int(), b.primitive_int()
    if len(x) < len(y):
        x, y = y, x
    # a modular image with no drop in leading coefficients bounds the gcd degree
    for p in _PRIMES:
        if x[-1] % p and y[-1] % p:
            if _mod_gcd_degree(x, y, p) == 0:
                return UniPoly([1])
            break
    while y:
        r = _int_prem(x, y)
        x, y = y, _int_primitive(r) if r else []
    return UniPoly(x).monic()


def is_coprime(a: UniPoly, b: UniPoly) -> bool:
    return gcd(a, b).degree == 0


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree <= 0:
        return p.monic()
    return (p // gcd(p, p.derivative())).monic()


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        # positive rescaling keeps sign changes intact and tames growth
        neg = -r
        ints = neg.primitive_int()
        seq.append(UniPoly(ints) if neg.leading > 0 else UniPoly([-c for c in ints]))
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(p: UniPoly) -> int:
    """Number of distinct real roots, by a Sturm sequence evaluated at infinity."""
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    at_pos = [q.leading for q in seq]
    at_neg = [q.leading * (-1) ** q.degree for q in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)

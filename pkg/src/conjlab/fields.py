"""Exact scalar arithmetic over GF(p), the rationals, and rational functions in t.

Scalars are plain canonical values rather than wrapper objects: residues in
``range(p)`` for GF(p), ``fractions.Fraction`` for QQ, and :class:`RatFunc`
(a reduced fraction of integer-coefficient polynomials) for QQ(t).  A field
object supplies the arithmetic.  This keeps inner loops cheap and makes
equality structural everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class FieldError(ValueError):
    pass


class UnsupportedFieldOperation(FieldError):
    """Raised when an operation is undefined for the field (e.g. eigenvalues over QQ(t))."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Integer polynomials in t, as trimmed ascending coefficient tuples.
# () is the zero polynomial; the last coefficient is never 0.
# ---------------------------------------------------------------------------

def ipoly_trim(cs) -> tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def ipoly_add(a, b):
    n = max(len(a), len(b))
    return ipoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def ipoly_neg(a):
    return tuple(-c for c in a)


def ipoly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return ipoly_trim(out)


def ipoly_content(a) -> int:
    g = 0
    for c in a:
        g = gcd(g, abs(c))
    return g


def ipoly_primitive(a):
    g = ipoly_content(a)
    if g in (0, 1):
        return a
    return tuple(c // g for c in a)


def _qpoly_divmod(a, b):
    """Division with remainder in QQ[t]; a, b are Fraction lists, b nonzero."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        coef = a[-1] / b[-1]
        deg = len(a) - len(b)
        q[deg] = coef
        for i, bi in enumerate(b):
            a[deg + i] -= coef * bi
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def ipoly_gcd(a, b):
    """Primitive gcd in ZZ[t] with positive leading coefficient."""
    a = ipoly_primitive(ipoly_trim(a))
    b = ipoly_primitive(ipoly_trim(b))
    while b:
        _, r = _qpoly_divmod(a, b)
        if not r:
            a = b
            break
        lcm_den = 1
        for c in r:
            lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
        rint = ipoly_primitive(ipoly_trim([int(c * lcm_den) for c in r]))
        a, b = b, rint
    a = ipoly_primitive(a)
    if a and a[-1] < 0:
        a = ipoly_neg(a)
    return a if a else ()


def ipoly_eval(a, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


_TERM_RE = re.compile(r"^([+-]?\d*)(?:(\*?)(t)(?:\^(\d+))?)?$")


def ipoly_parse(s: str) -> tuple[int, ...]:
    """Parse integer polynomials like ``t^2+1``, ``-2*t^3-t+4`` or ``7``."""
    s = s.replace(" ", "")
    if not s:
        raise FieldError("empty polynomial")
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise FieldError(f"cannot parse polynomial {s!r}")
    coeffs: dict[int, int] = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (m.group(1) in ("", "+", "-") and not m.group(3)):
            raise FieldError(f"bad term {chunk!r} in {s!r}")
        num, _, tvar, exp = m.groups()
        if tvar is None:
            coeffs[0] = coeffs.get(0, 0) + int(num)
        else:
            c = 1 if num in ("", "+") else -1 if num == "-" else int(num)
            e = 1 if exp is None else int(exp)
            coeffs[e] = coeffs.get(e, 0) + c
    if not coeffs:
        return ()
    deg = max(coeffs)
    return ipoly_trim([coeffs.get(i, 0) for i in range(deg + 1)])


def ipoly_format(a) -> str:
    if not a:
        return "0"
    parts = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            t = "t" if e == 1 else f"t^{e}"
            body = t if mag == 1 else f"{mag}*{t}"
        parts.append(sign + body)
    return "".join(parts)


@dataclass(frozen=True)
class RatFunc:
    """A rational function num/den in ZZ[t], in canonical reduced form."""

    num: tuple[int, ...]
    den: tuple[int, ...]

    @staticmethod
    def make(num, den) -> "RatFunc":
        num = ipoly_trim(num)
        den = ipoly_trim(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return RatFunc((), (1,))
        if len(den) == 1:
            c = gcd(ipoly_content(num), abs(den[0]))
            num = tuple(x // c for x in num)
            d = den[0] // c
            if d < 0:
                num, d = ipoly_neg(num), -d
            return RatFunc(num, (d,))
        g = ipoly_gcd(num, den)
        if len(g) > 1 or (g and g[0] != 1):
            num = tuple(int(c) for c in _qpoly_divmod(num, g)[0])
            den = tuple(int(c) for c in _qpoly_divmod(den, g)[0])
            num = ipoly_trim(num)
            den = ipoly_trim(den)
        c = gcd(ipoly_content(num), ipoly_content(den))
        if c > 1:
            num = tuple(x // c for x in num)
            den = tuple(x // c for x in den)
        if den[-1] < 0:
            num = ipoly_neg(num)
            den = ipoly_neg(den)
        return RatFunc(num, den)

    @staticmethod
    def from_fraction(q: Fraction) -> "RatFunc":
        return RatFunc.make((q.numerator,), (q.denominator,))

    def __str__(self) -> str:
        if self.den == (1,):
            return ipoly_format(self.num)
        if len(self.num) <= 1 and len(self.den) <= 1:
            n = self.num[0] if self.num else 0
            return f"{n}/{self.den[0]}"
        return f"({ipoly_format(self.num)})/({ipoly_format(self.den)})"


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class GF:
    """The prime field GF(p); scalars are residues in range(p)."""

    kind = "finite"

    def __init__(self, p: int):
        if not (isinstance(p, int) and is_prime(p) and p < 2**31):
            raise FieldError(f"GF modulus must be a prime below 2^31, got {p!r}")
        self.p = p
        self.characteristic = p
        self.name = f"gf:{p}"
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def coerce(self, v):
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise FieldError(f"denominator of {v} not invertible mod {self.p}")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        return int(v) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def elements(self):
        return range(self.p)

    def sort_key(self, a):
        return a

    def random(self, rng):
        return rng.randrange(self.p)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.p)

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            a, b = s.split("/")
            return self.div(int(a) % self.p, int(b) % self.p)
        return int(s) % self.p

    def format(self, a) -> str:
        return str(a % self.p)


class QQ:
    """The rationals; scalars are fractions.Fraction."""

    kind = "rationals"

    def __init__(self):
        self.characteristic = 0
        self.name = "qq"
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("qq")

    def __repr__(self):
        return "QQ()"

    def coerce(self, v):
        if isinstance(v, RatFunc):
            raise FieldError("cannot coerce a rational function into QQ")
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def elements(self):
        raise UnsupportedFieldOperation("QQ is not enumerable")

    def sort_key(self, a):
        return a

    def random(self, rng):
        # bounded height keeps exact arithmetic fast
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def random_nonzero(self, rng):
        while True:
            v = self.random(rng)
            if v != 0:
                return v

    def parse(self, s: str):
        return Fraction(s.strip())

    def format(self, a) -> str:
        return str(a)


class QQT:
    """Rational functions QQ(t); scalars are RatFunc values."""

    kind = "rational_functions"
    variable = "t"

    def __init__(self):
        self.characteristic = 0
        self.name = "qq_t"
        self.zero = RatFunc((), (1,))
        self.one = RatFunc((1,), (1,))

    def __eq__(self, other):
        return isinstance(other, QQT)

    def __hash__(self):
        return hash("qq_t")

    def __repr__(self):
        return "QQT()"

    @property
    def t(self) -> RatFunc:
        return RatFunc((0, 1), (1,))

    def coerce(self, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Fraction):
            return RatFunc.from_fraction(v)
        return RatFunc.make((int(v),), (1,))

    def add(self, a, b):
        if a.den == (1,) and b.den == (1,):
            return RatFunc(ipoly_add(a.num, b.num), (1,))
        return RatFunc.make(
            ipoly_add(ipoly_mul(a.num, b.den), ipoly_mul(b.num, a.den)),
            ipoly_mul(a.den, b.den),
        )

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return RatFunc(ipoly_neg(a.num), a.den)

    def mul(self, a, b):
        if a.den == (1,) and b.den == (1,):
            return RatFunc(ipoly_mul(a.num, b.num), (1,))
        return RatFunc.make(ipoly_mul(a.num, b.num), ipoly_mul(a.den, b.den))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of 0 in QQ(t)")
        return RatFunc.make(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a.num

    def elements(self):
        raise UnsupportedFieldOperation("QQ(t) is not enumerable")

    def sort_key(self, a):
        return (len(a.num), a.num, a.den)

    def random(self, rng):
        # polynomial of degree <= 1: enough variety, never a pole at a sample point
        return RatFunc.make((rng.randint(-9, 9), rng.randint(-9, 9)), (1,))

    def random_nonzero(self, rng):
        while True:
            v = self.random(rng)
            if v.num:
                return v

    def value_at_zero(self, a) -> Fraction:
        """Evaluate at t=0; raises if the entry has a pole there."""
        if not a.den or a.den[0] == 0:
            raise FieldError("pole at t=0")
        n = a.num[0] if a.num else 0
        return Fraction(n, a.den[0])

    def has_pole_at_zero(self, a) -> bool:
        return a.den[0] == 0

    def parse(self, s: str):
        s = s.strip().replace(" ", "")
        m = re.fullmatch(r"\((?P<num>[^()]*)\)/\((?P<den>[^()]*)\)", s)
        if m:
            return RatFunc.make(ipoly_parse(m.group("num")), ipoly_parse(m.group("den")))
        if "/" in s:
            a, b = s.split("/")
            return RatFunc.make((int(a),), (int(b),))
        return RatFunc.make(ipoly_parse(s), (1,))

    def format(self, a) -> str:
        return str(a)


_QQ = QQ()
_QQT = QQT()


def field_from_name(name: str):
    name = name.strip().lower()
    if name == "qq":
        return _QQ
    if name == "qq_t":
        return _QQT
    if name.startswith("gf:"):
        return GF(int(name[3:]))
    raise FieldError(f"unknown field {name!r} (expected gf:<p>, qq or qq_t)")


# ---------------------------------------------------------------------------
# Dense univariate polynomials over a field (used for characteristic polynomials)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial with ascending coefficients; () is the zero polynomial."""

    field: object
    coeffs: tuple

    @staticmethod
    def make(field, coeffs) -> "UniPoly":
        cs = [field.coerce(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return UniPoly(field, tuple(cs))

    @staticmethod
    def constant(field, c) -> "UniPoly":
        return UniPoly.make(field, [c])

    @staticmethod
    def x(field) -> "UniPoly":
        return UniPoly.make(field, [field.zero, field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.field.zero

    def add(self, other: "UniPoly") -> "UniPoly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly.make(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def sub(self, other: "UniPoly") -> "UniPoly":
        return self.add(other.neg())

    def neg(self) -> "UniPoly":
        return UniPoly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def mul(self, other: "UniPoly") -> "UniPoly":
        f = self.field
        if self.is_zero() or other.is_zero():
            return UniPoly(f, ())
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return UniPoly.make(f, out)

    def scale(self, c) -> "UniPoly":
        f = self.field
        c = f.coerce(c)
        return UniPoly.make(f, [f.mul(c, a) for a in self.coeffs])

    def eval(self, x):
        f = self.field
        x = f.coerce(x)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

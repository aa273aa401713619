"""Exact scalars over the field Q(i, sqrt2).

Every scalar is (a + b*i) + (c + d*i)*sqrt2 with rational a, b, c, d.  The
field is closed under all constructions in this package: i/2 enters through
the symmetric canonical blocks and 1/sqrt2 through the transition matrices.
Arithmetic is exact; there are no floats anywhere.

Rationals are gmpy2.mpq when available (about an order of magnitude faster),
fractions.Fraction otherwise.  Both are arbitrary precision and auto-reduced,
and both print as "n" or "n/d", which the string grammar below relies on.
"""

from __future__ import annotations

from typing import Union

from .errors import ScalarParseError

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

Rational = _mpq

_R0 = _mpq(0)
_R1 = _mpq(1)
_R2 = _mpq(2)


def rat(num, den=None) -> Rational:
    """Exact rational from ints, strings or another rational. Floats are refused."""
    if isinstance(num, float) or isinstance(den, float):
        raise TypeError("floats are not exact; pass ints, strings or rationals")
    if den is None:
        return _mpq(num)
    return _mpq(num, den)


class ExactScalar:
    """Immutable element of Q(i, sqrt2), stored as four rationals."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        if any(isinstance(v, float) for v in (a, b, c, d)):
            raise TypeError("floats are not exact; pass ints, strings or rationals")
        object.__setattr__(self, "a", _mpq(a))
        object.__setattr__(self, "b", _mpq(b))
        object.__setattr__(self, "c", _mpq(c))
        object.__setattr__(self, "d", _mpq(d))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    @property
    def is_one(self) -> bool:
        return self.a == _R1 and not (self.b or self.c or self.d)

    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    @property
    def is_gaussian(self) -> bool:
        """True when the sqrt2 part vanishes."""
        return not (self.c or self.d)

    def rational_value(self) -> Rational:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.a + other.a, self.b + other.b,
                           self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.a - other.a, self.b - other.b,
                           self.c - other.c, self.d - other.d)

    def __rsub__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        if not (c1 or d1 or c2 or d2):
            # Gaussian fast path: the bulk of the arithmetic lives here.
            return ExactScalar(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2)
        # (g1 + h1*s)(g2 + h2*s) = (g1 g2 + 2 h1 h2) + (g1 h2 + h1 g2) s
        return ExactScalar(
            a1 * a2 - b1 * b2 + _R2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + _R2 * (c1 * d2 + d1 * c2),
            a1 * c2 - b1 * d2 + c1 * a2 - d1 * b2,
            a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        """Exact multiplicative inverse.

        With x = g + h*sqrt2 (g, h Gaussian), x * (g - h*sqrt2) = g^2 - 2 h^2
        lies in Q(i), and g^2 - 2h^2 = 0 forces x = 0 since sqrt2 is not in
        Q(i).  So one Gaussian inversion finishes the job.
        """
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero scalar")
        a, b, c, d = self.a, self.b, self.c, self.d
        # n = g^2 - 2 h^2 as a Gaussian number (na + nb*i)
        na = a * a - b * b - _R2 * (c * c - d * d)
        nb = _R2 * (a * b - _R2 * c * d)
        norm = na * na + nb * nb
        # (g - h*sqrt2) * conj(n) / |n|^2
        ia, ib = na / norm, -nb / norm
        return ExactScalar(a * ia - b * ib, a * ib + b * ia,
                           -(c * ia - d * ib), -(c * ib + d * ia))

    def __truediv__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # -- automorphisms ------------------------------------------------

    def conjugate_i(self) -> "ExactScalar":
        """Field automorphism i -> -i."""
        return ExactScalar(self.a, -self.b, self.c, -self.d)

    def conjugate_sqrt2(self) -> "ExactScalar":
        """Field automorphism sqrt2 -> -sqrt2."""
        return ExactScalar(self.a, self.b, -self.c, -self.d)

    # -- comparisons / hashing ----------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)


def _coerce(value) -> ExactScalar:
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, int) or type(value) is _mpq:
        return ExactScalar(value)
    if isinstance(value, float):
        return NotImplemented
    try:
        # Fractions (and ints behind abstract types) still coerce exactly.
        return ExactScalar(_mpq(value))
    except TypeError:
        return NotImplemented


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
MINUS_ONE = ExactScalar(-1)
IMAG = ExactScalar(0, 1)
SQRT2 = ExactScalar(0, 0, 1)
HALF = ExactScalar(_mpq(1, 2))


# ---------------------------------------------------------------------
# String grammar
#
#   SCALAR := TERM (("+"|"-") TERM)*
#   TERM   := RAT | RAT "i" | "(" RAT ("+"|"-") RAT "i" ")" "r2" | RAT "r2"
#   RAT    := INT ("/" POSINT)?
#
# Whitespace is insignificant.  The formatter below always emits strings in
# this grammar; the parser is slightly more lenient (bare "i", bare "r2",
# "(RAT) r2") so hand-written inputs round-trip too.
# ---------------------------------------------------------------------


def _tokenize(text: str):
    tokens = []  # (kind, value, position)
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-()/":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if text.startswith("r2", i):
            tokens.append(("r2", "r2", i))
            i += 2
            continue
        if ch == "i":
            tokens.append(("i", "i", i))
            i += 1
            continue
        raise ScalarParseError(f"unexpected character {ch!r}", text, i)
    return tokens


class _TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise ScalarParseError(f"expected {kind!r}, got {tok[1]!r}", self.text, tok[2])
        return tok

    def error(self, message):
        raise ScalarParseError(message, self.text, self.peek()[2])


def _parse_rat(ts: _TokenStream, sign: int) -> Rational:
    kind, value, pos = ts.take()
    if kind != "int":
        raise ScalarParseError(f"expected a number, got {value!r}", ts.text, pos)
    num = int(value)
    if ts.peek()[0] == "/":
        ts.take()
        kind2, value2, pos2 = ts.take()
        if kind2 != "int":
            raise ScalarParseError("expected a denominator", ts.text, pos2)
        den = int(value2)
        if den <= 0:
            raise ScalarParseError("denominator must be positive", ts.text, pos2)
        return _mpq(sign * num, den)
    return _mpq(sign * num)


def _parse_gauss(ts: _TokenStream):
    """Signed Gaussian sum (used inside parentheses): RAT, RAT i, mixes."""
    ga, gb = _R0, _R0
    sign = 1
    first = True
    while True:
        kind, _, _ = ts.peek()
        if kind in ("+", "-"):
            ts.take()
            sign = 1 if kind == "+" else -1
        elif not first:
            break
        if ts.peek()[0] == "i":
            ts.take()
            gb += sign
        else:
            value = _parse_rat(ts, sign)
            if ts.peek()[0] == "i":
                ts.take()
                gb += value
            else:
                ga += value
        sign = 1
        first = False
        if ts.peek()[0] == ")":
            break
    return ga, gb


def parse_scalar(text: str) -> ExactScalar:
    """Parse a scalar string. Raises ScalarParseError with a position."""
    ts = _TokenStream(text)
    if not ts.tokens:
        raise ScalarParseError("empty scalar", text, 0)
    a = b = c = d = _R0
    sign = 1
    first = True
    while ts.peek()[0] is not None:
        kind, value, pos = ts.peek()
        if kind in ("+", "-"):
            ts.take()
            sign = 1 if kind == "+" else -1
            if ts.peek()[0] is None:
                raise ScalarParseError("dangling sign", text, pos)
        elif not first:
            raise ScalarParseError(f"expected '+' or '-', got {value!r}", text, pos)
        kind, value, pos = ts.peek()
        if kind == "(":
            ts.take()
            ga, gb = _parse_gauss(ts)
            ts.expect(")")
            ts.expect("r2")
            c += sign * ga
            d += sign * gb
        elif kind == "i":
            ts.take()
            b += sign
        elif kind == "r2":
            ts.take()
            c += sign
        elif kind == "int":
            value = _parse_rat(ts, sign)
            nxt = ts.peek()[0]
            if nxt == "i":
                ts.take()
                b += value
            elif nxt == "r2":
                ts.take()
                c += value
            else:
                a += value
        else:
            raise ScalarParseError(f"unexpected token {value!r}", text, pos)
        sign = 1
        first = False
    return ExactScalar(a, b, c, d)


def format_scalar(x: ExactScalar) -> str:
    """Canonical string form; parse_scalar(format_scalar(x)) == x.

    Emits terms in the fixed order: rational, imaginary, sqrt2 part.  The
    sqrt2 part is "c r2" when d = 0, "(c +/- d i) r2" otherwise, so output
    always stays inside the strict grammar.
    """
    terms = []  # (sign, body) with sign in "+-"

    def push(value: Rational, suffix: str):
        sign = "-" if value < 0 else "+"
        body = str(-value if value < 0 else value)
        terms.append((sign, body + suffix))

    if x.a:
        push(x.a, "")
    if x.b:
        push(x.b, " i")
    if x.c or x.d:
        if not x.d:
            push(x.c, " r2")
        else:
            inner_sign = "-" if x.d < 0 else "+"
            inner = f"({x.c} {inner_sign} {-x.d if x.d < 0 else x.d} i) r2"
            terms.append(("+", inner))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out

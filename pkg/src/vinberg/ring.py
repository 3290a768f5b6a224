"""Exact arithmetic in Z and in rings of integers of real quadratic fields.

Elements are stored as a + b*w where w = sqrt(d) for d = 2, 3 mod 4 and
w = (1 + sqrt(d))/2 for d = 1 mod 4.  Every sign decision is made by
comparing integer squares against d times integer squares; no floating
point enters any decision path.

The Euclidean gcd is only available for the square-free d on the
norm-Euclidean allow-list below; everything else (arithmetic, signs,
divisibility) works for any square-free d > 1.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

# Norm-Euclidean real quadratic rings accepted by gcd/divmod.  These cover
# every ground field in the built-in catalogue (sqrt(2) and sqrt(5)) with
# slack for nearby fields.
EUCLIDEAN_D = frozenset({2, 3, 5, 13, 17})

# Fundamental units as (a, b) coordinates in the w-basis.
_FUNDAMENTAL_UNITS = {
    2: (1, 1),    # 1 + sqrt(2),        norm -1
    3: (2, 1),    # 2 + sqrt(3),        norm +1
    5: (0, 1),    # (1 + sqrt(5))/2,    norm -1
    13: (1, 1),   # (3 + sqrt(13))/2,   norm -1
    17: (3, 2),   # 4 + sqrt(17),       norm -1
}


class RingError(ValueError):
    """Invalid ring construction or operation."""


def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign_a_plus_b_sqrt_d(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for integers a, b and square-free d."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # Opposite signs: compare a^2 with d*b^2.  Equality would force d to be
    # a perfect square, which square-freeness excludes.
    lhs, rhs = a * a, d * b * b
    if a > 0:
        return 1 if lhs > rhs else -1
    return 1 if lhs < rhs else -1


class Field:
    """A ground field: Q, or the real quadratic field Q(sqrt(d))."""

    __slots__ = ("kind", "d", "c0", "c1", "_hash")

    RATIONAL = "Q"
    REAL_QUADRATIC = "Qsqrt"

    def __init__(self, kind: str, d: int | None = None) -> None:
        if kind == Field.RATIONAL:
            if d is not None:
                raise RingError("rational field takes no d")
            self.kind = kind
            self.d = 0
            self.c0 = 0
            self.c1 = 0
        elif kind == Field.REAL_QUADRATIC:
            if d is None or not _is_square_free(d):
                raise RingError(f"d must be square-free and > 1, got {d!r}")
            self.kind = kind
            self.d = d
            if d % 4 == 1:
                # w = (1 + sqrt(d))/2, w^2 = (d-1)/4 + w
                self.c0 = (d - 1) // 4
                self.c1 = 1
            else:
                # w = sqrt(d), w^2 = d
                self.c0 = d
                self.c1 = 0
        else:
            raise RingError(f"unknown field kind {kind!r}")
        self._hash = hash((self.kind, self.d))

    @staticmethod
    def rationals() -> Field:
        return _QQ

    @staticmethod
    def quadratic(d: int) -> Field:
        return _quadratic_cache(d)

    @property
    def is_rational(self) -> bool:
        return self.kind == Field.RATIONAL

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    @property
    def half_integral_omega(self) -> bool:
        return self.c1 == 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.d == other.d
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.is_rational:
            return "Field(Q)"
        return f"Field(Q(sqrt({self.d})))"

    # -- element construction ------------------------------------------------

    def element(self, a: int, b: int = 0) -> RingElement:
        return RingElement(self, a, b)

    def zero(self) -> RingElement:
        return RingElement(self, 0, 0)

    def one(self) -> RingElement:
        return RingElement(self, 1, 0)

    def omega(self) -> RingElement:
        if self.is_rational:
            raise RingError("Q has no omega")
        return RingElement(self, 0, 1)

    def sqrt_d(self) -> RingElement:
        """The element sqrt(d) itself, whatever the w convention."""
        if self.is_rational:
            raise RingError("Q has no sqrt(d)")
        if self.half_integral_omega:
            return RingElement(self, -1, 2)  # 2w - 1 = sqrt(d)
        return RingElement(self, 0, 1)

    def fundamental_unit(self) -> RingElement:
        if self.d not in _FUNDAMENTAL_UNITS:
            raise RingError(f"no fundamental unit table entry for d={self.d}")
        a, b = _FUNDAMENTAL_UNITS[self.d]
        return RingElement(self, a, b)

    @property
    def euclidean(self) -> bool:
        return self.is_rational or self.d in EUCLIDEAN_D

    # -- embeddings as floats (for kernels and rendering only) ---------------

    def omega_floats(self) -> tuple[float, float]:
        """(identity, conjugate) images of w; never used in decisions."""
        if self.is_rational:
            return 0.0, 0.0
        r = math.sqrt(self.d)
        if self.half_integral_omega:
            return (1 + r) / 2, (1 - r) / 2
        return r, -r

    # -- parsing --------------------------------------------------------------

    def parse(self, text: str) -> RingElement:
        return parse_element(self, text)


_QQ = Field(Field.RATIONAL)


@lru_cache(maxsize=None)
def _quadratic_cache(d: int) -> Field:
    return Field(Field.REAL_QUADRATIC, d)


IDENTITY = "identity"
CONJUGATE = "conjugate"


class RingElement:
    """a + b*w in the ring of integers of a Field, with exact operations."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: Field, a: int, b: int = 0) -> None:
        if b and field.is_rational:
            raise RingError("rational ring elements must have b = 0")
        self.field = field
        self.a = a
        self.b = b

    # -- basics ---------------------------------------------------------------

    def __repr__(self) -> str:
        return f"RingElement({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, RingElement):
            return (
                self.a == other.a
                and self.b == other.b
                and self.field == other.field
            )
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.d))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def is_zero(self) -> bool:
        return not (self.a or self.b)

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def is_rational_integer(self) -> bool:
        return self.b == 0

    # -- ring operations -------------------------------------------------------

    def _coerce(self, other: int | RingElement) -> RingElement:
        if isinstance(other, int):
            return RingElement(self.field, other, 0)
        if isinstance(other, RingElement):
            if other.field != self.field and not (
                other.b == 0 or self.b == 0 and self.field.is_rational
            ):
                raise RingError("mixed fields")
            if other.field != self.field:
                return RingElement(self.field, other.a, other.b)
            return other
        return NotImplemented

    def __add__(self, other: int | RingElement) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: int | RingElement) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other: int | RingElement) -> RingElement:
        return (-self) + other

    def __neg__(self) -> RingElement:
        return RingElement(self.field, -self.a, -self.b)

    def __mul__(self, other: int | RingElement) -> RingElement:
        if isinstance(other, int):
            return RingElement(self.field, self.a * other, self.b * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return RingElement(self.field, self.a * o.a, 0)
        # (a1 + b1 w)(a2 + b2 w) with w^2 = c0 + c1 w
        f = self.field
        bb = self.b * o.b
        return RingElement(
            f,
            self.a * o.a + f.c0 * bb,
            self.a * o.b + self.b * o.a + f.c1 * bb,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RingElement:
        if n < 0:
            inv = self.unit_inverse()
            return inv ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> RingElement:
        """Galois conjugate: w -> c1 - w."""
        if self.b == 0:
            return self
        f = self.field
        return RingElement(f, self.a + f.c1 * self.b, -self.b)

    def trace(self) -> int:
        return 2 * self.a + self.field.c1 * self.b

    def norm(self) -> int:
        """Field norm N(a + b w) = a^2 + c1 ab - c0 b^2 (an ordinary integer)."""
        f = self.field
        return self.a * self.a + f.c1 * self.a * self.b - f.c0 * self.b * self.b

    # -- exact signs ------------------------------------------------------------

    def _sqrt_pair(self, which: str) -> tuple[int, int]:
        """(A, B) with the embedded value equal to (A + B*sqrt(d)) / 2."""
        f = self.field
        if f.half_integral_omega:
            A, B = 2 * self.a + self.b, self.b
        else:
            A, B = 2 * self.a, 2 * self.b
        if which == CONJUGATE:
            B = -B
        return A, B

    def sign(self, which: str = IDENTITY) -> int:
        """Exact sign {-1, 0, +1} of the real image under the embedding."""
        if self.field.is_rational or self.b == 0:
            return (self.a > 0) - (self.a < 0)
        A, B = self._sqrt_pair(which)
        return _sign_a_plus_b_sqrt_d(A, B, self.field.d)

    def sign_conj(self) -> int:
        return self.sign(CONJUGATE)

    def is_totally_positive(self) -> bool:
        if self.field.is_rational:
            return self.a > 0
        return self.sign() > 0 and self.sign_conj() > 0

    def is_totally_nonnegative(self) -> bool:
        if self.field.is_rational:
            return self.a >= 0
        return self.sign() >= 0 and self.sign_conj() >= 0

    def compare(self, other: int | RingElement, which: str = IDENTITY) -> int:
        o = self._coerce(other)
        return (self - o).sign(which)

    def __lt__(self, other: int | RingElement) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: int | RingElement) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: int | RingElement) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: int | RingElement) -> bool:
        return self.compare(other) >= 0

    def __abs__(self) -> RingElement:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        w_id, _ = self.field.omega_floats()
        return self.a + self.b * w_id

    def float_conj(self) -> float:
        _, w_c = self.field.omega_floats()
        return self.a + self.b * w_c

    # -- divisibility ------------------------------------------------------------

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def unit_inverse(self) -> RingElement:
        n = self.norm()
        if n == 1:
            return self.conj()
        if n == -1:
            return -self.conj()
        raise RingError(f"{self} is not a unit")

    def divides(self, other: int | RingElement) -> bool:
        """True iff other / self lies in the ring (decided exactly)."""
        o = self._coerce(other)
        if self.is_zero():
            raise ZeroDivisionError("division by zero ring element")
        if self.field.is_rational:
            return o.a % self.a == 0
        n = self.norm()
        prod = o * self.conj()
        return prod.a % n == 0 and prod.b % n == 0

    def divide_exact(self, divisor: int | RingElement) -> RingElement:
        """self / divisor, asserting exactness."""
        d = self._coerce(divisor)
        if d.is_zero():
            raise ZeroDivisionError("division by zero ring element")
        if self.field.is_rational:
            q, r = divmod(self.a, d.a)
            if r:
                raise RingError(f"{self} not divisible by {d}")
            return RingElement(self.field, q, 0)
        n = d.norm()
        prod = self * d.conj()
        qa, ra = divmod(prod.a, n)
        qb, rb = divmod(prod.b, n)
        if ra or rb:
            raise RingError(f"{self} not divisible by {d}")
        return RingElement(self.field, qa, qb)

    def __divmod__(self, other: int | RingElement) -> tuple[RingElement, RingElement]:
        """Norm-Euclidean division; requires the field on the allow-list."""
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero ring element")
        f = self.field
        if f.is_rational:
            q, r = divmod(self.a, o.a)
            return RingElement(f, q, 0), RingElement(f, r, 0)
        if not f.euclidean:
            raise RingError(f"d={f.d} is not on the Euclidean allow-list")
        n = o.norm()
        prod = self * o.conj()
        # Nearest-integer quotient, then a local net to guarantee a remainder
        # of strictly smaller absolute norm (needed at d = 17 boundary cases).
        qa0 = _round_div(prod.a, n)
        qb0 = _round_div(prod.b, n)
        best: tuple[int, RingElement, RingElement] | None = None
        for da in (0, -1, 1):
            for db in (0, -1, 1):
                q = RingElement(f, qa0 + da, qb0 + db)
                r = self - q * o
                an = abs(r.norm())
                if best is None or an < best[0]:
                    best = (an, q, r)
                if an == 0:
                    return best[1], best[2]
        assert best is not None and best[0] < abs(n), "norm-Euclidean step failed"
        return best[1], best[2]

    def __mod__(self, other: int | RingElement) -> RingElement:
        return divmod(self, other)[1]

    def __floordiv__(self, other: int | RingElement) -> RingElement:
        return divmod(self, other)[0]

    # -- canonicalization ---------------------------------------------------------

    def _abs_embedding_score(self) -> tuple[int, int]:
        """(A, B) with |x_id| + |x_conj| = (A + B*sqrt(d)) / 2, exactly."""
        A1, B1 = self._sqrt_pair(IDENTITY)
        s1 = _sign_a_plus_b_sqrt_d(A1, B1, self.field.d)
        A2, B2 = self._sqrt_pair(CONJUGATE)
        s2 = _sign_a_plus_b_sqrt_d(A2, B2, self.field.d)
        return (s1 * A1 + s2 * A2, s1 * B1 + s2 * B2)

    def _score_less(self, other: RingElement) -> bool:
        A1, B1 = self._abs_embedding_score()
        A2, B2 = other._abs_embedding_score()
        return _sign_a_plus_b_sqrt_d(A1 - A2, B1 - B2, self.field.d) < 0

    def canonical_associate(self) -> RingElement:
        """Deterministic representative of the associate class of self.

        Totally positive with minimal trace when the class contains a
        totally positive element; otherwise the associate minimizing the
        sum of absolute embedding values, with the identity embedding
        positive.
        """
        if self.field.is_rational:
            return abs(self)
        if self.is_zero():
            return self
        u = self.field.fundamental_unit()
        start = None
        for y in (self, -self, self * u, -(self * u)):
            if y.is_totally_positive():
                start = y
                break
        if start is not None:
            # Totally positive units form the cyclic group generated by v.
            v = u if u.norm() == 1 and u.is_totally_positive() else u * u
            cur = start
            while True:
                nxt = cur * v
                if nxt.trace() < cur.trace():
                    cur = nxt
                    continue
                prv = cur.divide_exact(v)
                if prv.trace() < cur.trace():
                    cur = prv
                    continue
                break
            cands = [cur]
            for c in (cur * v, cur.divide_exact(v)):
                if c.trace() == cur.trace():
                    cands.append(c)
            return min(cands, key=lambda c: (abs(c.b), abs(c.a), c.b < 0, c.a < 0))
        # Mixed-sign class (possible only when every unit is totally
        # positive, e.g. d = 3): minimize |x_id| + |x_conj| instead.
        cur = self if self.sign() > 0 else -self
        while True:
            nxt = cur * u
            if nxt._score_less(cur):
                cur = nxt if nxt.sign() > 0 else -nxt
                continue
            prv = cur.divide_exact(u)
            if prv._score_less(cur):
                cur = prv if prv.sign() > 0 else -prv
                continue
            break
        cands = [cur]
        for c in (cur * u, cur.divide_exact(u)):
            c = c if c.sign() > 0 else -c
            if not c._score_less(cur) and not cur._score_less(c):
                cands.append(c)
        return min(cands, key=lambda c: (abs(c.b), abs(c.a), c.b < 0, c.a < 0))


class _ScoreKey:
    """Orders (A + B*sqrt(d))/2 values exactly for use inside sort keys."""

    __slots__ = ("d", "A", "B")

    def __init__(self, d: int, A: int, B: int) -> None:
        self.d = d
        self.A = A
        self.B = B

    def __lt__(self, other: "_ScoreKey") -> bool:
        return _sign_a_plus_b_sqrt_d(self.A - other.A, self.B - other.B, self.d) < 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, _ScoreKey)
            and self.A == other.A
            and self.B == other.B
        )


def _round_div(p: int, q: int) -> int:
    """Nearest integer to p/q, ties toward even, exact."""
    if q < 0:
        p, q = -p, -q
    fl, r = divmod(p, q)
    if 2 * r < q:
        return fl
    if 2 * r > q:
        return fl + 1
    return fl if fl % 2 == 0 else fl + 1


def ring_gcd(x: RingElement, y: RingElement) -> RingElement:
    """Canonicalized gcd; gcd(x, 0) is the canonical associate of x."""
    if x.field != y.field:
        raise RingError("gcd of elements from different fields")
    if not x.field.euclidean:
        raise RingError(f"d={x.field.d} is not on the Euclidean allow-list")
    a, b = x, y
    while not b.is_zero():
        a, b = b, a % b
    return a.canonical_associate()


def ring_gcd_many(elems: list[RingElement]) -> RingElement:
    if not elems:
        raise RingError("gcd of empty list")
    g = elems[0]
    for e in elems[1:]:
        g = ring_gcd(g, e)
        if g.is_unit():
            break
    return g.canonical_associate()


def _factor_int(n: int) -> list[tuple[int, int]]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def primes_above(field: Field, p: int) -> list[RingElement]:
    """Prime elements of o_k above the rational prime p (allow-list fields)."""
    if field.is_rational:
        return [field.element(p)]
    for a in range(p):
        x = field.element(a, 1)
        if x.norm() % p == 0:
            pi = ring_gcd(field.element(p), x)
            if abs(pi.norm()) == p:
                pj = pi.conj().canonical_associate()
                if pj == pi or pi.divides(pj):
                    return [pi]  # ramified
                return [pi, pj]  # split
            break
    return [field.element(p)]  # inert


def factor_ring_element(x: RingElement) -> list[tuple[RingElement, int]]:
    """Prime factorization up to units; requires an allow-list field."""
    if x.is_zero():
        raise RingError("cannot factor zero")
    out: list[tuple[RingElement, int]] = []
    rest = x
    for p, _ in _factor_int(x.norm()):
        for pi in primes_above(x.field, p):
            e = 0
            while pi.divides(rest):
                rest = rest.divide_exact(pi)
                e += 1
            if e:
                out.append((pi, e))
    assert rest.is_unit(), f"incomplete factorization of {x}"
    return out


def divisors_up_to_associates(x: RingElement) -> list[RingElement]:
    """Canonical associates of all divisors of x, deterministic order."""
    if x.field.is_rational:
        n = abs(x.a)
        return sorted(
            (x.field.element(d) for d in range(1, n + 1) if n % d == 0),
            key=lambda e: e.a,
        )
    factors = factor_ring_element(x)
    divs = [x.field.one()]
    for pi, e in factors:
        divs = [d * pi**k for d in divs for k in range(e + 1)]
    canon = {d.canonical_associate() for d in divs}
    return sorted(canon, key=lambda e: (e.trace(), e.a, e.b))


def totally_positive_unit_class_reps(field: Field, x: RingElement) -> list[RingElement]:
    """Representatives of the orbits of the totally positive associates of
    x under unit squares.  One representative when the fundamental unit has
    norm -1, two otherwise (when any totally positive associate exists)."""
    if field.is_rational:
        return [abs(x)] if x.a else []
    c = x.canonical_associate()
    if not c.is_totally_positive():
        return []
    u = field.fundamental_unit()
    if u.norm() == -1:
        return [c]
    # norm +1: totally positive associates split into two square classes
    v = u * u
    second = c * u
    while True:
        nxt = second.divide_exact(v)
        if nxt.trace() < second.trace():
            second = nxt
            continue
        nxt = second * v
        if nxt.trace() < second.trace():
            second = nxt
            continue
        break
    return [c, second]


# -- field elements (quotients) ---------------------------------------------------


class FieldElement:
    """num / den with num a RingElement and den a positive rational integer."""

    __slots__ = ("num", "den")

    def __init__(self, num: RingElement, den: int = 1, *, _reduced: bool = False) -> None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        if not _reduced:
            g = math.gcd(math.gcd(abs(num.a), abs(num.b)), den)
            if g > 1:
                num = RingElement(num.field, num.a // g, num.b // g)
                den //= g
        self.num = num
        self.den = den

    @staticmethod
    def from_int(field: Field, a: int) -> FieldElement:
        return FieldElement(RingElement(field, a, 0), 1, _reduced=True)

    @staticmethod
    def ratio(x: RingElement, y: RingElement) -> FieldElement:
        """x / y as an element of the field."""
        if y.is_zero():
            raise ZeroDivisionError("division by zero ring element")
        if y.field.is_rational:
            return FieldElement(x, y.a)
        n = y.norm()
        return FieldElement(x * y.conj(), n)

    @property
    def field(self) -> Field:
        return self.num.field

    def is_integral(self) -> bool:
        return self.den == 1

    def ring_value(self) -> RingElement:
        if self.den != 1:
            raise RingError(f"{self} is not integral")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __repr__(self) -> str:
        return f"FieldElement({str(self)!r})"

    def __str__(self) -> str:
        if self.den == 1:
            return format_element(self.num)
        return f"({format_element(self.num)})/{self.den}"

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def _coerce(self, other: object) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, RingElement):
            return FieldElement(other, 1, _reduced=True)
        if isinstance(other, int):
            return FieldElement.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other: object) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: object) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other: object) -> FieldElement:
        return (-self) + other

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.num, self.den, _reduced=True)

    def __mul__(self, other: object) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero field element")
        if o.num.field.is_rational:
            return FieldElement(self.num * o.den, self.den * o.num.a)
        n = o.num.norm()
        return FieldElement(self.num * o.num.conj() * o.den, self.den * n)

    def __rtruediv__(self, other: object) -> FieldElement:
        o = self._coerce(other)
        return o / self

    def sign(self, which: str = IDENTITY) -> int:
        return self.num.sign(which)

    def is_totally_positive(self) -> bool:
        return self.num.is_totally_positive()

    def compare(self, other: object, which: str = IDENTITY) -> int:
        """Exact three-way comparison under the chosen real embedding."""
        o = self._coerce(other)
        return (self - o).sign(which)

    def __lt__(self, other: object) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: object) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: object) -> bool:
        return self.compare(other) >= 0

    def __abs__(self) -> FieldElement:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.num) / self.den

    def float_conj(self) -> float:
        return self.num.float_conj() / self.den


# -- textual element syntax --------------------------------------------------------

_INT_RE = re.compile(r"^[+-]?\d+$")
_W_TERM_RE = re.compile(r"^(?P<sign>[+-]?)(?:(?P<coef>\d+)\*)?w$")


def _parse_term(field: Field, term: str) -> RingElement:
    if _INT_RE.match(term):
        return RingElement(field, int(term), 0)
    m = _W_TERM_RE.match(term)
    if m:
        if field.is_rational:
            raise RingError(f"term {term!r} uses w but the field is Q")
        coef = int(m.group("coef")) if m.group("coef") else 1
        if m.group("sign") == "-":
            coef = -coef
        return RingElement(field, 0, coef)
    raise RingError(f"cannot parse ring element term {term!r}")


def parse_element(field: Field, text) -> RingElement:
    """Parse 'a', 'a+b*w', 'a-b*w' or '-b*w' into a ring element."""
    if isinstance(text, int):
        return RingElement(field, text, 0)
    s = str(text).strip().replace(" ", "")
    if not s:
        raise RingError("empty element string")
    # Split into at most two signed terms.
    terms: list[str] = []
    start = 0
    for i, ch in enumerate(s):
        if ch in "+-" and i > start:
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    if not 1 <= len(terms) <= 2:
        raise RingError(f"cannot parse ring element {text!r}")
    out = field.zero()
    seen_w = False
    for t in terms:
        part = _parse_term(field, t)
        if part.b and seen_w:
            raise RingError(f"repeated w term in {text!r}")
        seen_w = seen_w or bool(part.b)
        out = out + part
    return out


def format_element(x: RingElement) -> str:
    """Canonical textual form; round-trips bit-exactly through parse."""
    if x.b == 0:
        return str(x.a)
    wpart = f"{abs(x.b)}*w"
    if x.a == 0:
        return ("-" if x.b < 0 else "") + wpart
    return f"{x.a}{'+' if x.b > 0 else '-'}{wpart}"


def parse_field_element(field: Field, text) -> FieldElement:
    """Parse 'elem', 'elem/den' or '(elem)/den' into a field element."""
    if isinstance(text, int):
        return FieldElement.from_int(field, text)
    s = str(text).strip().replace(" ", "")
    if "/" in s:
        left, right = s.rsplit("/", 1)
        if left.startswith("(") and left.endswith(")"):
            left = left[1:-1]
        return FieldElement(parse_element(field, left), int(right))
    return FieldElement(parse_element(field, s), 1, _reduced=True)


def format_field_element(x: FieldElement) -> str:
    return str(x)

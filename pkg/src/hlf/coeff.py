"""Exact coefficient domains: finite fields and tracked p-adic approximations.

Finite fields F_q are F_p[w]/(m(w)) with an explicit monic modulus; the prime
field skips the polynomial layer.  PAdicApprox keeps an integer unit part, an
exact exponent of p and a digit count, with a three-state exactness flag so
that cancellation degrades the state instead of silently lying.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, PrecisionExhaustedError, ZeroElementError


class _Unknown:
    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        return False


#: sentinel returned by valuation queries that the tracked digits cannot settle.
UNKNOWN = _Unknown()


def _poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_mulmod(a, b, mod, p):
    # schoolbook product then reduction by the monic modulus, all mod p
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + ai * bj) % p
    deg = len(mod) - 1
    while len(res) > deg:
        top = res.pop()
        if top:
            for k in range(deg):
                res[len(res) - deg + k] = (res[len(res) - deg + k] - top * mod[k]) % p
    return _poly_trim(res)


def _poly_divmod(a, b, p):
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    while len(a) >= len(b) and _poly_trim(a):
        shift = len(a) - len(b)
        coef = a[-1] * inv_lead % p
        q[shift] = coef
        for k in range(len(b)):
            a[shift + k] = (a[shift + k] - coef * b[k]) % p
        a = _poly_trim(a)
    return _poly_trim(q), a


class FqField:
    """F_p[w]/(modulus); modulus is a monic coefficient tuple, low degree first."""

    def __init__(self, q, modulus=None, gen="w"):
        p, deg = _prime_power(q)
        if deg > 1:
            if modulus is None:
                raise ValueError("extension field %d needs an explicit modulus" % q)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != deg + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree %d" % deg)
            if not _is_irreducible(modulus, p):
                raise ValueError("modulus is reducible over F_%d" % p)
        else:
            modulus = (0, 1)
        self.q = q
        self.p = p
        self.deg = deg
        self.modulus = modulus
        self.gen = gen

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and self.q == other.q
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        if self.deg == 1:
            return "Fq(%d)" % self.q
        return "Fq(%d;%s)" % (self.q, _poly_str(self.modulus, self.gen))

    def __call__(self, value):
        """Coerce an int, an FqElem of the same field, or a coefficient list."""
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldMismatchError("element of %r used in %r" % (value.field, self))
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,))
        return FqElem(self, tuple(c % self.p for c in value))

    def zero(self):
        return FqElem(self, ())

    def one(self):
        return FqElem(self, (1,))

    def generator(self):
        if self.deg == 1:
            raise ValueError("prime field has no polynomial generator")
        return FqElem(self, (0, 1))

    def elements(self):
        """All q elements, counting order; small fields only."""
        def rec(k):
            if k == 0:
                yield ()
                return
            for rest in rec(k - 1):
                for c in range(self.p):
                    yield rest + (c,)
        for cs in rec(self.deg):
            yield FqElem(self, cs)


class FqElem:
    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(_poly_trim([c % field.p for c in coeffs]))

    def _check(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("mixed finite fields %r / %r" % (self.field, other.field))
        return other

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return (
            isinstance(other, FqElem)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FqElem(self.field, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return self.field.zero()
        return FqElem(
            self.field,
            _poly_mulmod(list(self.coeffs), list(other.coeffs), self.field.modulus, self.field.p),
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in %r" % self.field)
        p = self.field.p
        if self.field.deg == 1:
            return FqElem(self.field, (pow(self.coeffs[0], p - 2, p),))
        # extended euclid in F_p[w] against the modulus
        r0, r1 = list(self.field.modulus), list(self.coeffs)
        s0, s1 = [], [1]
        while _poly_trim(r1):
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            prod = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                for j, sj in enumerate(s1):
                    prod[i + j] = (prod[i + j] + qi * sj) % p
            n = max(len(s0), len(prod))
            s0, s1 = s1, _poly_trim(
                [(s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0) for i in range(n)]
            )
        if len(r0) != 1:
            raise ZeroDivisionError("element not invertible; modulus not irreducible?")
        lead_inv = pow(r0[0], p - 2, p)
        return FqElem(self.field, [c * lead_inv for c in s0])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def as_int(self):
        """Integer representative, prime fields only."""
        if self.field.deg != 1:
            raise ValueError("as_int on an extension field element")
        return self.coeffs[0] if self.coeffs else 0

    def multiplicative_order(self):
        if not self.coeffs:
            raise ZeroElementError("order of zero")
        k, acc = 1, self
        one = self.field.one()
        while acc != one:
            acc = acc * self
            k += 1
        return k

    def __repr__(self):
        return _poly_str(self.coeffs, self.field.gen) if self.coeffs else "0"


def _poly_str(coeffs, gen):
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append(gen if c == 1 else "%d*%s" % (c, gen))
        else:
            parts.append("%s^%d" % (gen, i) if c == 1 else "%d*%s^%d" % (c, gen, i))
    return " + ".join(reversed(parts)) if parts else "0"


def _prime_power(q):
    if q < 2:
        raise ValueError("field size must be a prime power, got %d" % q)
    p = None
    for c in range(2, q + 1):
        if q % c == 0:
            p = c
            break
    deg = 0
    n = q
    while n % p == 0:
        n //= p
        deg += 1
    if n != 1:
        raise ValueError("%d is not a prime power" % q)
    return p, deg


def _is_irreducible(modulus, p):
    deg = len(modulus) - 1
    # no roots kills degree <= 3; beyond that, trial division by low factors
    for a in range(p):
        acc = 0
        for c in reversed(modulus):
            acc = (acc * a + c) % p
        if acc == 0:
            return False
    if deg <= 3:
        return True
    def monics(d):
        def rec(k):
            if k == 0:
                yield ()
                return
            for rest in rec(k - 1):
                for c in range(p):
                    yield rest + (c,)
        for tail in rec(d):
            yield list(tail) + [1]
    for d in range(2, deg // 2 + 1):
        for cand in monics(d):
            _, r = _poly_divmod(list(modulus), cand, p)
            if not r:
                return False
    return True


# --- p-adics -----------------------------------------------------------------

_ZERO, _UNIT, _UNSETTLED = "zero", "unit", "unsettled"


class PAdicApprox:
    """unit * p^exponent with `prec` certified digits of the unit.

    States: exact zero, unit part known (valuation exact), or unsettled, which
    means the value is only known to be divisible by p^bound with nothing
    certified beyond that.
    """

    def __init__(self, p, state, unit=0, exponent=0, prec=0):
        self.p = p
        self.state = state
        if state == _UNIT:
            m = p ** prec
            unit %= m
            if unit % p == 0:
                raise ValueError("unit part divisible by p")
        self.unit = unit
        self.exponent = exponent
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, p):
        return cls(p, _ZERO)

    @classmethod
    def unsettled(cls, p, bound):
        return cls(p, _UNSETTLED, exponent=bound)

    @classmethod
    def from_rational(cls, x, p, prec=20):
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        k = padic_val(x, p)
        num, den = x.numerator, x.denominator
        if k > 0:
            num //= p ** k
        elif k < 0:
            den //= p ** (-k)
        m = p ** prec
        unit = num * pow(den, -1, m) % m
        return cls(p, _UNIT, unit=unit, exponent=k, prec=prec)

    # queries

    def is_exact_zero(self):
        return self.state == _ZERO

    def valuation(self):
        """Exact valuation, or UNKNOWN when the digits cannot settle it."""
        if self.state == _ZERO:
            raise ZeroElementError("valuation of exact zero")
        if self.state == _UNSETTLED:
            return UNKNOWN
        return self.exponent

    def known_mod(self):
        """The modulus p^k through which the value is certified."""
        if self.state == _ZERO:
            return None
        if self.state == _UNSETTLED:
            return self.p ** self.exponent
        return self.p ** (self.exponent + self.prec) if self.exponent >= 0 else None

    def residue(self):
        """Image in F_p; needs a nonnegative certified valuation."""
        if self.state == _ZERO:
            return 0
        if self.state == _UNSETTLED:
            if self.exponent >= 1:
                return 0
            raise PrecisionExhaustedError("residue of an unsettled value")
        if self.exponent > 0:
            return 0
        if self.exponent < 0:
            raise ZeroElementError("residue of a value with negative valuation")
        return self.unit % self.p

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return PAdicApprox.from_rational(other, self.p, max(self.prec, 20))
        if isinstance(other, PAdicApprox):
            if other.p != self.p:
                raise FieldMismatchError("mixed primes %d / %d" % (self.p, other.p))
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.state == _ZERO:
            return other
        if other.state == _ZERO:
            return self
        s = min(self._minexp(), other._minexp())
        a, b = self._shift(-s), other._shift(-s)
        # certified moduli after the shift; both exponents are now >= 0
        floors = []
        rep = 0
        for x in (a, b):
            if x.state == _UNSETTLED:
                floors.append(x.exponent)
            else:
                floors.append(x.exponent + x.prec)
                rep += x.unit * p ** x.exponent
        floor = min(floors)
        rep %= p ** floor
        if rep == 0:
            return PAdicApprox.unsettled(p, floor)._shift(s)
        k = padic_val(rep, p)
        if k >= floor:
            return PAdicApprox.unsettled(p, floor)._shift(s)
        out = PAdicApprox(p, _UNIT, unit=rep // p ** k, exponent=k, prec=floor - k)
        return out._shift(s)

    def _minexp(self):
        return self.exponent if self.state != _ZERO else 0

    def _shift(self, k):
        """Multiply by p^k; exact on every state."""
        if self.state == _ZERO:
            return self
        return PAdicApprox(self.p, self.state, unit=self.unit,
                           exponent=self.exponent + k, prec=self.prec)

    __radd__ = __add__

    def __neg__(self):
        if self.state != _UNIT:
            return self
        return PAdicApprox(self.p, _UNIT, unit=-self.unit % self.p ** self.prec,
                           exponent=self.exponent, prec=self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.state == _ZERO or other.state == _ZERO:
            return PAdicApprox.zero(p)
        if self.state == _UNSETTLED or other.state == _UNSETTLED:
            return PAdicApprox.unsettled(p, self._minexp() + other._minexp())
        prec = min(self.prec, other.prec)
        return PAdicApprox(p, _UNIT, unit=self.unit * other.unit % p ** prec,
                           exponent=self.exponent + other.exponent, prec=prec)

    __rmul__ = __mul__

    def __repr__(self):
        if self.state == _ZERO:
            return "0 (exact)"
        if self.state == _UNSETTLED:
            return "O(%d^%d)" % (self.p, self.exponent)
        return "%d*%d^%d + O(%d^%d)" % (
            self.unit, self.p, self.exponent, self.p, self.exponent + self.prec)


def padic_val(x, p):
    """v_p of an exact rational, an int, or a PAdicApprox.

    Returns UNKNOWN for an unsettled approximation; refuses exact zero.
    """
    if isinstance(x, PAdicApprox):
        return x.valuation()
    x = Fraction(x)
    if x == 0:
        raise ZeroElementError("valuation of zero")
    k = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        k += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        k -= 1
    return k


def rational_mod_p(x, p):
    """Residue of a p-integral rational in F_p as an int."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroElementError("denominator divisible by %d" % p)
    return x.numerator * pow(x.denominator, -1, p) % p


def teichmuller(a, p, prec=20):
    """Multiplicative representative of a in F_p, as a PAdicApprox mod p^prec.

    Computed as the fixed point of x -> x^p starting from the residue; the
    iteration is stationary after prec steps.
    """
    if isinstance(a, FqElem):
        if a.field.deg != 1 or a.field.p != p:
            raise FieldMismatchError("teichmuller needs an F_p residue")
        a = a.as_int()
    a %= p
    if a == 0:
        return PAdicApprox.zero(p)
    m = p ** prec
    x = a
    while True:
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return PAdicApprox(p, _UNIT, unit=x, exponent=0, prec=prec)


def teichmuller_exact(a, p):
    """Exact rational Teichmuller lift when one exists (residues 0, 1, p-1)."""
    if isinstance(a, FqElem):
        a = a.as_int()
    a %= p
    if a == 0:
        return Fraction(0)
    if a == 1:
        return Fraction(1)
    if a == p - 1 and p > 2:
        return Fraction(-1)
    return None

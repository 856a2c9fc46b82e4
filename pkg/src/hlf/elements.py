"""Elements of a tower as exact fractions of parameter Laurent polynomials.

An element is P/Q where P and Q are finite sums of monomials coeff * prod
var^e over the tower's series parameters, with exact coefficients (FqElem in
positive characteristic, Fraction otherwise; powers of p in mixed fields live
inside the rational coefficient).  Q is normalized so that its monomial of
minimal rank valuation is exactly 1; distinct monomials over one field never
share a valuation vector, so support minima give exact valuations and zero is
represented uniquely as 0/1.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import FqElem
from .errors import FieldMismatchError


def _vkey(v):
    # inverse lexicographic: last component dominates
    return tuple(reversed(v))


def lp_is_zero(a):
    return not a


def lp_add(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def lp_neg(a):
    return {k: -c for k, c in a.items()}


def lp_mul(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k)
            s = ca * cb if s is None else s + ca * cb
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def lp_scale(a, c):
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def lp_shift(a, shift):
    return {tuple(x - y for x, y in zip(k, shift)): c for k, c in a.items()}


def lp_min_monomial(field, a):
    """(exps, coeff) of the monomial with minimal rank valuation."""
    best = None
    best_key = None
    for k, c in a.items():
        key = _vkey(field.monomial_valuation(c, k))
        if best_key is None or key < best_key:
            best_key = key
            best = (k, c)
    return best


class Element:
    """Field element in canonical fraction form.  Construct through the
    factory methods or parsing; arithmetic keeps the form canonical."""

    __hash__ = None

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field, num, den=None):
        if den is None:
            den = {(0,) * len(field.series_params()): field.coeff_one()}
        if lp_is_zero(den):
            raise ZeroDivisionError("zero denominator over %r" % field)
        if lp_is_zero(num):
            return cls(field, {}, {(0,) * len(field.series_params()): field.coeff_one()})
        exps0, c0 = lp_min_monomial(field, den)
        if isinstance(c0, FqElem):
            inv = c0.inverse()
        else:
            inv = Fraction(1) / c0
        num = lp_scale(lp_shift(num, exps0), inv)
        den = lp_scale(lp_shift(den, exps0), inv)
        if num == den:
            return cls.one(field)
        return cls(field, num, den)

    @classmethod
    def zero(cls, field):
        return cls.make(field, {})

    @classmethod
    def one(cls, field):
        nvars = len(field.series_params())
        return cls(field, {(0,) * nvars: field.coeff_one()},
                   {(0,) * nvars: field.coeff_one()})

    @classmethod
    def from_coeff(cls, field, c):
        c = field.coerce_coeff(c)
        nvars = len(field.series_params())
        return cls.make(field, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, field, coeff=1, **exps):
        """Element.monomial(F, 2, t=-1, u=3) is 2*t^-1*u^3."""
        c = field.coerce_coeff(coeff)
        sp = field.series_params()
        for name in exps:
            if name not in sp:
                raise FieldMismatchError("%r is not a series parameter of %r" % (name, field))
        key = tuple(exps.get(v, 0) for v in sp)
        return cls.make(field, {key: c} if c else {})

    # --- predicates ---

    def is_zero(self):
        return lp_is_zero(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_one(self):
        return self.num == self.den

    def val_vector(self):
        """Full rank valuation vector; the denominator is normalized to
        valuation zero so the numerator's support minimum is exact."""
        from .errors import ZeroElementError
        if self.is_zero():
            raise ZeroElementError("valuation of zero")
        exps, c = lp_min_monomial(self.field, self.num)
        return self.field.monomial_valuation(c, exps)

    # --- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.field != self.field:
                raise FieldMismatchError(
                    "elements of %r and %r" % (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction, FqElem)):
            return Element.from_coeff(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return Element.make(self.field, lp_add(self.num, o.num), dict(self.den))
        return Element.make(
            self.field,
            lp_add(lp_mul(self.num, o.den), lp_mul(o.num, self.den)),
            lp_mul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Element(self.field, lp_neg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Element.make(self.field, lp_mul(self.num, o.num),
                            lp_mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Element.make(self.field, dict(self.den), dict(self.num))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Element.one(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return lp_mul(self.num, o.den) == lp_mul(o.num, self.den)

    # --- printing ---

    def __repr__(self):
        num = _lp_str(self.field, self.num)
        if self.den == {(0,) * len(self.field.series_params()): self.field.coeff_one()}:
            return num
        return "(%s)/(%s)" % (num, _lp_str(self.field, self.den))


def _coeff_str(c):
    if isinstance(c, FqElem):
        s = repr(c)
        return "(%s)" % s if ("+" in s or "^" in s or "*" in s) else s
    if isinstance(c, Fraction) and c.denominator != 1:
        return "%d/%d" % (c.numerator, c.denominator)
    return str(int(c))


def _lp_str(field, a):
    if not a:
        return "0"
    sp = field.series_params()
    items = sorted(a.items(), key=lambda kv: _vkey(field.monomial_valuation(kv[1], kv[0])))
    signed = isinstance(next(iter(a.values())), (int, Fraction))
    parts = []
    for k, c in items:
        neg = signed and c < 0
        cc = -c if neg else c
        vars_part = "*".join(
            v if e == 1 else "%s^%d" % (v, e) for v, e in zip(sp, k) if e != 0
        )
        if vars_part and (cc == 1):
            body = vars_part
        elif vars_part:
            body = "%s*%s" % (_coeff_str(cc), vars_part)
        else:
            body = _coeff_str(cc)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)

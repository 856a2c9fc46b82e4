"""Expansion along the top uniformizer: slices, digits, residue and lifts.

Over base((t)) an element P/Q expands into residue field coefficients X_i by
the linear recursion Q_0 X_i = P_i - sum_{j>=1} Q_j X_{i-j}; normalization
makes Q_0 a unit of the integer ring one level down, so every X_i is exact.
Over Qp{{t}} and Qp the expansion runs along p instead, peeling one digit per
step with a section of the reduction map; the plain integer section keeps all
arithmetic in Q.  Jets are finite windows of such expansions.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import UNKNOWN, rational_mod_p, teichmuller_exact
from .elements import Element
from .errors import NotIntegralError, PrecisionExhaustedError, UnsupportedFieldError
from .fields import FiniteBase, MixedExt, QpBase, SeriesExt


def _slices(field, lp):
    """Split a Laurent polynomial over base((t)) into Elements of the base,
    keyed by t exponent."""
    base = field.residue()
    out = {}
    for k, c in lp.items():
        lev = out.setdefault(k[-1], {})
        lev[k[:-1]] = c
    return {i: Element.make(base, lev) for i, lev in out.items()}


class Jet:
    """Window of expansion coefficients: coeffs[k] sits at var^(start+k).
    Coefficients are Elements of the residue field; everything past the
    window is unknown, not zero."""

    def __init__(self, field, start, coeffs, var):
        self.field = field
        self.start = start
        self.coeffs = list(coeffs)
        self.var = var

    def stop(self):
        return self.start + len(self.coeffs)

    def coeff(self, i):
        if i < self.start:
            return Element.zero(self.field.residue())
        if i >= self.stop():
            return UNKNOWN
        return self.coeffs[i - self.start]

    def window(self, lo, hi):
        return [self.coeff(i) for i in range(lo, hi)]

    def _trimmed(self):
        s, cs = self.start, list(self.coeffs)
        while cs and cs[0].is_zero():
            cs.pop(0)
            s += 1
        return s, cs

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (self.field == other.field and self.var == other.var
                and self._trimmed() == other._trimmed())

    def __add__(self, other):
        lo = min(self.start, other.start)
        hi = min(self.stop(), other.stop())
        return Jet(self.field, lo,
                   [self.coeff(i) + other.coeff(i) for i in range(lo, hi)], self.var)

    def __mul__(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        out = []
        for k in range(n):
            acc = Element.zero(self.field.residue())
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return Jet(self.field, self.start + other.start, out, self.var)

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            i = self.start + k
            cs = repr(c)
            if " " in cs or cs.startswith("-"):
                cs = "(%s)" % cs
            if i == 0:
                parts.append(cs)
            else:
                v = self.var if i == 1 else "%s^%d" % (self.var, i)
                parts.append(v if cs == "1" else "%s*%s" % (cs, v))
        tail = "O(%s^%d)" % (self.var, self.stop())
        return " + ".join(parts + [tail]) if parts else ("0 + " + tail)


def expand(x, terms):
    """First `terms` expansion coefficients of x along the top uniformizer."""
    f = x.field
    if isinstance(f, SeriesExt):
        return _expand_series(x, terms)
    if isinstance(f, MixedExt):
        return _expand_p(x, terms, _mixed_residue, _mixed_lift_plain)
    if isinstance(f, QpBase):
        return _expand_p(x, terms, _qp_residue, _qp_lift_plain)
    raise UnsupportedFieldError("no uniformizer to expand along in %r" % f)


def _expand_series(x, terms):
    f = x.field
    var = f.param
    if x.is_zero():
        return Jet(f, 0, [], var)
    P = _slices(f, x.num)
    Q = _slices(f, x.den)
    q0inv = Q[0].inverse()
    i0 = min(P)
    xs = {}
    for i in range(i0, i0 + terms):
        acc = P.get(i, Element.zero(f.residue()))
        for j, qj in Q.items():
            if j >= 1 and (i - j) in xs:
                acc = acc - qj * xs[i - j]
        xs[i] = acc * q0inv
    return Jet(f, i0, [xs[i] for i in range(i0, i0 + terms)], var)


def _expand_p(x, terms, res, lift):
    f = x.field
    p = f.prime()
    var = str(p)
    if x.is_zero():
        return Jet(f, 0, [], var)
    k0 = x.val_vector()[-1]
    y = x * Element.from_coeff(f, Fraction(p) ** -k0)
    out = []
    for _ in range(terms):
        d = res(y)
        out.append(d)
        y = (y - lift(f, d)) * Element.from_coeff(f, Fraction(1, p))
    return Jet(f, k0, out, var)


# --- residue maps ------------------------------------------------------------

def residue(x):
    """Image of x in the residue field one level down; needs the top rank one
    valuation of x to be nonnegative."""
    f = x.field
    if f.residue() is None:
        raise UnsupportedFieldError("%r has no residue field" % f)
    if not x.is_zero() and x.val_vector()[-1] < 0:
        raise NotIntegralError("negative top valuation %r" % (x.val_vector(),))
    if isinstance(f, SeriesExt):
        if x.is_zero():
            return Element.zero(f.residue())
        P = _slices(f, x.num)
        Q = _slices(f, x.den)
        p0 = P.get(0)
        return Element.zero(f.residue()) if p0 is None else p0 * Q[0].inverse()
    if isinstance(f, MixedExt):
        return _mixed_residue(x)
    if isinstance(f, QpBase):
        return _qp_residue(x)
    raise UnsupportedFieldError("no residue map for %r" % f)


def _lp_mod_p(lp, p, fq):
    out = {}
    for k, c in lp.items():
        r = rational_mod_p(c, p)
        if r % p:
            out[k] = fq(r)
    return out


def _mixed_residue(x):
    f = x.field
    rf = f.residue()
    fq = rf.fq()
    if x.is_zero():
        return Element.zero(rf)
    return Element.make(rf, _lp_mod_p(x.num, f.prime(), fq),
                        _lp_mod_p(x.den, f.prime(), fq))


def _qp_residue(x):
    f = x.field
    rf = f.residue()
    if x.is_zero():
        return Element.zero(rf)
    c = x.num[()] / x.den[()]
    return Element.from_coeff(rf, rational_mod_p(c, f.p))


# --- sections of the residue map --------------------------------------------

def _upoly_trim(cs):
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _upoly_divmod(a, b):
    a = list(a)
    q = [a[0].field.zero() for _ in range(max(0, len(a) - len(b) + 1))]
    inv = b[-1].inverse()
    while len(a) >= len(b):
        c = a[-1] * inv
        q[len(a) - len(b)] = c
        for k in range(len(b)):
            a[len(a) - len(b) + k] = a[len(a) - len(b) + k] - c * b[k]
        _upoly_trim(a)
        if not a:
            break
    return q, a


def _upoly_gcd(a, b):
    while b:
        _, r = _upoly_divmod(a, b)
        a, b = b, r
    return a


def canonical_fraction(x):
    """Unique reduced form for fractions over a one variable series field with
    finite coefficients: gcd removed, denominator's lowest monomial 1."""
    f = x.field
    if not (isinstance(f, SeriesExt) and isinstance(f.residue(), FiniteBase)):
        return x
    if x.is_zero():
        return x
    ns = min(k[0] for k in x.num)
    ds = min(k[0] for k in x.den)
    np = _poly_list(x.num, ns)
    dp = _poly_list(x.den, ds)
    g = _upoly_gcd(list(np), list(dp))
    if len(g) > 1:
        np, _ = _upoly_divmod(np, g)
        dp, _ = _upoly_divmod(dp, g)
        _upoly_trim(np)
        _upoly_trim(dp)
    num = {(ns + i,): c for i, c in enumerate(np) if not c.is_zero()}
    den = {(ds + i,): c for i, c in enumerate(dp) if not c.is_zero()}
    return Element.make(f, num, den)


def _poly_list(lp, shift):
    deg = max(k[0] for k in lp) - shift
    fq = next(iter(lp.values())).field
    out = [fq.zero()] * (deg + 1)
    for k, c in lp.items():
        out[k[0] - shift] = c
    return out


def _qp_lift_plain(f, dbar):
    a = 0 if dbar.is_zero() else dbar.num[()].as_int()
    return Element.from_coeff(f, a)


def _mixed_lift(f, xbar, coeff_lift):
    xbar = canonical_fraction(xbar)
    def conv(lp):
        out = {}
        for k, c in lp.items():
            v = coeff_lift(c)
            if v:
                out[k] = v
        return out
    if xbar.is_zero():
        return Element.zero(f)
    return Element.make(f, conv(xbar.num), conv(xbar.den))


def _mixed_lift_plain(f, xbar):
    return _mixed_lift(f, xbar, lambda c: Fraction(c.as_int()))


def lift(field, xbar, section="plain"):
    """Lift an element of field.residue() back up, a right inverse of
    residue().  The plain section lifts digits as integers and is exact for
    every p; the teichmuller section is multiplicative on coefficients but
    only has exact values for p <= 3."""
    rf = field.residue()
    if rf is None or xbar.field != rf:
        raise UnsupportedFieldError("lift target %r does not match %r" % (field, xbar.field))
    if isinstance(field, SeriesExt):
        if xbar.is_zero():
            return Element.zero(field)
        grow = lambda lp: {k + (0,): c for k, c in lp.items()}
        return Element.make(field, grow(xbar.num), grow(xbar.den))
    if isinstance(field, MixedExt):
        if section == "teichmuller":
            return _mixed_lift(field, xbar, lambda c: _teich_or_raise(c, field.prime()))
        return _mixed_lift_plain(field, xbar)
    if isinstance(field, QpBase):
        if section == "teichmuller":
            a = 0 if xbar.is_zero() else xbar.num[()].as_int()
            return Element.from_coeff(field, _teich_or_raise_int(a, field.p))
        return _qp_lift_plain(field, xbar)
    raise UnsupportedFieldError("no residue map for %r" % field)


def _teich_or_raise(c, p):
    return _teich_or_raise_int(c.as_int(), p)


def _teich_or_raise_int(a, p):
    v = teichmuller_exact(a, p)
    if v is None:
        raise PrecisionExhaustedError(
            "no exact multiplicative representative for %d mod %d" % (a, p))
    return v

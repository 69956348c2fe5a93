"""Exact capped multivariate power series over the rationals.

Everything downstream works in the ring Q[z_1..z_s] / (z_i^{caps_i + 1}),
i.e. power series truncated per variable.  Coefficients are exact
rationals; zero coefficients are never stored.  The only series that are
ever inverted are units (nonzero constant term), so no Laurent
representation is needed: quotients by the odd series sigma(z) are always
folded into unit-series ratios first.

sigma denotes the function sigma(x) = exp(x/2) - exp(-x/2), whose Taylor
expansion sum_{m>=0} x^(2m+1) / (4^m (2m+1)!) has exact rational
coefficients.  S(x) = sigma(x)/x is the associated unit series.
"""
from __future__ import annotations

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is normally present
    from fractions import Fraction as Q

QZERO = Q(0)
QONE = Q(1)


def qdiv(a, b):
    """Exact a/b for ints or rationals."""
    return Q(a) / Q(b)


class TruncSeries:
    """Sparse exact series with an independent degree cap per variable.

    terms maps exponent tuples (componentwise <= caps) to nonzero
    rationals.  Instances are treated as immutable: no method mutates an
    existing instance, which keeps concurrent readers safe.
    """

    __slots__ = ("caps", "terms")

    def __init__(self, caps, terms=None):
        self.caps = tuple(caps)
        self.terms = {} if terms is None else terms

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, caps):
        return cls(caps)

    @classmethod
    def const(cls, caps, c):
        c = Q(c)
        if c == 0:
            return cls(caps)
        return cls(caps, {(0,) * len(caps): c})

    @classmethod
    def from_form(cls, form, caps):
        """The degree-one series for a linear form (tuple of int coeffs)."""
        n = len(caps)
        if len(form) != n:
            raise ValueError("form length does not match caps")
        terms = {}
        for i, c in enumerate(form):
            if c and caps[i] >= 1:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Q(c)
        return cls(caps, terms)

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coefficient(self, exps):
        exps = tuple(exps)
        if len(exps) != len(self.caps):
            raise ValueError("exponent tuple has wrong length")
        for e, cap in zip(exps, self.caps):
            if e > cap:
                raise ValueError(f"exponent {exps} beyond caps {self.caps}")
            if e < 0:
                raise ValueError("negative exponent")
        return self.terms.get(exps, QZERO)

    def min_total_degree(self):
        """Smallest total degree with a nonzero coefficient; None if zero."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, TruncSeries)
                and self.caps == other.caps and self.terms == other.terms)

    def __hash__(self):  # pragma: no cover - not used as dict key
        return hash((self.caps, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"TruncSeries(caps={self.caps}, 0)"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            bits.append(f"{self.terms[e]}*z^{e}")
        return f"TruncSeries(caps={self.caps}, " + " + ".join(bits) + ")"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return TruncSeries(self.caps, out)

    def __neg__(self):
        return TruncSeries(self.caps, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = Q(other)
            if c == 0:
                return TruncSeries(self.caps)
            return TruncSeries(self.caps,
                               {e: v * c for e, v in self.terms.items()})
        self._check(other)
        caps = self.caps
        out = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        bitems = list(b.items())
        for e1, c1 in a.items():
            for e2, c2 in bitems:
                e = tuple(map(sum, zip(e1, e2)))
                ok = True
                for x, cap in zip(e, caps):
                    if x > cap:
                        ok = False
                        break
                if not ok:
                    continue
                v = out.get(e)
                if v is None:
                    out[e] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v == 0:
                        del out[e]
                    else:
                        out[e] = v
        return TruncSeries(caps, out)

    __rmul__ = __mul__

    def _check(self, other):
        if self.caps != other.caps:
            raise ValueError(f"cap mismatch: {self.caps} vs {other.caps}")


# -- linear forms -----------------------------------------------------

def zvars_form(coeff, vars_, nvars):
    """Linear form coeff * sum(z_i for i in vars_), as a coefficient tuple."""
    form = [0] * nvars
    for i in vars_:
        form[i] += coeff
    return tuple(form)


def form_is_zero(form):
    return not any(form)


# -- sigma and friends ------------------------------------------------

def sigma_series(form, caps):
    """sigma(L) for a linear form L, truncated to caps.

    sigma(L) = sum_{m>=0} L^(2m+1) / (4^m (2m+1)!).  The zero form gives
    the zero series.
    """
    L = TruncSeries.from_form(form, caps)
    if L.is_zero():
        # either the zero form, or every variable with nonzero coefficient
        # is capped at degree 0: sigma then truncates to 0 as well.
        return TruncSeries.zero(caps)
    out = TruncSeries.zero(caps)
    power = L            # L^(2m+1)
    L2 = L * L
    m = 0
    fact = QONE          # (2m+1)!
    four = QONE          # 4^m
    while not power.is_zero():
        out = out + power * (QONE / (four * fact))
        m += 1
        power = power * L2
        fact = fact * ((2 * m) * (2 * m + 1))
        four = four * 4
    return out


def unit_s_series(form, caps, scale=1):
    """S(scale * L) = sigma(scale*L)/(scale*L), a unit series.

    S(x) = sum_{m>=0} x^(2m) / (4^m (2m+1)!), so the constant term is 1.
    """
    L = TruncSeries.from_form(form, caps) * Q(scale)
    out = TruncSeries.const(caps, 1)
    if L.is_zero():
        return out
    L2 = L * L
    power = L2
    m = 1
    fact = Q(6)          # (2m+1)!
    four = Q(4)          # 4^m
    while not power.is_zero():
        out = out + power * (QONE / (four * fact))
        m += 1
        power = power * L2
        fact = fact * ((2 * m) * (2 * m + 1))
        four = four * 4
    return out


def invert_unit_series(s):
    """Multiplicative inverse of a unit series (nonzero constant term).

    Raises ValueError on a non-unit.
    """
    zero_exp = (0,) * len(s.caps)
    c0 = s.terms.get(zero_exp, QZERO)
    if c0 == 0:
        raise ValueError("cannot invert a series with zero constant term")
    # s = c0 (1 - w) with w of positive minimal degree; 1/s = (1/c0) sum w^j.
    w = TruncSeries.const(s.caps, 1) - s * (QONE / c0)
    out = TruncSeries.const(s.caps, 1)
    power = w
    while not power.is_zero():
        out = out + power
        power = power * w
    return out * (QONE / c0)


def sigma_ratio_series(e, vars_, caps):
    """sigma(e * z_V) / sigma(z_V) as a capped series, V = vars_.

    Equal to e * S(e*z_V) / S(z_V); an even unit series times e.  For
    e = 0 the numerator vanishes identically and the zero series is
    returned.
    """
    if e == 0:
        return TruncSeries.zero(caps)
    form = zvars_form(1, vars_, len(caps))
    num = unit_s_series(form, caps, scale=e)
    den = unit_s_series(form, caps, scale=1)
    return (num * invert_unit_series(den)) * Q(e)


def sigma_over_sigma(a, b, vars_, caps):
    """sigma(a * z_V) / sigma(b * z_V) for nonzero b.

    Computed as (a/b) * S(a z_V) / S(b z_V).  For a = 0 returns the zero
    series; b = 0 is rejected (the quotient would be Laurent).
    """
    if b == 0:
        raise ValueError("denominator form sigma(0) is identically zero")
    if a == 0:
        return TruncSeries.zero(caps)
    form = zvars_form(1, vars_, len(caps))
    num = unit_s_series(form, caps, scale=a)
    den = unit_s_series(form, caps, scale=b)
    return (num * invert_unit_series(den)) * qdiv(a, b)


def coefficient_at(s, exps):
    """Exact coefficient of the given exponent tuple (errors beyond caps)."""
    return s.coefficient(exps)

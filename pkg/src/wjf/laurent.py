"""Exact sparse Laurent arithmetic in four variables on the (1/4)Z^4 grid.

Exponent vectors are stored scaled by 4, so every exponent that occurs in
this package (integer and half-integer dual vectors, quarter-integer theta
intermediates) is a 4-tuple of ints.  Internally a scaled tuple is packed
into a single int with four biased 16-bit fields; packed keys compare the
same way as lexicographic order on the scaled tuples, which fixes the
canonical term order used for serialization and equality.

Coefficients are exact: int where possible, fractions.Fraction otherwise.
No floating point exists anywhere in the package.
"""
from __future__ import annotations

from fractions import Fraction

from ._backend import poly_mul as _poly_mul
from .errors import ExponentOverflow, NotDivisible

__all__ = [
    "ExponentVector",
    "LaurentPoly",
    "ZERO_KEY",
    "pack",
    "unpack",
    "lp_norm",
    "lp_mul",
    "lp_exact_div",
]

# An ExponentVector is a 4-tuple of ints: the exponent vector times 4.
ExponentVector = tuple

_BIAS = 1 << 15
_MASK = 0xFFFF
# Largest scaled component allowed at construction.  One multiplication of
# two in-range polynomials cannot carry between packed fields.
_COMPONENT_LIMIT = 1 << 13

ZERO_KEY = (_BIAS << 48) | (_BIAS << 32) | (_BIAS << 16) | _BIAS


def pack(scaled):
    """Pack a scaled exponent 4-tuple into a single int key."""
    a, b, c, d = scaled
    if (a | b | c | d) >> 62 or max(abs(a), abs(b), abs(c), abs(d)) >= _COMPONENT_LIMIT:
        raise ExponentOverflow(f"scaled exponent out of range: {scaled!r}")
    return ((a + _BIAS) << 48) | ((b + _BIAS) << 32) | ((c + _BIAS) << 16) | (d + _BIAS)


def unpack(key):
    """Inverse of :func:`pack`."""
    return (
        (key >> 48) - _BIAS,
        ((key >> 32) & _MASK) - _BIAS,
        ((key >> 16) & _MASK) - _BIAS,
        (key & _MASK) - _BIAS,
    )


def lp_norm(scaled):
    """Squared length of the exponent vector ``scaled / 4``, as an exact number."""
    s = scaled[0] ** 2 + scaled[1] ** 2 + scaled[2] ** 2 + scaled[3] ** 2
    q, r = divmod(s, 16)
    return q if r == 0 else Fraction(s, 16)


def _norm_coeff(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """Finite sum of exact coefficients times monomials zeta^l.

    Instances are immutable by convention; every operation returns a new
    polynomial and no method mutates ``self``.
    """

    __slots__ = ("_p",)

    def __init__(self, terms=None):
        p = {}
        if terms:
            for scaled, coeff in terms.items():
                coeff = _norm_coeff(coeff)
                if coeff:
                    p[pack(scaled)] = coeff
        self._p = p

    @classmethod
    def _raw(cls, packed_dict):
        self = cls.__new__(cls)
        self._p = packed_dict
        return self

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def constant(cls, c):
        c = _norm_coeff(c)
        return cls._raw({ZERO_KEY: c} if c else {})

    @classmethod
    def monomial(cls, scaled, coeff=1):
        coeff = _norm_coeff(coeff)
        return cls._raw({pack(scaled): coeff} if coeff else {})

    # -- inspection ---------------------------------------------------

    def terms(self):
        """Term dict keyed by scaled exponent tuples (a copy)."""
        return {unpack(k): v for k, v in self._p.items()}

    def items_sorted(self):
        """Terms in canonical (lexicographic) order."""
        return [(unpack(k), self._p[k]) for k in sorted(self._p)]

    def coeff(self, scaled):
        return self._p.get(pack(scaled), 0)

    def support_norms(self):
        return [lp_norm(unpack(k)) for k in self._p]

    def __len__(self):
        return len(self._p)

    def __bool__(self):
        return bool(self._p)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._p == other._p
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._p.items()))

    def __repr__(self):
        if not self._p:
            return "LaurentPoly(0)"
        bits = []
        for scaled, c in self.items_sorted()[:6]:
            bits.append(f"{c}*z^{scaled}")
        more = "" if len(self._p) <= 6 else f" ... ({len(self._p)} terms)"
        return "LaurentPoly(" + " + ".join(bits) + more + ")"

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._p, other._p
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                del out[k]
        return LaurentPoly._raw(out)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._p)
        for k, v in other._p.items():
            s = out.get(k, 0) - v
            if s:
                out[k] = s
            else:
                del out[k]
        return LaurentPoly._raw(out)

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._p.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly._raw(_poly_mul(self._p, other._p, ZERO_KEY))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c):
        c = _norm_coeff(c)
        if not c:
            return LaurentPoly.zero()
        if c == 1:
            return self
        return LaurentPoly._raw({k: _norm_coeff(c * v) for k, v in self._p.items()})


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient a / b in the Laurent ring.

    Both operands are shifted to non-negative exponents, the shifted pair is
    divided as ordinary polynomials under lexicographic term order, and a
    nonzero remainder raises :class:`NotDivisible`.  Monomials are units in
    the Laurent ring, so the quotient exists in it exactly when the shifted
    polynomial quotient exists; exponent valuations are additive, which puts
    the shifted quotient back on non-negative exponents.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return LaurentPoly.zero()

    at = {unpack(k): v for k, v in a._p.items()}
    bt = {unpack(k): v for k, v in b._p.items()}

    def min_shift(t):
        ks = list(t)
        return tuple(min(k[i] for k in ks) for i in range(4))

    sa, sb = min_shift(at), min_shift(bt)
    ash = {tuple(x - y for x, y in zip(k, sa)): v for k, v in at.items()}
    bsh = {tuple(x - y for x, y in zip(k, sb)): v for k, v in bt.items()}

    lead_b = max(bsh)
    cb = bsh[lead_b]
    quot = {}
    rem = dict(ash)
    while rem:
        lead_r = max(rem)
        diff = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(x < 0 for x in diff):
            raise NotDivisible("leading monomial not divisible")
        cr = rem[lead_r]
        q = cr / cb if isinstance(cr, Fraction) or isinstance(cb, Fraction) else Fraction(cr, cb)
        q = _norm_coeff(q)
        quot[diff] = q
        for kb, vb in bsh.items():
            k = tuple(x + y for x, y in zip(kb, diff))
            s = rem.get(k, 0) - q * vb
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    shift_back = tuple(x - y for x, y in zip(sa, sb))
    return LaurentPoly({tuple(x + y for x, y in zip(k, shift_back)): v for k, v in quot.items()})

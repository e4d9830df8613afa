"""One-variable exact q-expansions with a fractional leading exponent.

A QSeries represents  q^offset * (c_0 + c_1 q + ... + c_N q^N)  with exact
coefficients and an offset whose denominator divides 24 (the grid on which
eta powers and theta products live).  Binary operations are valid to the
minimum common relative order; the order is carried, never implicit.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import OffsetMismatch

__all__ = ["QSeries", "eta_power", "eisenstein", "sigma", "qs_mul", "qs_add", "qs_scale"]


def sigma(k, n):
    """Divisor power sum sigma_k(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            e = n // d
            if e != d:
                total += e ** k
        d += 1
    return total


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class QSeries:
    __slots__ = ("offset", "coeffs", "weight")

    def __init__(self, coeffs, offset=0, weight=None):
        offset = Fraction(offset)
        if 24 % offset.denominator:
            raise ValueError(f"offset denominator must divide 24: {offset}")
        self.offset = offset
        self.coeffs = tuple(_norm(c) for c in coeffs)
        self.weight = weight

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n] if 0 <= n <= self.order else 0

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.offset == other.offset and list(self.coeffs) == list(other.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if len(self.coeffs) > 6 else ""
        return f"QSeries(offset={self.offset}, [{head}{tail}])"

    def is_zero(self):
        return not any(self.coeffs)

    def truncate(self, n):
        return QSeries(self.coeffs[: n + 1], self.offset, self.weight)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return qs_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, qs_scale(other, -1))


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.order, b.order)
    out = [0] * (n + 1)
    for i, x in enumerate(a.coeffs[: n + 1]):
        if not x:
            continue
        for j in range(n + 1 - i):
            y = b.coeffs[j] if j <= b.order else 0
            if y:
                out[i + j] += x * y
    w = None
    if a.weight is not None and b.weight is not None:
        w = a.weight + b.weight
    return QSeries(out, a.offset + b.offset, w)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    d = a.offset - b.offset
    if d.denominator != 1:
        raise OffsetMismatch(f"offsets differ by {d}, not an integer")
    d = int(d)
    if d > 0:
        a, b, d = b, a, -d
    # now d <= 0: a starts at the lower offset
    shift = -d
    n = min(a.order, b.order + shift)
    out = list(a.coeffs[: n + 1]) + [0] * max(0, n + 1 - len(a.coeffs))
    for j, y in enumerate(b.coeffs):
        if j + shift > n:
            break
        out[j + shift] += y
    return QSeries(out, a.offset)


def qs_scale(a: QSeries, c) -> QSeries:
    return QSeries([c * x for x in a.coeffs], a.offset, a.weight)


def _euler_product(n):
    # prod_{k>=1} (1 - q^k) to order n
    co = [0] * (n + 1)
    co[0] = 1
    for k in range(1, n + 1):
        for i in range(n - k, -1, -1):
            if co[i]:
                co[i + k] -= co[i]
    return co


def _series_inv(a, n):
    inv = [0] * (n + 1)
    inv[0] = 1  # a[0] == 1 for the Euler product
    for m in range(1, n + 1):
        s = 0
        for j in range(1, m + 1):
            if j < len(a) and a[j]:
                s += a[j] * inv[m - j]
        inv[m] = -s
    return inv


def _series_pow(base, k, n):
    result = [0] * (n + 1)
    result[0] = 1
    acc = base[: n + 1]
    while k:
        if k & 1:
            new = [0] * (n + 1)
            for i, x in enumerate(result):
                if not x:
                    continue
                for j in range(n + 1 - i):
                    if acc[j]:
                        new[i + j] += x * acc[j]
            result = new
        k >>= 1
        if k:
            sq = [0] * (n + 1)
            for i, x in enumerate(acc):
                if not x:
                    continue
                for j in range(n + 1 - i):
                    if acc[j]:
                        sq[i + j] += x * acc[j]
            acc = sq
    return result


def eta_power(k: int, n: int) -> QSeries:
    """q-expansion of the k-th power of the Dedekind eta function.

    The offset is k/24; the coefficient part is prod (1-q^m)^k, expanded
    exactly to order n.  Negative k inverts the Euler product first.
    """
    if n < 0:
        raise ValueError("truncation must be >= 0")
    base = _euler_product(n)
    if k < 0:
        base = _series_inv(base, n)
    co = _series_pow(base, abs(k), n)
    return QSeries(co, Fraction(k, 24))


def eisenstein(which: str, n: int) -> QSeries:
    """E4, E6 or the quasimodular G2, exact to order n."""
    if which == "E4":
        co = [1] + [240 * sigma(3, m) for m in range(1, n + 1)]
        w = 4
    elif which == "E6":
        co = [1] + [-504 * sigma(5, m) for m in range(1, n + 1)]
        w = 6
    elif which == "G2":
        co = [Fraction(-1, 24)] + [sigma(1, m) for m in range(1, n + 1)]
        w = 2
    else:
        raise ValueError(f"unknown series {which!r}")
    return QSeries(co, 0, weight=w)

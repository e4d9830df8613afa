"""Truncated Fourier-Jacobi expansions and their operations.

An FJSeries holds the expansion  q^offset * sum_n coeffs[n] q^n  where each
coefficient is a LaurentPoly in the elliptic variables.  Public forms have
offset 0 and are validated at construction: every exponent vector must lie
in the dual lattice of the tagged lattice and obey the weak-form support
bound (l,l) <= 2 n m + M_m, where M_m is the largest minimal norm among the
cosets of (dual lattice)/(m * lattice), computed here by enumeration.

Intermediates (theta fragments, per-coordinate factors) carry fractional
offsets or the A1_4 working tag and skip validation.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ._backend import series_mul as _series_mul
from .errors import (
    ExponentOverflow,
    FractionalOffset,
    InvalidForm,
    LatticeMismatch,
    OffsetResidue,
    WjfError,
)
from .laurent import ZERO_KEY, LaurentPoly, lp_norm, pack, unpack
from .qseries import QSeries, eisenstein
from .weyl import GroupElement, lp_act

__all__ = [
    "FJSeries",
    "LATTICE_RANK",
    "fj_mul",
    "fj_add",
    "fj_sub",
    "fj_scale",
    "fj_mul_qseries",
    "heat_operator",
    "restrict_z4",
    "fj_act",
    "quasiperiodicity_check",
    "max_coset_norm",
    "dual_vectors_by_norm",
    "first_difference",
]

LATTICE_RANK = {"A1": 1, "A1_4": 4, "D4": 4, "D3": 3}

_VALIDATED = ("A1", "D4", "D3")


def _in_dual(lattice, scaled):
    if lattice == "D4":
        r = scaled[0] % 4
        return r in (0, 2) and all(x % 4 == r for x in scaled)
    if lattice == "D3":
        if scaled[3] != 0:
            return False
        r = scaled[0] % 4
        return r in (0, 2) and all(x % 4 == r for x in scaled[:3])
    if lattice == "A1":
        a = scaled[0]
        return a % 2 == 0 and scaled[1] == -a and scaled[2] == 0 and scaled[3] == 0
    return True


_coset_norm_cache = {}


def max_coset_norm(lattice: str, m: int):
    """Largest minimal norm among cosets of the dual lattice mod m*lattice.

    The covering radius of D4, D3 and A1 bounds every coset minimum by
    m^2 (m^2 / 2 for A1), so enumerating dual vectors up to that norm finds
    every coset together with its minimum.
    """
    key = (lattice, m)
    try:
        return _coset_norm_cache[key]
    except KeyError:
        pass
    if lattice == "A1":
        best = {}
        for j in range(-m, m + 1):
            r = j % (2 * m)
            nrm = Fraction(j * j, 2)
            if r not in best or nrm < best[r]:
                best[r] = nrm
        if len(best) != 2 * m:
            raise WjfError("A1 coset enumeration incomplete")
        result = max(best.values())
    elif lattice in ("D4", "D3"):
        ncomp = 4 if lattice == "D4" else 3
        limit16 = 16 * m * m
        rng = int((limit16) ** 0.5) + 1
        best = {}
        for parity in (0, 2):
            comps = sorted({x for x in range(-rng - 4, rng + 5) if x % 4 == parity or (-x) % 4 == parity})
            for v in itertools.product(comps, repeat=ncomp):
                s16 = sum(x * x for x in v)
                if s16 > limit16:
                    continue
                t = tuple(x % (4 * m) for x in v)
                par = sum((x - tx) // (4 * m) for x, tx in zip(v, t)) % 2
                ck = (t, par)
                nrm = Fraction(s16, 16)
                if ck not in best or nrm < best[ck]:
                    best[ck] = nrm
        expected = 4 * m ** (4 if lattice == "D4" else 3)
        if len(best) != expected:
            raise WjfError(f"coset enumeration found {len(best)}, expected {expected}")
        result = max(best.values())
    else:
        raise ValueError(f"no support bound for lattice {lattice!r}")
    _coset_norm_cache[key] = result
    return result


_dual_enum_cache = {}


def dual_vectors_by_norm(max_norm: int):
    """All D4 dual vectors with (l,l) <= max_norm, grouped by exact norm.

    Returns {norm: [(packed_key, coset_label), ...]} with coset labels in
    {"0", "v", "s", "c"} for D4-dual/D4.  Norms of D4 dual vectors are
    integers, so the dict is keyed by int.
    """
    cached = _dual_enum_cache.get(max_norm)
    if cached is not None:
        return cached
    out = {n: [] for n in range(max_norm + 1)}
    limit16 = 16 * max_norm
    rng = int(limit16 ** 0.5) + 1
    for parity in (0, 2):
        comps = sorted({x for x in range(-rng - 4, rng + 5) if x % 4 == parity or (-x) % 4 == parity})
        for v in itertools.product(comps, repeat=4):
            s16 = sum(x * x for x in v)
            if s16 > limit16:
                continue
            norm = s16 // 16
            total = sum(v)
            if parity == 0:
                label = "0" if (total // 4) % 2 == 0 else "v"
            else:
                label = "s" if total % 8 == 0 else "c"
            out[norm].append((pack(v), label))
    _dual_enum_cache[max_norm] = out
    return out


COSET_MIN_NORM = {"0": 0, "v": 1, "s": 1, "c": 1}


def coset_label(scaled):
    if scaled[0] % 4 == 0:
        return "0" if (sum(scaled) // 4) % 2 == 0 else "v"
    return "s" if sum(scaled) % 8 == 0 else "c"


class FJSeries:
    """Fourier-Jacobi expansion with exact LaurentPoly coefficients."""

    __slots__ = ("weight", "index", "lattice", "offset", "coeffs")

    def __init__(self, weight, index, lattice, offset, coeffs, check=True):
        if lattice not in LATTICE_RANK:
            raise ValueError(f"unknown lattice tag {lattice!r}")
        offset = Fraction(offset)
        if 24 % offset.denominator:
            raise ValueError(f"offset denominator must divide 24: {offset}")
        self.weight = int(weight)
        self.index = int(index)
        self.lattice = lattice
        self.offset = offset
        self.coeffs = tuple(coeffs)
        if check and offset == 0 and lattice in _VALIDATED:
            self._validate()

    def _validate(self):
        m = self.index
        if m < 1:
            raise InvalidForm("public forms need a positive index")
        bound_extra = max_coset_norm(self.lattice, m)
        for n, poly in enumerate(self.coeffs):
            limit = 2 * n * m + bound_extra
            for k in poly._p:
                scaled = unpack(k)
                if not _in_dual(self.lattice, scaled):
                    raise InvalidForm(
                        f"exponent {scaled} at q^{n} is not in the dual lattice of {self.lattice}"
                    )
                if lp_norm(scaled) > limit:
                    raise InvalidForm(
                        f"exponent {scaled} at q^{n} violates the support bound "
                        f"(norm {lp_norm(scaled)} > {limit})"
                    )

    @property
    def rank(self):
        return LATTICE_RANK[self.lattice]

    @property
    def order(self):
        return len(self.coeffs) - 1

    def coeff(self, n) -> LaurentPoly:
        return self.coeffs[n] if 0 <= n <= self.order else LaurentPoly.zero()

    def a(self, n, scaled):
        """Fourier coefficient a(n, l) with l given as a scaled tuple."""
        return self.coeff(n).coeff(scaled)

    def is_zero(self):
        return all(not c for c in self.coeffs)

    def truncate(self, n):
        return FJSeries(self.weight, self.index, self.lattice, self.offset,
                        self.coeffs[: n + 1], check=False)

    def __eq__(self, other):
        if not isinstance(other, FJSeries):
            return NotImplemented
        return (
            self.weight == other.weight
            and self.index == other.index
            and self.lattice == other.lattice
            and self.offset == other.offset
            and list(self.coeffs) == list(other.coeffs)
        )

    def __repr__(self):
        return (
            f"FJSeries(weight={self.weight}, index={self.index}, lattice={self.lattice!r}, "
            f"offset={self.offset}, order={self.order})"
        )

    # convenience operators (delegate to module functions)
    def __add__(self, other):
        return fj_add(self, other)

    def __sub__(self, other):
        return fj_sub(self, other)

    def __mul__(self, other):
        if isinstance(other, FJSeries):
            return fj_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return fj_scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return fj_scale(self, other)
        return NotImplemented

    def __neg__(self):
        return fj_scale(self, -1)


def _same_grid(a: FJSeries, b: FJSeries):
    if a.lattice != b.lattice:
        raise LatticeMismatch(f"{a.lattice} vs {b.lattice}")
    if (a.offset - b.offset).denominator != 1:
        raise OffsetResidue(f"offsets {a.offset} and {b.offset} not on one grid")


def fj_add(a: FJSeries, b: FJSeries) -> FJSeries:
    if (a.weight, a.index, a.lattice, a.offset) != (b.weight, b.index, b.lattice, b.offset):
        raise LatticeMismatch("can only add series with identical metadata")
    n = min(a.order, b.order)
    coeffs = [a.coeffs[i] + b.coeffs[i] for i in range(n + 1)]
    return FJSeries(a.weight, a.index, a.lattice, a.offset, coeffs, check=False)


def fj_sub(a: FJSeries, b: FJSeries) -> FJSeries:
    return fj_add(a, fj_scale(b, -1))


def fj_scale(a: FJSeries, c) -> FJSeries:
    return FJSeries(a.weight, a.index, a.lattice, a.offset,
                    [p.scale(c) for p in a.coeffs], check=False)


def fj_mul(a: FJSeries, b: FJSeries, check=None) -> FJSeries:
    """Product of same-lattice expansions; weights and indices add."""
    _same_grid(a, b)
    n_out = min(a.order, b.order)
    raw = _series_mul([p._p for p in a.coeffs], [p._p for p in b.coeffs], n_out, ZERO_KEY)
    offset = a.offset + b.offset
    if check is None:
        check = offset == 0 and a.lattice in _VALIDATED
    return FJSeries(
        a.weight + b.weight,
        a.index + b.index,
        a.lattice,
        offset,
        [LaurentPoly._raw(d) for d in raw],
        check=check,
    )


def raw_product(factors, weight, index, lattice, check=True) -> FJSeries:
    """Multiply coefficient data of several series and stamp the metadata.

    Used for products of per-coordinate factors, where the plain index
    bookkeeping of fj_mul does not apply.
    """
    coeffs = [p._p for p in factors[0].coeffs]
    offset = factors[0].offset
    n_out = factors[0].order
    for f in factors[1:]:
        n_out = min(n_out, f.order)
        coeffs = _series_mul(coeffs, [p._p for p in f.coeffs], n_out, ZERO_KEY)
        offset += f.offset
    return FJSeries(weight, index, lattice, offset,
                    [LaurentPoly._raw(d) for d in coeffs], check=check)


def fj_mul_qseries(a: FJSeries, s: QSeries, weight_shift=None) -> FJSeries:
    """Multiply by a one-variable series (eta power, Eisenstein series)."""
    if weight_shift is None:
        if s.weight is None:
            raise ValueError("weight_shift needed for a series without one")
        weight_shift = s.weight
    n_out = min(a.order, s.order)
    coeffs = []
    for n in range(n_out + 1):
        acc = LaurentPoly.zero()
        for j in range(n + 1):
            c = s[j]
            if c:
                acc = acc + a.coeffs[n - j].scale(c)
        coeffs.append(acc)
    offset = a.offset + s.offset
    check = offset == 0 and a.lattice in _VALIDATED
    return FJSeries(a.weight + weight_shift, a.index, a.lattice, offset, coeffs, check=check)


def heat_operator(phi: FJSeries) -> FJSeries:
    """The modular differential operator of weight 2.

    Sends a weight-k index-m form to
      sum (n - (l,l)/(2m)) a(n,l) q^n zeta^l + (2k - n0) G2 phi
    with G2 = -1/24 + sum sigma(n) q^n and n0 the rank of the lattice.
    Weight goes up by 2, index and lattice are unchanged, the result is
    exact to the input's truncation.
    """
    if phi.offset != 0:
        raise FractionalOffset(f"heat operator needs offset 0, got {phi.offset}")
    n0 = phi.rank
    m = phi.index
    k = phi.weight
    g2 = eisenstein("G2", phi.order)
    factor = 2 * k - n0
    coeffs = []
    for n in range(phi.order + 1):
        diag = {}
        for key, c in phi.coeffs[n]._p.items():
            v = (n - Fraction(lp_norm(unpack(key)), 2 * m)) * c
            if v:
                diag[key] = v.numerator if v.denominator == 1 else v
        acc = LaurentPoly._raw(diag)
        for j in range(n + 1):
            c = g2[j]
            s = factor * c
            if s:
                acc = acc + phi.coeffs[n - j].scale(s)
        coeffs.append(acc)
    return FJSeries(k + 2, m, phi.lattice, 0, coeffs, check=False)


def restrict_z4(phi: FJSeries) -> FJSeries:
    """Set the fourth elliptic variable to zero: project exponents, merge."""
    if phi.lattice != "D4":
        raise LatticeMismatch("restriction is defined on D4 series")
    coeffs = []
    for poly in phi.coeffs:
        out = {}
        for key, c in poly._p.items():
            a, b, cc, _ = unpack(key)
            nk = pack((a, b, cc, 0))
            out[nk] = out.get(nk, 0) + c
        coeffs.append(LaurentPoly._raw({k: v for k, v in out.items() if v}))
    return FJSeries(phi.weight, phi.index, "D3", phi.offset, coeffs,
                    check=phi.offset == 0)


def fj_act(g: GroupElement, phi: FJSeries) -> FJSeries:
    """Apply a lattice isometry to every coefficient."""
    if phi.lattice != "D4":
        raise LatticeMismatch("group action is defined on D4 series")
    coeffs = [lp_act(g, p) for p in phi.coeffs]
    return FJSeries(phi.weight, phi.index, "D4", phi.offset, coeffs, check=False)


class QPReport:
    """Outcome of a quasiperiodicity check."""

    __slots__ = ("ok", "pairs_checked", "violation")

    def __init__(self, ok, pairs_checked, violation=None):
        self.ok = ok
        self.pairs_checked = pairs_checked
        self.violation = violation

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"QPReport(OK, pairs={self.pairs_checked})"
        return f"QPReport(FAIL at {self.violation})"


def quasiperiodicity_check(phi: FJSeries, lam) -> QPReport:
    """Check a(n, l) = a(n + (lam,l) + m(lam,lam)/2, l + m*lam) within range.

    ``lam`` is a lattice vector of D4 (integer entries, even sum).  Every
    stored coefficient whose partner order also lies within the truncation
    is compared; the first violation is reported.
    """
    if phi.offset != 0:
        raise FractionalOffset("quasiperiodicity check needs offset 0")
    lam = tuple(int(x) for x in lam)
    if sum(lam) % 2 != 0:
        raise WjfError(f"{lam} is not in the D4 lattice")
    m = phi.index
    lam2 = sum(x * x for x in lam)
    shift_l = tuple(4 * m * x for x in lam)
    checked = 0
    for n in range(phi.order + 1):
        for key, c in phi.coeffs[n]._p.items():
            scaled = unpack(key)
            pairing = sum(a * b for a, b in zip(lam, scaled))
            if pairing % 4:
                return QPReport(False, checked, (n, scaled, "pairing not integral"))
            n2 = n + pairing // 4 + m * lam2 // 2
            if n2 < 0 or n2 > phi.order:
                continue
            l2 = tuple(a + b for a, b in zip(scaled, shift_l))
            other = phi.coeffs[n2]._p.get(pack(l2), 0)
            checked += 1
            if other != c:
                return QPReport(False, checked, (n, scaled, c, n2, l2, other))
    return QPReport(True, checked)


def first_difference(a: FJSeries, b: FJSeries):
    """First (n, scaled, coeff_a, coeff_b) where two series differ, or None."""
    n = min(a.order, b.order)
    for i in range(n + 1):
        pa, pb = a.coeffs[i]._p, b.coeffs[i]._p
        if pa == pb:
            continue
        for k in sorted(set(pa) | set(pb)):
            va, vb = pa.get(k, 0), pb.get(k, 0)
            if va != vb:
                return (i, unpack(k), va, vb)
    return None


def zero_series(weight, index, lattice, n) -> FJSeries:
    return FJSeries(weight, index, lattice, 0,
                    [LaurentPoly.zero() for _ in range(n + 1)], check=False)

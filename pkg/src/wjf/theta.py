"""Odd Jacobi theta expansions along linear forms and the basic forms.

theta(tau, u) = q^{1/8} sum_n (-1)^n q^{n(n+1)/2} e^{2 pi i (n+1/2) u};
with u a rational linear form in the four elliptic coordinates the term at
n contributes the exponent vector (n + 1/2) * coeffs.  Four such fragments
carry offset 1/2, cancelled exactly by eta^{-12}; any residue is a bug and
raises OffsetResidue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NormalizationMismatch, OffsetResidue
from .laurent import LaurentPoly
from .fourier import FJSeries, fj_add, fj_mul_qseries, fj_scale, fj_sub, heat_operator, raw_product
from .qseries import eta_power
from .weyl import orbit_coordinates, orbit_polynomial

__all__ = ["LinearForm", "theta_series", "build_basic_forms", "BasicForms", "place_on_coordinate"]


class LinearForm:
    """The map z -> sum c_i z_i with coefficients on the half-integer grid."""

    __slots__ = ("coeffs", "scaled2")

    def __init__(self, coeffs):
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != 4 or any(c.denominator not in (1, 2) for c in cs):
            raise ValueError(f"linear form wants four half-integer coefficients: {coeffs!r}")
        self.coeffs = cs
        self.scaled2 = tuple(int(2 * c) for c in cs)

    def __repr__(self):
        return f"LinearForm({self.coeffs})"


def theta_series(ell: LinearForm, n: int) -> FJSeries:
    """Theta fragment along ``ell``: offset 1/8, exact to relative order n.

    The sum runs over every integer (both signs) whose q-order
    n(n+1)/2 stays within the truncation.
    """
    if n < 0:
        raise ValueError("truncation must be >= 0")
    terms = [dict() for _ in range(n + 1)]
    s2 = ell.scaled2
    k = 0
    while k * (k + 1) // 2 <= n:
        for idx in (k, -k - 1):
            qo = idx * (idx + 1) // 2
            exp = tuple((2 * idx + 1) * c for c in s2)
            sign = 1 if idx % 2 == 0 else -1
            d = terms[qo]
            d[exp] = d.get(exp, 0) + sign
        k += 1
    coeffs = [LaurentPoly(d) for d in terms]
    return FJSeries(0, 0, "D4", Fraction(1, 8), coeffs, check=False)


def _theta_quotient(forms, eta_exponent, weight, index, lattice, n):
    """Product of theta fragments divided by a power of eta."""
    frag = raw_product(forms, 0, 0, lattice, check=False)
    eta = eta_power(eta_exponent, frag.order)
    out = fj_mul_qseries(frag, eta, weight_shift=0)
    if out.offset != 0:
        raise OffsetResidue(f"assembled offset {out.offset}, expected 0")
    return FJSeries(weight, index, lattice, 0, out.coeffs[: n + 1])


_PHI2_ARGS = [(-1, 1, 1, 1), (1, -1, 1, 1), (1, 1, -1, 1), (1, 1, 1, -1)]
_PHI3_ARGS = [(1, 1, 1, 1), (1, -1, -1, 1), (1, 1, -1, -1), (1, -1, 1, -1)]

_EZ_Q0 = {(2, -2, 0, 0): 1, (0, 0, 0, 0): -2, (-2, 2, 0, 0): 1}
_EZ01_Q0 = {(2, -2, 0, 0): 1, (0, 0, 0, 0): 10, (-2, 2, 0, 0): 1}


@dataclass
class BasicForms:
    """Theta-quotient forms for D4 plus the two rank-one forms."""

    omega: FJSeries
    phi2: FJSeries
    phi3: FJSeries
    phi_m4_1: FJSeries
    ez_m2_1: FJSeries
    ez_0_1: FJSeries
    order: int
    heat_scalars: dict = field(default_factory=dict)


def build_basic_forms(n: int) -> BasicForms:
    """Assemble the weight -4 index 1 forms for D4 and the rank-one pair.

    omega is the quotient of the four coordinate thetas by eta^12, the pair
    phi2/phi3 uses the half-sum arguments, and phi_m4_1 = phi2 - phi3.  The
    rank-one weight -2 form is the squared theta along the short dual vector
    over eta^6, pinned to the leading term zeta - 2 + 1/zeta; its weight 0
    partner is the heat image rescaled to the leading term zeta + 10 +
    1/zeta, with the rescaling factor recorded.
    """
    m = n + 1  # fragment order; keeps products exact one step past n
    half = Fraction(1, 2)

    coord_thetas = [theta_series(LinearForm(tuple(1 if j == i else 0 for j in range(4))), m)
                    for i in range(4)]
    omega = _theta_quotient(coord_thetas, -12, -4, 1, "D4", n)

    phi2 = _theta_quotient([theta_series(LinearForm(tuple(half * s for s in arg)), m)
                            for arg in _PHI2_ARGS], -12, -4, 1, "D4", n)
    phi3 = _theta_quotient([theta_series(LinearForm(tuple(half * s for s in arg)), m)
                            for arg in _PHI3_ARGS], -12, -4, 1, "D4", n)
    phi_m4_1 = fj_sub(phi2, phi3)
    if fj_add(phi2, phi3) != omega:
        raise NormalizationMismatch("theta quotients do not sum to the coordinate product")

    a1_theta = theta_series(LinearForm((half, -half, 0, 0)), m)
    a1_frag = raw_product([a1_theta, a1_theta], 0, 0, "A1", check=False)
    ez_m2_1 = fj_mul_qseries(a1_frag, eta_power(-6, a1_frag.order), weight_shift=0)
    if ez_m2_1.offset != 0:
        raise OffsetResidue(f"rank-one offset {ez_m2_1.offset}")
    ez_m2_1 = FJSeries(-2, 1, "A1", 0, ez_m2_1.coeffs[: n + 1])
    if ez_m2_1.coeffs[0] != LaurentPoly(_EZ_Q0):
        raise NormalizationMismatch("weight -2 rank-one form has the wrong leading term")

    heat = heat_operator(ez_m2_1)
    scalar = _pin_scalar(heat.coeffs[0], LaurentPoly(_EZ01_Q0))
    ez_0_1 = FJSeries(0, 1, "A1", 0, fj_scale(heat, scalar).coeffs)

    return BasicForms(
        omega=omega,
        phi2=phi2,
        phi3=phi3,
        phi_m4_1=phi_m4_1,
        ez_m2_1=ez_m2_1,
        ez_0_1=ez_0_1,
        order=n,
        heat_scalars={"ez_0_1": scalar},
    )


def _pin_scalar(have: LaurentPoly, want: LaurentPoly):
    """The unique scalar with scalar*have == want, else NormalizationMismatch."""
    if not have or len(have) != len(want):
        raise NormalizationMismatch("leading terms have different supports")
    k = next(iter(have._p))
    w = want._p.get(k, 0)
    if not w:
        raise NormalizationMismatch("leading terms have different supports")
    c = have._p[k]
    scalar = Fraction(w, c) if not isinstance(w, Fraction) and not isinstance(c, Fraction) else w / c
    if have.scale(scalar) != want:
        raise NormalizationMismatch("leading term is not proportional to the target")
    return scalar


def place_on_coordinate(phi: FJSeries, i: int) -> FJSeries:
    """Send a rank-one series to coordinate i of the four-variable grid.

    The exponent j * (short dual vector) becomes j * e_i; the result is a
    per-coordinate factor on the A1_4 working tag.
    """
    if phi.lattice != "A1":
        raise ValueError("only rank-one series can be placed")
    coeffs = []
    for poly in phi.coeffs:
        d = {}
        for scaled, c in poly.terms().items():
            j2 = scaled[0]  # scaled = j*(2,-2,0,0): recover 2j
            key = tuple(2 * j2 if pos == i else 0 for pos in range(4))
            d[key] = c
        coeffs.append(LaurentPoly(d))
    return FJSeries(phi.weight, phi.index, "A1_4", 0, coeffs, check=False)

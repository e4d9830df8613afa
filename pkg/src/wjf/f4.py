"""The five generators invariant under the full orthogonal group of D4.

The degree 2 and 3 invariants of the triality pair are built twice (from
the pair itself and from the closed forms in the weight -4 generators) and
compared; the remaining three come from pinned heat images plus exact
decompositions, with every solved constant recorded next to its identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .d4 import (
    F4_0_1_ROW,
    F4_M6_2_ROW,
    F4_M8_2_ROW,
    GeneratorSetD4,
    _orbit_solve,
    _proportion,
    build_d4,
)
from .errors import ChevalleyMismatch, IdentityFailure, ProportionalityFailure
from .fourier import (
    FJSeries,
    first_difference,
    fj_add,
    fj_mul,
    fj_mul_qseries,
    fj_scale,
    fj_sub,
    heat_operator,
)
from .qseries import eisenstein

__all__ = ["GeneratorSetF4", "build_f4", "build_chevalley_pair", "build_f4_weight_m6",
           "build_f4_weights_m2_0"]


def _expect_zero(diff, what):
    if diff is not None:
        raise IdentityFailure(f"{what}: first difference at q^{diff[0]}, exponent {diff[1]}",
                              order=diff[0], exponent=diff[1])


def build_chevalley_pair(d4: GeneratorSetD4):
    """Degree 2 and 3 invariants of the triality action, built both ways.

    Route one takes the unique invariant quadratic and cubic in the theta
    pair; route two evaluates the closed forms
      4 X2 = 3 omega^2 + phi^2  and  8 X3 = phi (9 omega^2 - phi^2).
    A mismatch raises ChevalleyMismatch.
    """
    p2, p3 = d4.phi2, d4.phi3
    sq = fj_mul(p2, p2)
    cross = fj_mul(p2, p3)
    sq3 = fj_mul(p3, p3)
    m82_a = fj_add(fj_add(sq, cross), sq3)

    t222 = fj_mul(sq, p2)
    t223 = fj_mul(sq, p3)
    t233 = fj_mul(sq3, p2)
    t333 = fj_mul(sq3, p3)
    m123_a = fj_scale(
        fj_add(
            fj_add(fj_scale(t222, 2), fj_scale(t223, 3)),
            fj_add(fj_scale(t233, -3), fj_scale(t333, -2)),
        ),
        Fraction(1, 2),
    )

    omega, phi = d4.omega, d4.phi_m4_1
    w2 = fj_mul(omega, omega)
    ph2 = fj_mul(phi, phi)
    m82_b = fj_scale(fj_add(fj_scale(w2, 3), ph2), Fraction(1, 4))
    m123_b = fj_scale(fj_mul(phi, fj_sub(fj_scale(w2, 9), ph2)), Fraction(1, 8))

    if first_difference(m82_a, m82_b) is not None:
        raise ChevalleyMismatch("degree 2 invariant differs between routes")
    if first_difference(m123_a, m123_b) is not None:
        raise ChevalleyMismatch("degree 3 invariant differs between routes")
    return m82_b, m123_b


def build_f4_weight_m6(d4: GeneratorSetD4, m82: FJSeries):
    """Heat image of the index-2 invariant, pinned to its leading row.

    After pinning, the decomposition over the index-2 forms of the smaller
    ring is verified exactly: with the solved coefficients (ga, gb) the
    identity  form = ga * phi_m6_2 + gb * phi_m2_1 * phi_m4_1  must hold at
    every order (the expected values are -3/4 and -1).
    """
    h = heat_operator(m82)
    scalar = _proportion(h.coeffs[0], F4_M6_2_ROW)
    form = fj_scale(h, scalar)
    prod = fj_mul(d4.phi_m2_1, d4.phi_m4_1)
    ga, gb = _orbit_solve([d4.phi_m6_2.coeffs[0], prod.coeffs[0]], form.coeffs[0])
    recon = fj_add(fj_scale(d4.phi_m6_2, ga), fj_scale(prod, gb))
    _expect_zero(first_difference(form, recon), "index-2 weight -6 decomposition")
    return form, {"heat_scalar": scalar, "decomposition": (ga, gb)}


def build_f4_weights_m2_0(d4: GeneratorSetD4, m82: FJSeries, m62: FJSeries):
    """The weight -2 and weight 0 generators, with their identity suite.

    The heat image of the weight -6 generator is decomposed exactly over
    the four flip-invariant index-2 monomials; the share of the mixed
    monomial must vanish and the two Eisenstein shares must cancel against
    E4 times the index-2 invariant, leaving a pure square.  The solved
    scalars are reported: scaled by the recorded heat normalization S, the
    subtraction  S * heat - 5 E4 m82  must be an exact rational multiple of
    the square of the weight -2 form.
    """
    n = d4.order
    e4 = eisenstein("E4", n)
    omega, phi, phim2 = d4.omega, d4.phi_m4_1, d4.phi_m2_1

    h = heat_operator(m62)
    e4w2 = fj_mul_qseries(fj_mul(omega, omega), e4)
    e4p2 = fj_mul_qseries(fj_mul(phi, phi), e4)
    sq = fj_mul(phim2, phim2)
    p01p = fj_mul(d4.phi_0_1, phi)

    cols = [e4w2, e4p2, sq, p01p]
    a, b, c, d = _decompose_series(cols, h)
    if d != 0:
        raise ProportionalityFailure("mixed monomial share is nonzero")
    if b == 0 or a / b != 3:
        raise ProportionalityFailure(
            f"Eisenstein shares {a}, {b} do not cancel against the index-2 invariant"
        )
    heat_scale = Fraction(15, 4) / a
    sub = fj_sub(fj_scale(h, heat_scale), fj_mul_qseries(fj_scale(m82, 5), e4))
    t = heat_scale * c
    _expect_zero(first_difference(sub, fj_scale(sq, t)), "index-2 weight -4 subtraction")

    h2 = heat_operator(phim2)
    scalar0 = _proportion(h2.coeffs[0], F4_0_1_ROW)
    f4_0_1 = FJSeries(0, 1, "D4", 0, fj_scale(h2, scalar0).coeffs)

    e4phi = fj_mul_qseries(phi, e4)
    ca, cb = _orbit_solve([d4.phi_0_1.coeffs[0], e4phi.coeffs[0]], f4_0_1.coeffs[0])
    recon = fj_add(fj_scale(d4.phi_0_1, ca), fj_scale(e4phi, cb))
    _expect_zero(first_difference(f4_0_1, recon), "weight 0 decomposition")

    reports = {
        "m4_decomposition": (a, b, c, d),
        "m4_heat_scale": heat_scale,
        "m4_scaled_decomposition": (heat_scale * a, heat_scale * b, heat_scale * c,
                                    heat_scale * d),
        "m4_subtraction_factor": t,
        "m0_heat_scalar": scalar0,
        "m0_decomposition": (ca, cb),
    }
    return phim2, f4_0_1, reports


def _decompose_series(cols, target):
    """Exact coefficients writing ``target`` in the span of whole series."""
    from .linalg import solve_exact

    rows = []
    rhs = []
    n = min(min(c.order for c in cols), target.order)
    for i in range(n + 1):
        keys = sorted(set().union(*[set(c.coeffs[i]._p) for c in cols],
                                  set(target.coeffs[i]._p)))
        for k in keys:
            rows.append([c.coeffs[i]._p.get(k, 0) for c in cols])
            rhs.append(target.coeffs[i]._p.get(k, 0))
    res = solve_exact(rows, rhs)
    if not res.consistent:
        raise ProportionalityFailure("series is outside the span")
    if res.nullity:
        raise ProportionalityFailure("series decomposition is underdetermined")
    return res.solution


@dataclass
class GeneratorSetF4:
    phi_0_1: FJSeries
    phi_m2_1: FJSeries
    phi_m6_2: FJSeries
    phi_m8_2: FJSeries
    phi_m12_3: FJSeries
    order: int
    reports: dict = field(default_factory=dict)

    def named(self):
        return {
            "f4_phi_0_1": self.phi_0_1,
            "f4_phi_m2_1": self.phi_m2_1,
            "f4_phi_m6_2": self.phi_m6_2,
            "f4_phi_m8_2": self.phi_m8_2,
            "f4_phi_m12_3": self.phi_m12_3,
        }


@lru_cache(maxsize=4)
def build_f4(n: int) -> GeneratorSetF4:
    d4 = build_d4(n)
    m82, m123 = build_chevalley_pair(d4)
    m62, rep62 = build_f4_weight_m6(d4, m82)
    m21, m01, rep20 = build_f4_weights_m2_0(d4, m82, m62)
    return GeneratorSetF4(
        phi_0_1=m01,
        phi_m2_1=m21,
        phi_m6_2=m62,
        phi_m8_2=m82,
        phi_m12_3=m123,
        order=n,
        reports={"m6": rep62, **rep20},
    )

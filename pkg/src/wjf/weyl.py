"""The groups W(D4) < O'(D4) < O(D4) as exact rational matrices,
the triality reflections, Weyl orbit sums, and orbit-coordinate extraction.

Matrices act on exponent vectors by l -> M^T l, which matches the variable
substitution z -> M(z) on monomials zeta^l = exp(2 pi i (z, l)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExponentOverflow, WjfError
from .laurent import LaurentPoly, pack, unpack

__all__ = [
    "GroupElement",
    "group_generators",
    "triality_reflections",
    "generate_group",
    "lp_act",
    "orbit_polynomial",
    "orbit_coordinates",
    "OrbitCoordinates",
    "element_from_name",
    "ORBIT_NAMES",
    "ATOMIC_ORBITS",
]

_COSET_REPS = (
    (0, 0, 0, 0),
    (4, 0, 0, 0),
    (2, 2, 2, 2),
    (2, 2, 2, -2),
)


def _is_dual_vector(scaled):
    r = scaled[0] % 4
    if r == 1 or r == 3:
        return False
    return all(x % 4 == r for x in scaled)


class GroupElement:
    """A 4x4 rational orthogonal matrix preserving the D4 dual lattice."""

    __slots__ = ("matrix", "label", "_twice")

    def __init__(self, matrix, label=None):
        m = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        twice = []
        for row in m:
            trow = []
            for x in row:
                t = 2 * x
                if t.denominator != 1:
                    raise WjfError(f"matrix entry {x} not on the half-integer grid")
                trow.append(t.numerator)
            twice.append(tuple(trow))
        self.matrix = m
        self.label = label
        self._twice = tuple(twice)
        # orthogonality: M^T M = I
        for i in range(4):
            for j in range(4):
                s = sum(m[k][i] * m[k][j] for k in range(4))
                if s != (1 if i == j else 0):
                    raise WjfError("matrix is not orthogonal")
        for rep in _COSET_REPS:
            if not _is_dual_vector(self.apply_scaled(rep)):
                raise WjfError("matrix does not preserve the dual lattice")

    def apply_scaled(self, scaled):
        """Image M^T l of a scaled exponent vector; exact, stays on the x4 grid."""
        t = self._twice
        out = []
        for i in range(4):
            v = t[0][i] * scaled[0] + t[1][i] * scaled[1] + t[2][i] * scaled[2] + t[3][i] * scaled[3]
            if v & 1:
                raise ExponentOverflow(f"image of {scaled} leaves the exponent grid")
            out.append(v >> 1)
        return tuple(out)

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        a, b = self.matrix, other.matrix
        prod = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4)
        )
        return GroupElement(prod)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._twice == other._twice

    def __hash__(self):
        return hash(self._twice)

    def __repr__(self):
        return f"GroupElement({self.label or self._twice})"

    def det(self):
        m = self.matrix
        total = 0
        for perm in itertools.permutations(range(4)):
            sign = 1
            for i in range(4):
                for j in range(i + 1, 4):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = sign
            for i in range(4):
                term *= m[i][perm[i]]
            total += term
        return total

    def is_identity(self):
        return self._twice == tuple(tuple(2 if i == j else 0 for j in range(4)) for i in range(4))


def identity_element():
    return GroupElement([[1 if i == j else 0 for j in range(4)] for i in range(4)], "id")


def permutation_element(perm, label=None):
    """Matrix sending coordinate j of the argument to slot i where perm[i] = j.

    ``perm`` is a 4-tuple with entries 0..3: (M z)_i = z_{perm[i]}.
    """
    m = [[1 if perm[i] == j else 0 for j in range(4)] for i in range(4)]
    return GroupElement(m, label or "perm")


def sign_flip_element(positions, label=None):
    m = [[(-1 if i == j and i in positions else (1 if i == j else 0)) for j in range(4)] for i in range(4)]
    return GroupElement(m, label or "flip")


def reflection_element(vector, label=None):
    """Reflection in the hyperplane orthogonal to ``vector`` (rational 4-tuple)."""
    v = [Fraction(x) for x in vector]
    vv = sum(x * x for x in v)
    if vv == 0:
        raise ValueError("cannot reflect in the zero vector")
    m = [[(1 if i == j else 0) - 2 * v[i] * v[j] / vv for j in range(4)] for i in range(4)]
    return GroupElement(m, label)


def triality_reflections():
    """The reflections f, g, h permuting {P1, P44p, P44m} as coset maps.

    f is the reflection in e1.  The half-vector reflections are fixed by the
    action tables: g (reflection in (1,1,1,1)/2) fixes P44p and swaps
    P1 <-> P44m; h (reflection in (1,1,1,-1)/2) fixes P44m and swaps
    P1 <-> P44p.
    """
    f = sign_flip_element({0}, "f")
    g = reflection_element([Fraction(1, 2)] * 4, "g")
    h = reflection_element([Fraction(1, 2)] * 3 + [Fraction(-1, 2)], "h")
    return f, g, h


def group_generators(group: str):
    """Finite generating sets for WD4, OprimeD4 and OD4."""
    gens = [
        permutation_element((1, 0, 2, 3), "perm:2134"),
        permutation_element((0, 2, 1, 3), "perm:1324"),
        permutation_element((0, 1, 3, 2), "perm:1243"),
        sign_flip_element({0, 1}, "flip:12"),
    ]
    if group == "WD4":
        return gens
    gens.append(sign_flip_element({0}, "flip:1"))
    if group == "OprimeD4":
        return gens
    if group == "OD4":
        f, g, h = triality_reflections()
        return gens + [g, h]
    raise ValueError(f"unknown group {group!r}")


def generate_group(generators, cap=2000):
    """Closure of the generating set under multiplication (breadth first)."""
    ident = identity_element()
    seen = {ident: None}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in generators:
                c = a * g
                if c not in seen:
                    if len(seen) >= cap:
                        raise WjfError(f"group closure exceeded cap {cap}")
                    seen[c] = None
                    new.append(c)
        frontier = new
    return list(seen)


def lp_act(g: GroupElement, p: LaurentPoly) -> LaurentPoly:
    """Substitute l -> g^T l on every exponent vector of p."""
    out = {}
    for k, c in p._p.items():
        nk = pack(g.apply_scaled(unpack(k)))
        out[nk] = out.get(nk, 0) + c
    return LaurentPoly._raw({k: v for k, v in out.items() if v})


# -- orbit polynomials ------------------------------------------------

def _half_vectors(parity):
    out = []
    for signs in itertools.product((1, -1), repeat=4):
        if sum(1 for s in signs if s > 0) % 2 == parity:
            out.append(tuple(2 * s for s in signs))
    return out


def _orbit_vectors(name):
    if name == "Q0":
        return [(0, 0, 0, 0)]
    if name == "P1":
        return [tuple(s * 4 if i == j else 0 for j in range(4)) for i in range(4) for s in (1, -1)]
    if name == "P44p":
        return _half_vectors(0)
    if name == "P44m":
        return _half_vectors(1)
    if name == "Q2":
        out = []
        for i, j in itertools.combinations(range(4), 2):
            for si, sj in itertools.product((4, -4), repeat=2):
                v = [0, 0, 0, 0]
                v[i], v[j] = si, sj
                out.append(tuple(v))
        return out
    if name == "P3":
        out = []
        for idx in itertools.combinations(range(4), 3):
            for signs in itertools.product((4, -4), repeat=3):
                v = [0, 0, 0, 0]
                for pos, s in zip(idx, signs):
                    v[pos] = s
                out.append(tuple(v))
        return out
    if name == "Q41p":
        return [s for s in itertools.product((4, -4), repeat=4) if sum(1 for x in s if x > 0) % 2 == 0]
    if name == "Q41m":
        return [s for s in itertools.product((4, -4), repeat=4) if sum(1 for x in s if x > 0) % 2 == 1]
    if name == "Q42":
        return [tuple(s * 8 if i == j else 0 for j in range(4)) for i in range(4) for s in (1, -1)]
    if name == "P124":
        out = []
        for pos in range(4):
            for signs in itertools.product((1, -1), repeat=4):
                v = [2 * s for s in signs]
                v[pos] *= 3
                out.append(tuple(v))
        return out
    raise ValueError(f"unknown orbit {name!r}")


# Atomic orbits have pairwise disjoint supports; the remaining names are sums.
ATOMIC_ORBITS = ("Q0", "P1", "P44p", "P44m", "Q2", "P3", "Q41p", "Q41m", "Q42", "P124")
_SUM_ORBITS = {
    "P44": ("P44p", "P44m"),
    "Q41": ("Q41p", "Q41m"),
    "Q4": ("Q41p", "Q41m", "Q42"),
}
ORBIT_NAMES = ATOMIC_ORBITS + tuple(_SUM_ORBITS)

_orbit_cache = {}


def orbit_polynomial(name: str) -> LaurentPoly:
    """The sum of zeta^l over the named set of dual vectors."""
    try:
        return _orbit_cache[name]
    except KeyError:
        pass
    if name in _SUM_ORBITS:
        p = LaurentPoly.zero()
        for part in _SUM_ORBITS[name]:
            p = p + orbit_polynomial(part)
    else:
        p = LaurentPoly({v: 1 for v in _orbit_vectors(name)})
    _orbit_cache[name] = p
    return p


@dataclass
class OrbitCoordinates:
    coords: dict
    remainder: LaurentPoly
    atomic: dict

    def __getitem__(self, name):
        return self.coords.get(name, 0)


def orbit_coordinates(p: LaurentPoly) -> OrbitCoordinates:
    """Write p as a combination of the named orbit sums plus a remainder.

    Extraction is greedy per atomic orbit: the coefficient at one orbit
    representative is read off and the whole orbit subtracted, so anything
    that is not constant on an orbit lands in the remainder.  Pairs with
    equal coefficients are merged to the conventional aliases
    (P44 = P44p + P44m, Q41 = Q41p + Q41m, Q4 = Q41 + Q42).
    """
    rem = p
    atomic = {}
    for name in ATOMIC_ORBITS:
        orb = orbit_polynomial(name)
        rep = min(orb._p)  # canonical representative: lex-smallest key
        c = rem._p.get(rep, 0)
        if c:
            atomic[name] = c
            rem = rem - orb.scale(c)
    coords = dict(atomic)

    def merge(a, b, into):
        if a in coords and b in coords and coords[a] == coords[b]:
            coords[into] = coords.pop(a)
            del coords[b]

    merge("P44p", "P44m", "P44")
    merge("Q41p", "Q41m", "Q41")
    merge("Q41", "Q42", "Q4")
    return OrbitCoordinates(coords, rem, atomic)


def element_from_name(name: str) -> GroupElement:
    """Parse CLI element names: f, g, h, perm:ijkl, flip:S."""
    f, g, h = triality_reflections()
    if name == "f":
        return f
    if name == "g":
        return g
    if name == "h":
        return h
    if name.startswith("perm:"):
        digits = name[5:]
        if sorted(digits) != ["1", "2", "3", "4"]:
            raise WjfError(f"perm wants a permutation of 1234, got {digits!r}")
        return permutation_element(tuple(int(d) - 1 for d in digits), name)
    if name.startswith("flip:"):
        digits = name[5:]
        if not digits or any(d not in "1234" for d in digits) or len(set(digits)) != len(digits):
            raise WjfError(f"flip wants a subset of 1234, got {digits!r}")
        return sign_flip_element({int(d) - 1 for d in digits}, name)
    raise WjfError(f"unknown group element {name!r}")

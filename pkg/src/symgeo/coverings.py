"""Branched coverings of algebraic surfaces.

Cyclic covers branched over a smooth divisor, the pluricanonical covers
with canonical class divisible by a prescribed integer, the linear
geography transport Phi induced by those covers, and the double cover of
the quadric branched over a singular configuration of lines.

Rational intermediate values (the signature defect of the Hirzebruch
formula, the inverse transport) are computed with exact fractions and
checked for integrality; a non-integral value means inconsistent branch
data and raises instead of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ConstructionError, CoveringError
from .lattice import IntersectionLattice, Witness
from .manifolds import (
    NOTE_FULL_CANONICAL,
    NOTE_GENERAL_TYPE,
    ConstructionRecipe,
    ManifoldDescriptor,
)


@dataclass(frozen=True)
class CoverParams:
    """Degree and target divisibility of a pluricanonical cover.

    For a cover of degree m with canonical class divisible by d, the
    branch divisor lies in |n K| with n = m a and a = (d-1)/(m-1); the
    Euler transport coefficient is Delta = (d-1)(d+a).
    """

    m: int
    d: int
    a: int
    n: int
    delta: int

    def __post_init__(self):
        if self.m < 2 or self.d < 2:
            raise CoveringError("cover degree and divisibility must be at least 2")
        if (self.d - 1) % (self.m - 1) != 0:
            raise CoveringError("degree minus one must divide divisibility minus one")
        if self.a != (self.d - 1) // (self.m - 1) or self.n != self.m * self.a:
            raise CoveringError("inconsistent cover parameters")
        if self.d != self.n + 1 - self.a or self.n < 2:
            raise CoveringError("inconsistent cover parameters")
        if self.delta != (self.d - 1) * (self.d + self.a):
            raise CoveringError("inconsistent cover parameters")

    @classmethod
    def from_degrees(cls, m: int, d: int) -> "CoverParams":
        if m < 2 or d < 2:
            raise CoveringError("cover degree and divisibility must be at least 2")
        if (d - 1) % (m - 1) != 0:
            raise CoveringError("degree minus one must divide divisibility minus one")
        a = (d - 1) // (m - 1)
        return cls(m, d, a, m * a, (d - 1) * (d + a))


def hirzebruch_signature(sigma_m: int, deg: int, d_square: int) -> int:
    """Signature of a cyclic branched cover; raises on non-integral data."""
    defect = Fraction((deg * deg - 1) * d_square, 3 * deg)
    value = deg * sigma_m - defect
    if value.denominator != 1:
        raise CoveringError("inconsistent branch data")
    return int(value)


def branched_cover(
    m_desc: ManifoldDescriptor,
    d_square: int,
    k_dot_d: int,
    deg: int,
    b_is_d_over_deg: bool = True,
) -> ManifoldDescriptor:
    """Cyclic cover of degree ``deg`` branched over a smooth connected
    divisor D with the stated square and canonical pairing.

    The caller asserts that D is divisible by ``deg`` in homology (the
    class B with deg B = D enters only through the stated numbers).
    Invariants follow the standard covering formulas; the genus of D is
    supplied by adjunction.
    """
    if deg < 1:
        raise CoveringError("covering degree must be positive")
    if not b_is_d_over_deg:
        raise CoveringError("branch divisor must be divisible by the covering degree")
    if deg == 1:
        return m_desc
    e_d = -(k_dot_d + d_square)
    e = deg * m_desc.e - (deg - 1) * e_d
    sigma = hirzebruch_signature(m_desc.sigma, deg, d_square)
    c1 = 2 * e + 3 * sigma
    # Cross-check against deg*(K + (deg-1) B)^2, a rational identity.
    k_sq = 2 * m_desc.e + 3 * m_desc.sigma
    direct = (
        deg * k_sq
        + 2 * (deg - 1) * k_dot_d
        + Fraction((deg - 1) ** 2 * d_square, deg)
    )
    if direct.denominator != 1 or int(direct) != c1:
        raise CoveringError("inconsistent branch data")

    lat = IntersectionLattice(("pullback",), ((c1,),), primitive_summand=False)
    canonical = lat.vector({"pullback": 1})
    notes = [NOTE_FULL_CANONICAL]
    if m_desc.simply_connected and d_square > 0:
        simply_connected = True
    else:
        simply_connected = False
        notes.append("pi1-unknown:branch divisor square not positive")
    recipe = ConstructionRecipe(
        "branched_cover",
        (("d_square", d_square), ("k_dot_d", k_dot_d), ("deg", deg)),
        (m_desc.recipe,),
        tuple(notes),
    )
    return ManifoldDescriptor(
        e=e,
        sigma=sigma,
        spin=False,
        simply_connected=simply_connected,
        symplectic=m_desc.symplectic,
        minimal="unknown",
        lattice=lat,
        canonical=canonical,
        witnesses=(),
        recipe=recipe,
    )


def pluri_system_defines_map(m_desc: ManifoldDescriptor, n: int) -> bool:
    """Whether the n-th pluricanonical system of a minimal general-type
    surface is known to define an everywhere defined holomorphic map.

    Conservative: returns False whenever no listed criterion applies.
    """
    if n < 2:
        return False
    if n >= 4:
        return True
    k_sq = m_desc.c1_squared
    if not m_desc.simply_connected:
        return n == 3 and k_sq >= 2 or n == 2 and k_sq >= 5
    p_g = m_desc.chi_h - 1  # q = 0 for simply-connected surfaces
    if n == 3:
        if k_sq >= 2:
            return True
        # Simply-connected numerical Godeaux surfaces: |3K| is holomorphic.
        return k_sq == 1 and p_g == 0
    # n == 2
    if k_sq >= 5 or p_g >= 1:
        return True
    return k_sq == 4 and p_g == 0


def pluricanonical_cover(m_desc: ManifoldDescriptor, p: CoverParams) -> ManifoldDescriptor:
    """Cover of degree m branched over a smooth divisor in |n K|, n = m a.

    The canonical class of the cover is d times the pulled-back canonical
    class of the base, hence divisible by exactly d, and the cover is
    again minimal, simply connected and of general type.
    """
    if not m_desc.simply_connected:
        raise CoveringError("pluricanonical cover needs a simply-connected base")
    if m_desc.minimal != "yes" or NOTE_GENERAL_TYPE not in m_desc.recipe.notes:
        raise CoveringError("pluricanonical cover needs a minimal general-type base")
    if not pluri_system_defines_map(m_desc, p.n):
        raise CoveringError("pluricanonical system not known to define map")
    c = m_desc.c1_squared
    if c <= 0:
        raise CoveringError("general-type base must have positive c1^2")
    m, d, a = p.m, p.d, p.a
    e = m * (m_desc.e + p.delta * c)
    c1 = m * d * d * c
    sigma_num = m * (2 * m_desc.e + (d * (d - 2) + 2 * a * (d - 1)) * c)
    if sigma_num % 3 != 0:
        raise CoveringError("inconsistent branch data")
    sigma = -(sigma_num // 3)
    chi_term = m * (d - 1) * (2 * d + a + 1) * c
    if chi_term % 12 != 0:
        raise CoveringError("inconsistent branch data")
    chi_h = m * m_desc.chi_h + chi_term // 12
    if (e + sigma) % 4 != 0 or (e + sigma) // 4 != chi_h:
        raise CoveringError("inconsistent branch data")

    # Pullback of the base canonical class: self-pairing m * c1^2(base).
    lat = IntersectionLattice(("phiK",), ((m * c,),), primitive_summand=True)
    canonical = lat.vector({"phiK": d})
    witnesses = (Witness("pullback_dual", (1,)),)
    recipe = ConstructionRecipe(
        "pluricanonical_cover",
        (("cover_m", m), ("cover_d", d)),
        (m_desc.recipe,),
        (NOTE_FULL_CANONICAL, NOTE_GENERAL_TYPE, "axiomatic-dual:pullback_dual"),
    )
    return ManifoldDescriptor(
        e=e,
        sigma=sigma,
        spin=d % 2 == 0,
        simply_connected=True,
        symplectic=True,
        minimal="yes",
        lattice=lat,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


def phi_map(p: CoverParams, e: int, c: int) -> tuple[int, int]:
    """Linear transport of (e, c1^2) under the pluricanonical cover."""
    return (p.m * (e + p.delta * c), p.m * p.d * p.d * c)


def phi_inverse(p: CoverParams, e_bar, c_bar) -> tuple[Fraction, Fraction]:
    """Rational inverse of the transport."""
    c = Fraction(c_bar, p.m * p.d * p.d)
    e = Fraction(e_bar, p.m) - p.delta * c
    return (e, c)


def phi_admissible_image(p: CoverParams, e_bar: int, c_bar: int) -> bool:
    """Image characterization of admissible pairs: e_bar and c_bar carry
    the right divisibilities and the pulled-back Noether sum is 0 mod 12."""
    if e_bar % p.m != 0:
        return False
    if c_bar % (p.m * p.d * p.d) != 0:
        return False
    e = e_bar // p.m
    c = c_bar // (p.m * p.d * p.d)
    return (e + (1 - p.delta) * c) % 12 == 0


def persson_image_sector(p: CoverParams, x: int, y: int) -> bool:
    """Whether (x, y) lies in the transported general-type sector, i.e.
    whether a cover with e = m x and c1^2 = m d^2 y is realized.

    The comparisons are exact rational ones; no rounding.
    """
    if x <= 0 or y <= 0:
        return False
    if y * (1 - p.delta) < 36 - x:
        return False
    if (x + (1 - p.delta) * y) % 12 != 0:
        return False
    # (x-36)/(5+delta) <= y <= (x-24)/(2+delta), cross-multiplied with the
    # positive denominators.
    return x - 36 <= y * (5 + p.delta) and y * (2 + p.delta) <= x - 24


def persson_cover(p: CoverParams, x: int, y: int) -> ManifoldDescriptor:
    """Constructor for the transported sector: build the general-type base
    with e = x - Delta y, c1^2 = y and take its pluricanonical cover.

    The single undecided point of the pluricanonical criterion (base
    p_g = 2, K^2 = 1 with a triple cover of divisibility 3) is rejected.
    """
    from .manifolds import catalog

    if not persson_image_sector(p, x, y):
        raise CoveringError("outside transported Persson sector")
    e_base = x - p.delta * y
    chi_base = (e_base + y) // 12
    base = catalog("persson", chi_base, y)
    if not pluri_system_defines_map(base, p.n):
        raise CoveringError("pluricanonical system not known to define map")
    return pluricanonical_cover(base, p)


def singular_double_cover(n: int, m: int) -> ManifoldDescriptor:
    """Resolution of the double cover of the quadric branched over 2n + 2m
    lines: two fibration classes F_1, F_2 with F_1 F_2 = 2 carry the
    canonical class (n-2) F_1 + (m-2) F_2, of divisibility gcd(n-2, m-2).
    """
    if n < 1 or m < 1:
        raise ConstructionError("line counts must be positive")
    e = 6 + 2 * (2 * m - 1) * (2 * n - 1)
    sigma = -4 * m * n
    lat = IntersectionLattice(("F_1", "F_2"), ((0, 2), (2, 0)), primitive_summand=True)
    canonical = lat.vector({"F_1": n - 2, "F_2": m - 2})
    witnesses: tuple[Witness, ...] = ()
    notes = [NOTE_FULL_CANONICAL, "divisibility-claim:gcd of fibre multiplicities"]
    g = gcd(abs(n - 2), abs(m - 2))
    if g:
        # Dual class to the primitive part of K, by unimodularity of the
        # ambient cohomology; Bezout coefficients give the pairing values.
        u, v = _bezout((n - 2) // g, (m - 2) // g)
        witnesses = (Witness("canonical_dual", (u, v)),)
        notes.append("axiomatic-dual:canonical_dual")
    recipe = ConstructionRecipe(
        "singular_double_cover", (("n", n), ("m", m)), (), tuple(notes)
    )
    return ManifoldDescriptor(
        e=e,
        sigma=sigma,
        spin=n % 2 == 0 and m % 2 == 0,
        simply_connected=True,
        symplectic=True,
        minimal="yes" if g >= 2 else "unknown",
        lattice=lat,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


def _bezout(a: int, b: int) -> tuple[int, int]:
    """(u, v) with a u + b v = gcd(a, b), extended Euclid."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_u, old_v = -old_u, -old_v
    return old_u, old_v

"""Geography validators, divisibility certificates and the existence
constructors.

A divisibility certificate bounds the maximal divisibility of the
canonical class from both sides: the coefficient gcd over a primitive
basis divides it, and the gcd of its pairings with tracked witness
surfaces is divisible by it.  When the two meet the divisibility is
certified exactly.  For simply-connected non-spin manifolds the witness
bound is intersected with the parity constraint (an even canonical class
would make the manifold spin), which is how several odd-divisibility
constructions are certified without an explicit odd-pairing surface.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstructionError
from .lattice import (
    ClassVector,
    coefficient_gcd,
    dot,
    gcd_all,
    odd_part,
    pairing,
    q_set,
)
from .manifolds import (
    ManifoldDescriptor,
    elliptic_surface,
    triple_names,
    with_recipe_notes,
)
from .surgery import (
    SurfaceRef,
    blow_up,
    generalized_knot_surgery,
    knot_surgery,
    lagrangian_triple_surgery,
)


@dataclass(frozen=True)
class DivisibilityCertificate:
    """Two-sided bound on the divisibility of a canonical class."""

    lower: int
    upper: int
    certified: bool
    parity_note: str

    @property
    def value(self) -> int:
        return self.lower


def certify_class(m: ManifoldDescriptor, k: ClassVector) -> DivisibilityCertificate:
    """Certificate for an arbitrary canonical class vector over m's lattice."""
    lower = coefficient_gcd(k)
    if k.is_zero():
        return DivisibilityCertificate(0, 0, True, "canonical class is zero")
    if not m.witnesses:
        return DivisibilityCertificate(lower, 0, False, "no witnesses")
    upper = gcd_all(dot(k, w.pairings) for w in m.witnesses)
    parity_note = "no parity constraint"
    if m.simply_connected and m.symplectic:
        if m.spin:
            parity_note = "spin: divisibility must be even"
            if lower % 2 != 0:
                parity_note = "inconsistent: spin with odd coefficient gcd"
        else:
            stripped = odd_part(upper)
            if stripped != upper:
                parity_note = "non-spin: even part of witness bound discarded"
                upper = stripped
            else:
                parity_note = "non-spin: divisibility must be odd"
    certified = (
        m.lattice.primitive_summand
        and upper != 0
        and lower == upper
        and not parity_note.startswith("inconsistent")
    )
    return DivisibilityCertificate(lower, upper, certified, parity_note)


def divisibility(m: ManifoldDescriptor) -> DivisibilityCertificate:
    return certify_class(m, m.canonical)


@dataclass(frozen=True)
class ValidationReport:
    """Ordered list of (constraint name, passed, detail)."""

    entries: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.entries)

    def failures(self) -> list[str]:
        return [name for name, passed, _ in self.entries if not passed]


def validate(m: ManifoldDescriptor) -> ValidationReport:
    """Run every applicable numerical constraint; report, never raise."""
    entries: list[tuple[str, bool, str]] = []
    c1 = 2 * m.e + 3 * m.sigma
    cert = divisibility(m)
    full = m.carries_full_canonical
    d = cert.lower if (m.lattice.primitive_summand and full) else 0

    def add(name: str, passed: bool, detail: str) -> None:
        entries.append((name, passed, detail))

    def skip(name: str) -> None:
        entries.append((name, True, "not applicable"))

    add("chi_h_integral", (m.e + m.sigma) % 4 == 0, f"e+sigma = {m.e + m.sigma}")
    add("c1sq_sigma_mod8", (c1 - m.sigma) % 8 == 0, f"c1^2 - sigma = {c1 - m.sigma}")

    if m.symplectic and m.simply_connected and (m.e + m.sigma) % 4 == 0:
        b2_plus = (m.e - 2 + m.sigma) // 2
        add("b2_plus_odd", b2_plus % 2 == 1, f"b2+ = {b2_plus}")
    else:
        skip("b2_plus_odd")

    if m.spin:
        add("rochlin", m.sigma % 16 == 0, f"sigma = {m.sigma}")
    else:
        skip("rochlin")

    if m.simply_connected and d >= 1:
        need = d * d if d % 2 == 1 else 2 * d * d
        add("divisibility_square", c1 % need == 0, f"{need} | {c1}")
    else:
        skip("divisibility_square")

    if m.simply_connected and m.symplectic and m.sigma % 8 == 0 and d >= 1:
        u = odd_part(d)
        add("signature_eight", c1 % (8 * u * u) == 0, f"{8 * u * u} | {c1}")
    else:
        skip("signature_eight")

    if full:
        bad = []
        for w in m.witnesses:
            if w.genus is None or w.self_intersection is None:
                continue
            if 2 * w.genus - 2 != dot(m.canonical, w.pairings) + w.self_intersection:
                bad.append(w.name)
        add("adjunction_witnesses", not bad, "violations: " + ",".join(bad) if bad else "ok")
    else:
        skip("adjunction_witnesses")

    if full and d >= 1:
        bad = []
        for w in m.witnesses:
            if w.genus is None or w.self_intersection != 0:
                continue
            if (2 * w.genus - 2) % d != 0:
                bad.append(w.name)
        add("square_zero_genus", not bad, "violations: " + ",".join(bad) if bad else "ok")
    else:
        skip("square_zero_genus")

    if full:
        k_sq = pairing(m.lattice, m.canonical, m.canonical)
        add("canonical_square", k_sq == c1, f"K^2 = {k_sq}, 2e+3sigma = {c1}")
    else:
        skip("canonical_square")

    if cert.certified and cert.value >= 2:
        add("minimality", m.minimal != "no", f"divisibility {cert.value}")
    else:
        skip("minimality")

    return ValidationReport(tuple(entries))


# --- constructors -----------------------------------------------------------


def _fibre_ref(m: ManifoldDescriptor, name: str = "f") -> SurfaceRef:
    return SurfaceRef(
        m.lattice.basis_vector(name), 1, 0, "+", complement_simply_connected=True
    )


def _rim_ref(m: ManifoldDescriptor, index: int = 1) -> SurfaceRef:
    r = triple_names(index)[2]
    return SurfaceRef(
        m.lattice.basis_vector(r), 1, 0, "+", complement_simply_connected=True
    )


def surgered_homotopy_elliptic(n: int, d: int) -> ManifoldDescriptor:
    """Homotopy elliptic surface with divisibility d built by knot surgery
    on the fibre and on a rim torus, following the parity of (n, d).

    This variant keeps the rim-torus geometry explicit, which the
    positive-c1^2 constructors build on; the public ``homotopy_elliptic``
    prefers genuine elliptic surfaces for chi_h <= 2.
    """
    if n < 1 or d < 1:
        raise ConstructionError("chi_h and divisibility must be positive")
    if n % 2 == 1 and d % 2 == 0:
        raise ConstructionError("spin parity obstruction")
    if n == 1:
        k = (d - 1) // 2
        base = elliptic_surface(1, 1, 1)
        return knot_surgery(base, _fibre_ref(base), k + 1, "+")
    if n % 2 == 0 and d % 2 == 0:
        m, k = n // 2, d // 2
        g1, g2 = m * (k - 1) + 1, k
        base = elliptic_surface(n, 1, 1)
    elif n % 2 == 1:
        m, k = (n - 1) // 2, (d - 1) // 2
        g1, g2 = 2 * k * m + k + 1, 2 * k + 1
        base = elliptic_surface(n, 1, 1)
    else:
        m, k = n // 2, (d - 1) // 2
        g1, g2 = 4 * k * m + k + 2, 2 * k + 1
        base = elliptic_surface(n, 2, 1)
    step1 = knot_surgery(base, _fibre_ref(base), g1, "+")
    return knot_surgery(step1, _rim_ref(step1), g2, "+")


def homotopy_elliptic(n: int, d: int) -> ManifoldDescriptor:
    """Simply-connected symplectic manifold with chi_h = n, c1^2 = 0 and
    certified canonical divisibility exactly d; rejects odd n with even d.
    """
    if n < 1 or d < 1:
        raise ConstructionError("chi_h and divisibility must be positive")
    if n % 2 == 1 and d % 2 == 0:
        raise ConstructionError("spin parity obstruction")
    if n == 1:
        out = elliptic_surface(1, d + 2, 2)
        return with_recipe_notes(out, "alternative:knot surgery on the fibre of E(1)")
    if n == 2:
        out = elliptic_surface(2, d + 1, 1)
        return with_recipe_notes(out, "alternative:knot surgery on fibre and rim torus of E(2)")
    return surgered_homotopy_elliptic(n, d)


def _rim_neighbourhood_surface(m: ManifoldDescriptor, genus: int) -> SurfaceRef:
    """Square-zero surface in the class (rim torus + its dual sphere) of the
    first triple, after the rim torus has been knot surgered."""
    _, _, r, dr = triple_names(1)
    cls = m.lattice.basis_vector(r) + m.lattice.basis_vector(dr)
    return SurfaceRef(cls, genus, 0, "+", complement_simply_connected=True)


def spin_surface(d: int, m: int, t: int) -> ManifoldDescriptor:
    """Spin manifold with c1^2 = 2 t d^2, e = t d^2 + 24 m, sigma = -16 m
    and certified divisibility d (d even)."""
    if d < 2 or d % 2 != 0:
        raise ConstructionError("spin construction requires even divisibility")
    if m < 1 or t < 1:
        raise ConstructionError("parameters must be positive")
    k = d // 2
    base = surgered_homotopy_elliptic(2 * m, d)
    sigma_ref = _rim_neighbourhood_surface(base, k + 1)
    return generalized_knot_surgery(base, sigma_ref, t * k)


def nonspin_surface(d: int, n: int, t: int) -> ManifoldDescriptor:
    """Non-spin manifold with c1^2 = 8 t d^2, e = 4 t d^2 + 12 n,
    sigma = -8 n and certified divisibility d (d odd, n >= 2)."""
    if d < 1 or d % 2 != 1:
        raise ConstructionError("non-spin construction requires odd divisibility")
    if n < 2 or t < 1:
        raise ConstructionError("requires n >= 2 and t >= 1")
    base = surgered_homotopy_elliptic(n, d)
    sigma_ref = _rim_neighbourhood_surface(base, d + 1)
    return generalized_knot_surgery(base, sigma_ref, t * d)


def negative_c1(n: int, r: int) -> ManifoldDescriptor:
    """(chi_h, c1^2) = (n, -r) by blowing up E(n) r times; divisibility 1."""
    if n < 1 or r < 1:
        raise ConstructionError("parameters must be positive")
    out = elliptic_surface(n, 1, 1)
    for _ in range(r):
        out = blow_up(out)
    return out


# --- inequivalent symplectic structures -------------------------------------


@dataclass(frozen=True)
class FamilyResult:
    """One manifold, one canonical class per sign pattern, and the set of
    certified divisibilities (which equals the subset-gcd set Q)."""

    descriptor: ManifoldDescriptor
    canonical_classes: tuple[ClassVector, ...]
    certificates: tuple[DivisibilityCertificate, ...]
    divisibilities: tuple[int, ...]
    q: frozenset[int]


def _triple_parameters(d: int, tail: list[int]) -> tuple[int, int, list[tuple[int, int]]]:
    """(em, h, [(a_i, h_i)]) for the per-triple surgeries realizing the
    divisor list; exactness of every halving is guaranteed by the parity
    preconditions on the list."""
    if d % 2 == 1:
        em, h = 1, (d - 1) // 2
        params = [(d + di, (d - di) // 2) for di in tail]
        return em, h, params
    k = d // 2
    em, h = 2, k - 1
    params = []
    for di in tail:
        ki = di // 2
        if d % 4 != 0 or di % 4 == 0:
            a_i, h_i = (k + ki) // 2, (k - ki) // 2
        else:
            a_i, h_i = (k + 2 * ki) // 2, (k - 2 * ki) // 2
        params.append((a_i, h_i))
    return em, h, params


def inequivalent_family(
    d: int,
    divisors: list[int] | tuple[int, ...],
    regime: str = "c1sq_zero",
    *,
    n: int | None = None,
    m: int | None = None,
    t: int | None = None,
) -> FamilyResult:
    """Build one manifold carrying a symplectic structure for every subset
    gcd of the divisor list.

    Each divisor beyond the first is realized on its own rim-torus triple
    by a fibre sum with an elliptic piece and two knot surgeries; flipping
    the sign of the first knot surgery toggles the triple between
    contributing d and contributing (twice) the divisor.  The 2^N sign
    patterns give 2^N canonical classes whose certified divisibilities,
    as a set, are exactly q_set(d, divisors).
    """
    divisors = list(divisors)
    q = q_set(d, divisors)
    tail = divisors[1:]
    big_n = len(tail)
    if big_n < 1:
        raise ConstructionError("need at least one divisor besides d")
    em, h, params = _triple_parameters(d, tail)

    if regime == "c1sq_zero":
        if n is None:
            raise ConstructionError("c1sq_zero regime needs the target chi_h")
        if d % 2 == 1:
            if n < 2 * big_n + 1:
                raise ConstructionError("need chi_h >= 2N+1 for odd divisibility")
            length = n - big_n
        else:
            if n % 2 != 0 or n < 3 * big_n + 1:
                raise ConstructionError("need even chi_h >= 3N+1 for even divisibility")
            length = n - 2 * big_n
        x = elliptic_surface(length, 1, 1)
        triples = list(range(1, big_n + 1))
        for idx, (a_i, h_i) in zip(triples, params):
            x = lagrangian_triple_surgery(x, idx, a_i, em, h_i, h, "+")
        g_final = (length * (d - 1) + 2) // 2
        w = knot_surgery(x, _fibre_ref(x), g_final, "+")
    elif regime == "spin_positive":
        if m is None or t is None:
            raise ConstructionError("spin_positive regime needs m and t")
        if d % 2 != 0:
            raise ConstructionError("spin_positive regime requires even divisibility")
        if 2 * m < 3 * big_n + 2:
            raise ConstructionError("need 2m >= 3N+2")
        length = 2 * m - 2 * big_n
        w = spin_surface(d, length // 2, t)
        triples = list(range(2, big_n + 2))
        for idx, (a_i, h_i) in zip(triples, params):
            w = lagrangian_triple_surgery(w, idx, a_i, em, h_i, h, "+")
    elif regime == "nonspin_positive":
        if m is None or t is None:
            raise ConstructionError("nonspin_positive regime needs m and t")
        if d % 2 != 1 or d < 3:
            raise ConstructionError("nonspin_positive regime requires odd divisibility >= 3")
        if m < 2 * big_n + 2:
            raise ConstructionError("need m >= 2N+2")
        length = m - big_n
        w = nonspin_surface(d, length, t)
        triples = list(range(2, big_n + 2))
        for idx, (a_i, h_i) in zip(triples, params):
            w = lagrangian_triple_surgery(w, idx, a_i, em, h_i, h, "+")
    else:
        raise ConstructionError(f"unknown regime {regime!r}")

    t1_positions = [w.lattice.index_of(triple_names(idx)[0]) for idx in triples]
    canonicals: list[ClassVector] = []
    certificates: list[DivisibilityCertificate] = []
    for mask in range(1 << big_n):
        coeffs = list(w.canonical.coefficients)
        for bit, (pos, (_, h_i)) in enumerate(zip(t1_positions, params)):
            if mask >> bit & 1:
                coeffs[pos] -= 4 * h_i
        vec = ClassVector(tuple(coeffs))
        canonicals.append(vec)
        certificates.append(certify_class(w, vec))
    divisibilities = tuple(c.value for c in certificates)
    return FamilyResult(w, tuple(canonicals), tuple(certificates), divisibilities, q)


# --- realizability meta-query ------------------------------------------------


@dataclass(frozen=True)
class Realizability:
    status: str  # "yes" | "no" | "unknown"
    detail: str
    descriptor: ManifoldDescriptor | None = None


def realizable(chi_h: int, c1_sq: int, d: int) -> Realizability:
    """Search the constructors and obstruction lemmas for a simply-connected
    symplectic manifold at (chi_h, c1^2) with canonical divisibility d.

    Not a completeness claim: points outside the constructive families and
    unhit by an obstruction return "unknown".
    """
    if chi_h < 1:
        return Realizability("no", "chi_h must be positive for b1 = 0")
    if d < 1:
        return Realizability("no", "divisibility is a non-negative integer, 0 only for K = 0")
    if c1_sq < 0:
        if d != 1:
            return Realizability("no", "negative c1^2 forces a blown-up, indivisible canonical class")
        return Realizability("yes", "blow-ups of an elliptic surface", negative_c1(chi_h, -c1_sq))
    if c1_sq == 0:
        if chi_h % 2 == 1 and d % 2 == 0:
            return Realizability("no", "spin parity obstruction")
        return Realizability("yes", "homotopy elliptic surface", homotopy_elliptic(chi_h, d))
    if d % 2 == 0:
        if c1_sq % (2 * d * d) != 0:
            return Realizability("no", "even divisibility d needs 2d^2 | c1^2")
        t = c1_sq // (2 * d * d)
        quarter = t * d * d // 4
        if (chi_h - quarter) % 2 != 0:
            return Realizability("no", "spin chi_h parity obstruction")
        m = (chi_h - quarter) // 2
        if m >= 1:
            return Realizability("yes", "spin family", spin_surface(d, m, t))
        return Realizability("unknown", "outside the negative-signature spin family")
    if c1_sq % (d * d) != 0:
        return Realizability("no", "divisibility d needs d^2 | c1^2")
    if c1_sq % (8 * d * d) == 0:
        t = c1_sq // (8 * d * d)
        n = chi_h - t * d * d
        if n >= 2:
            return Realizability("yes", "non-spin family", nonspin_surface(d, n, t))
        return Realizability("unknown", "outside the negative-signature non-spin family")
    return Realizability("unknown", "no constructor covers this point")

"""Manifold descriptors and the catalog of atomic building blocks.

A :class:`ManifoldDescriptor` is the symbolic value every constructor and
surgery produces: Euler characteristic and signature, topological flags,
the tracked fragment of the intersection lattice, the canonical class as
an integer vector over that fragment, a list of witness surfaces, and a
provenance recipe that can be re-executed to reproduce the descriptor.

Atomic pieces:

* relatively minimal elliptic surfaces ``E(n)_{p,q}``,
* fibred-knot products ``M_K x S^1`` of fibre genus ``h``,
* surface bundles ``Y_{g,h}`` used for higher-genus knot surgery,
* a small catalog of minimal complex surfaces of general type.

The spin rule used for ``E(n)_{p,q}`` is "n even and p, q both odd".
This is the standard classification of spin relatively minimal elliptic
surfaces; it coincides with the parity of the canonical class on every
instance (tested).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd

from .errors import ConstructionError
from .lattice import (
    ClassVector,
    IntersectionLattice,
    Witness,
    block_diagonal,
    coefficient_gcd,
    pairing,
)

# Recipe note markers.  Notes are provenance strings; a few fixed markers
# gate derived checks elsewhere in the package.
NOTE_FULL_CANONICAL = "full-canonical"
NOTE_GENERAL_TYPE = "general-type"
NOTE_PI1_SECTION = "pi1-normally-generated-by:"

ParamValue = int | str | bool | tuple[int, ...]


@dataclass(frozen=True)
class ConstructionRecipe:
    """Tree-shaped provenance: operation name, parameters, child recipes."""

    operation: str
    params: tuple[tuple[str, ParamValue], ...] = ()
    inputs: tuple["ConstructionRecipe", ...] = ()
    notes: tuple[str, ...] = ()

    def param(self, name: str) -> ParamValue:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def has_note(self, marker: str) -> bool:
        return any(n.startswith(marker) for n in self.notes)


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Invariant-level model of a closed oriented 4-manifold."""

    e: int
    sigma: int
    spin: bool
    simply_connected: bool
    symplectic: bool
    minimal: str  # "yes" | "no" | "unknown"
    lattice: IntersectionLattice
    canonical: ClassVector
    witnesses: tuple[Witness, ...]
    recipe: ConstructionRecipe

    def __post_init__(self):
        if self.minimal not in ("yes", "no", "unknown"):
            raise ConstructionError("minimal must be yes, no or unknown")
        if len(self.canonical) != self.lattice.rank:
            raise ConstructionError("canonical class length does not match lattice rank")
        for w in self.witnesses:
            if len(w.pairings) != self.lattice.rank:
                raise ConstructionError(f"witness {w.name!r} pairing length mismatch")

    @property
    def c1_squared(self) -> int:
        return 2 * self.e + 3 * self.sigma

    @property
    def chi_h(self) -> int:
        if (self.e + self.sigma) % 4 != 0:
            raise ConstructionError("not almost-complex consistent")
        return (self.e + self.sigma) // 4

    @property
    def carries_full_canonical(self) -> bool:
        return NOTE_FULL_CANONICAL in self.recipe.notes

    def canonical_square(self) -> int:
        return pairing(self.lattice, self.canonical, self.canonical)

    def witness(self, name: str) -> Witness:
        for w in self.witnesses:
            if w.name == name:
                return w
        raise KeyError(name)


@dataclass(frozen=True)
class Invariants:
    """Derived numerical invariants; Betti fields need simple connectivity."""

    c1_squared: int
    chi_h: int | None
    b2: int | None
    b2_plus: int | None
    b2_minus: int | None


def derived_invariants(m: ManifoldDescriptor) -> Invariants:
    """Compute c1^2, chi_h and (for simply-connected manifolds) b2 data."""
    c1 = 2 * m.e + 3 * m.sigma
    if (m.e + m.sigma) % 4 != 0:
        if m.symplectic and m.simply_connected:
            raise ConstructionError("not almost-complex consistent")
        chi = None
    else:
        chi = (m.e + m.sigma) // 4
    if not m.simply_connected:
        return Invariants(c1, chi, None, None, None)
    b2 = m.e - 2
    b2_plus = (m.e - 2 + m.sigma) // 2
    return Invariants(c1, chi, b2, b2_plus, b2 - b2_plus)


def spin_from_parity(m: ManifoldDescriptor) -> bool:
    """Spin test via the canonical class: K is characteristic, so a
    simply-connected manifold whose tracked lattice carries the full
    canonical class over a primitive summand is spin iff K is even."""
    if not (m.simply_connected and m.carries_full_canonical and m.lattice.primitive_summand):
        raise ConstructionError("spin parity derivation needs a full primitive canonical class")
    g = coefficient_gcd(m.canonical)
    return g == 0 or g % 2 == 0


# --- elliptic surfaces -----------------------------------------------------

# Per rim-torus triple i, the tracked nucleus classes: two Lagrangian tori
# T1_i, R_i, each with a dual sphere (D1_i, DR_i) of square -2 meeting it
# once.  The third torus of the triple, a*T1_i + (R_i - a*T1_i), is derived
# at surgery time.  Pairings between different triples, and between triples
# and the fibre, are zero: the nuclei are pairwise disjoint.
_NUCLEUS_BLOCK = ((0, 1), (1, -2))


def triple_names(i: int) -> tuple[str, str, str, str]:
    return (f"T1_{i}", f"D1_{i}", f"R_{i}", f"DR_{i}")


@lru_cache(maxsize=None)
def elliptic_surface(n: int, p: int = 1, q: int = 1) -> ManifoldDescriptor:
    """The relatively minimal elliptic surface E(n)_{p,q} without section
    obstructions modeled: canonical class (npq - p - q) f with f primitive.

    The tracked lattice holds the fibre class f and the n-1 rim-torus
    triples with their dual spheres.
    """
    if n < 1 or p < 1 or q < 1:
        raise ConstructionError("elliptic surface parameters must be positive")
    if gcd(p, q) != 1:
        raise ConstructionError("multiple fibres not coprime")
    names: list[str] = ["f"]
    blocks: list[tuple[tuple[int, ...], ...]] = [((0,),)]
    for i in range(1, n):
        t1, d1, r, dr = triple_names(i)
        names.extend([t1, d1, r, dr])
        blocks.extend([_NUCLEUS_BLOCK, _NUCLEUS_BLOCK])
    lat = IntersectionLattice(tuple(names), block_diagonal(blocks), primitive_summand=True)
    k_coeff = n * p * q - p - q
    canonical = lat.vector({"f": k_coeff})

    witnesses: list[Witness] = []
    notes = [NOTE_FULL_CANONICAL, f"rim-torus-triples:{n - 1}"]
    fibre_dual_row = lat.basis_vector("f").coefficients  # meets f once, nuclei not at all
    if p == 1 and q == 1:
        # Honest section: sphere of square -n meeting the fibre once.
        witnesses.append(Witness("section", fibre_dual_row, 0, -n))
    else:
        # Dual class to the multiple fibre; a sphere meeting f once exists
        # when one multiplicity is 1, a dual class always by unimodularity.
        witnesses.append(Witness("fibre_dual", fibre_dual_row))
        notes.append("axiomatic-dual:fibre_dual")
    for i in range(1, n):
        t1, d1, r, dr = triple_names(i)
        witnesses.append(Witness(f"sphere_{t1}", lat.pairing_row(lat.basis_vector(d1)), 0, -2))
        witnesses.append(Witness(f"sphere_{r}", lat.pairing_row(lat.basis_vector(dr)), 0, -2))
    notes.append("assumed-disjoint:cross-nucleus pairings set to zero")

    spin = n % 2 == 0 and p % 2 == 1 and q % 2 == 1
    if n >= 2:
        minimal = "yes"
    else:
        minimal = "yes" if (p > 1 and q > 1) else "no"
    recipe = ConstructionRecipe(
        "elliptic_surface", (("n", n), ("p", p), ("q", q)), (), tuple(notes)
    )
    return ManifoldDescriptor(
        e=12 * n,
        sigma=-8 * n,
        spin=spin,
        simply_connected=True,
        symplectic=True,
        minimal=minimal,
        lattice=lat,
        canonical=canonical,
        witnesses=tuple(witnesses),
        recipe=recipe,
    )


def knot_product(h: int) -> ManifoldDescriptor:
    """M_K x S^1 for a fibred knot K of genus h; h = 0 models the unknot.

    The lattice is the hyperbolic pair (T_K, B_K) of section torus and
    fibre; the canonical class is (2h - 2) T_K by adjunction.
    """
    if h < 0:
        raise ConstructionError("fibre genus must be non-negative")
    lat = IntersectionLattice(("T_K", "B_K"), ((0, 1), (1, 0)))
    canonical = lat.vector({"T_K": 2 * h - 2})
    witnesses = (
        Witness("section_torus", lat.pairing_row(lat.basis_vector("T_K")), 1, 0),
        Witness("fibre", lat.pairing_row(lat.basis_vector("B_K")), h, 0),
    )
    notes = (NOTE_FULL_CANONICAL, NOTE_PI1_SECTION + "T_K", "b1:2", f"fibre-genus:{h}")
    recipe = ConstructionRecipe("knot_product", (("h", h),), (), notes)
    return ManifoldDescriptor(
        e=0,
        sigma=0,
        spin=True,
        simply_connected=False,
        symplectic=h >= 1,
        minimal="unknown",
        lattice=lat,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


def surface_bundle_y(g: int, h: int) -> ManifoldDescriptor:
    """The Sigma_h-bundle over Sigma_g built from g fibre sums of knot
    products; carries 2h(g-1) split-class blocks [[2,1],[1,0]] besides the
    hyperbolic (section, fibre) pair."""
    if g < 1 or h < 1:
        raise ConstructionError("bundle genera must be positive")
    names = ["Sigma_S", "Sigma_F"]
    blocks: list[tuple[tuple[int, ...], ...]] = [((0, 1), (1, 0))]
    for j in range(1, 2 * h * (g - 1) + 1):
        names.extend([f"V_{j}", f"W_{j}"])
        blocks.append(((2, 1), (1, 0)))
    lat = IntersectionLattice(tuple(names), block_diagonal(blocks))
    canonical = lat.vector({"Sigma_S": 2 * h - 2, "Sigma_F": 2 * g - 2})
    witnesses = (
        Witness("section", lat.pairing_row(lat.basis_vector("Sigma_S")), g, 0),
        Witness("fibre", lat.pairing_row(lat.basis_vector("Sigma_F")), h, 0),
    )
    notes = (NOTE_FULL_CANONICAL, NOTE_PI1_SECTION + "Sigma_S", f"b1:{2 * g}")
    recipe = ConstructionRecipe("surface_bundle_Y", (("g", g), ("h", h)), (), notes)
    return ManifoldDescriptor(
        e=4 * (g - 1) * (h - 1),
        sigma=0,
        spin=True,
        simply_connected=False,
        symplectic=True,
        minimal="unknown",
        lattice=lat,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


# --- catalog of general-type surfaces --------------------------------------

CATALOG_NAMES = (
    "barlow",
    "lee_park",
    "enriques_k1_pg1",
    "enriques_k2_pg1",
    "godeaux_like",
    "horikawa_spin",
    "horikawa_nonspin",
    "persson",
)


def _rank_one_descriptor(
    name: str,
    params: tuple[tuple[str, ParamValue], ...],
    chi_h: int,
    c1_sq: int,
    divisibility: int,
    spin: bool,
    notes: tuple[str, ...],
    witnesses_mode: str,
) -> ManifoldDescriptor:
    """Catalog surfaces are stored as invariant tuples plus a rank-one
    canonical lattice; their full cohomology is not modeled.

    The single generator is the primitive class K/divisibility, so its
    square is c1^2 / divisibility^2.
    """
    e = 12 * chi_h - c1_sq
    sigma = c1_sq - 8 * chi_h
    d = divisibility
    if d >= 1:
        if c1_sq % (d * d) != 0:
            raise ConstructionError("catalog divisibility inconsistent with c1^2")
        gen_square = c1_sq // (d * d)
        lat = IntersectionLattice(("A",), ((gen_square,),), primitive_summand=True)
        canonical = lat.vector({"A": d})
    else:
        raise ConstructionError("catalog divisibility must be positive")
    witnesses: tuple[Witness, ...]
    if witnesses_mode == "dual":
        witnesses = (Witness("canonical_dual", (1,)),)
    elif witnesses_mode == "genus2_fibre":
        # A genus-2 fibre of square zero pairs 2 with K, i.e. 2/d with A.
        witnesses = (Witness("genus2_fibre", (2 // d,), 2, 0),)
    else:
        witnesses = ()
    recipe = ConstructionRecipe("catalog", (("name", name),) + params, (), notes)
    return ManifoldDescriptor(
        e=e,
        sigma=sigma,
        spin=spin,
        simply_connected=True,
        symplectic=True,
        minimal="yes",
        lattice=lat,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


def catalog(name: str, *params: int) -> ManifoldDescriptor:
    """Catalog surfaces of general type used as covering bases.

    Entries: barlow, lee_park, enriques_k1_pg1, enriques_k2_pg1,
    godeaux_like(K^2, p_g), horikawa_spin(r), horikawa_nonspin(s),
    persson(x, y).
    """
    base_notes = (NOTE_FULL_CANONICAL, NOTE_GENERAL_TYPE)
    if name == "barlow":
        return _rank_one_descriptor(
            name, (), chi_h=1, c1_sq=1, divisibility=1, spin=False,
            notes=base_notes + ("numerical-Godeaux", "axiomatic-dual:canonical_dual"),
            witnesses_mode="dual",
        )
    if name == "lee_park":
        return _rank_one_descriptor(
            name, (), chi_h=1, c1_sq=2, divisibility=1, spin=False,
            notes=base_notes + ("numerical-Campedelli", "axiomatic-dual:canonical_dual"),
            witnesses_mode="dual",
        )
    if name == "enriques_k1_pg1":
        return _rank_one_descriptor(
            name, (), chi_h=2, c1_sq=1, divisibility=1, spin=False,
            notes=base_notes + ("axiomatic-dual:canonical_dual",), witnesses_mode="dual",
        )
    if name == "enriques_k2_pg1":
        return _rank_one_descriptor(
            name, (), chi_h=2, c1_sq=2, divisibility=1, spin=False,
            notes=base_notes + ("axiomatic-dual:canonical_dual",), witnesses_mode="dual",
        )
    if name == "godeaux_like":
        if len(params) != 2:
            raise ConstructionError("godeaux_like needs (K^2, p_g)")
        k_sq, p_g = params
        if k_sq not in (1, 2):
            raise ConstructionError("godeaux_like covers K^2 = 1 or 2 only")
        if p_g < 0 or k_sq < 2 * p_g - 4:
            raise ConstructionError("p_g violates the Noether inequality")
        return _rank_one_descriptor(
            name, (("k_sq", k_sq), ("p_g", p_g)),
            chi_h=p_g + 1, c1_sq=k_sq, divisibility=1, spin=False,
            notes=base_notes + ("axiomatic-dual:canonical_dual",), witnesses_mode="dual",
        )
    if name == "horikawa_spin":
        if len(params) != 1:
            raise ConstructionError("horikawa_spin needs (r,)")
        (r,) = params
        if r < 1 or r % 2 == 0:
            raise ConstructionError("horikawa_spin requires odd r")
        # Spin surface on the Noether line; the genus-2 fibration pins the
        # divisibility to exactly 2.
        return _rank_one_descriptor(
            name, (("r", r),), chi_h=4 * r + 3, c1_sq=8 * r, divisibility=2, spin=True,
            notes=base_notes + ("genus-2-fibration", "noether-line"),
            witnesses_mode="genus2_fibre",
        )
    if name == "horikawa_nonspin":
        if len(params) != 1:
            raise ConstructionError("horikawa_nonspin needs (s,)")
        (s,) = params
        if s < 1:
            raise ConstructionError("horikawa_nonspin requires s >= 1")
        return _rank_one_descriptor(
            name, (("s", s),), chi_h=4 * s + 3, c1_sq=8 * s, divisibility=1, spin=False,
            notes=base_notes + ("genus-2-fibration", "noether-line"),
            witnesses_mode="genus2_fibre",
        )
    if name == "persson":
        if len(params) != 2:
            raise ConstructionError("persson needs (x, y)")
        x, y = params
        if x < 3 or not (2 * x - 6 <= y <= 4 * x - 8):
            raise ConstructionError("outside Persson sector")
        e = 12 * x - y
        sigma = y - 8 * x
        lat = IntersectionLattice(("K_M",), ((y,),), primitive_summand=False)
        # Genus-2 fibration bounds the divisibility by 2, but neither spin
        # nor exact divisibility is pinned down; certificate stays open.
        recipe = ConstructionRecipe(
            "catalog",
            (("name", name), ("x", x), ("y", y)),
            (),
            base_notes + ("genus-2-fibration", "divisibility-in-1-2", "spin-undetermined"),
        )
        return ManifoldDescriptor(
            e=e,
            sigma=sigma,
            spin=False,
            simply_connected=True,
            symplectic=True,
            minimal="yes",
            lattice=lat,
            canonical=lat.vector({"K_M": 1}),
            witnesses=(),
            recipe=recipe,
        )
    raise ConstructionError(f"unknown catalog entry {name!r}")


def with_recipe_notes(m: ManifoldDescriptor, *extra: str) -> ManifoldDescriptor:
    """Copy a descriptor with extra provenance notes appended."""
    recipe = replace(m.recipe, notes=m.recipe.notes + tuple(extra))
    return replace(m, recipe=recipe)

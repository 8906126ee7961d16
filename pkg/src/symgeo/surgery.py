"""Cut-and-paste operations on manifold descriptors.

All operations are pure: they take immutable descriptors and return new
ones.  The generalized fibre sum is modeled at the invariant level; the
gluing data itself is not represented.  Callers assert the absence of rim
tori (or the fact that rim tori do not contribute to the canonical class)
through the ``no_rim_tori`` flag, and the assertion is recorded in the
provenance notes.

Witness surfaces are carried through surgeries.  A knot surgery along a
torus T caps every tracked surface meeting T with fibre-genus copies of
the Seifert surface: a witness meeting T in a single positive point keeps
a declared genus (raised by the knot genus); any other intersection
pattern keeps the pairing vector but forgets genus and self-intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ConstructionError
from .lattice import (
    ClassVector,
    IntersectionLattice,
    Witness,
    _trusted_lattice,
    _zeros,
    coefficient_gcd,
    dot,
    pairing,
)
from .manifolds import (
    NOTE_FULL_CANONICAL,
    NOTE_PI1_SECTION,
    ConstructionRecipe,
    ManifoldDescriptor,
    elliptic_surface,
    triple_names,
)


@dataclass(frozen=True)
class SurfaceRef:
    """An embedded surface given by its class in the tracked lattice."""

    class_vec: ClassVector
    genus: int
    self_intersection: int = 0
    symplectic_sign: str = "+"
    complement_simply_connected: bool = False

    def __post_init__(self):
        if self.symplectic_sign not in ("+", "-"):
            raise ConstructionError("symplectic sign must be + or -")
        if self.genus < 0:
            raise ConstructionError("surface genus must be non-negative")


def negate_structure(k: ClassVector) -> ClassVector:
    """Canonical class of the oppositely oriented symplectic structure."""
    return -k


def _check_square_zero_indivisible(m: ManifoldDescriptor, ref: SurfaceRef) -> None:
    if len(ref.class_vec) != m.lattice.rank:
        raise ConstructionError("surface class does not live over the descriptor's lattice")
    if ref.self_intersection != 0 or pairing(m.lattice, ref.class_vec, ref.class_vec) != 0:
        raise ConstructionError("surgery surface must have self-intersection zero")
    if coefficient_gcd(ref.class_vec) != 1:
        raise ConstructionError("surgery surface class must be indivisible")


def _derive_spin(full: bool, primitive: bool, k: ClassVector) -> bool:
    """K is characteristic, so evenness of K decides spin once the lattice
    carries the full canonical class over a primitive summand."""
    if not (full and primitive):
        return False
    g = coefficient_gcd(k)
    return g == 0 or g % 2 == 0


def _derive_minimal(full: bool, primitive: bool, k: ClassVector) -> str:
    # A canonical class of divisibility >= 2 forces minimality.
    if full and primitive and coefficient_gcd(k) >= 2:
        return "yes"
    return "unknown"


def _unit_basis_index(v: ClassVector) -> int | None:
    items = v.nonzero_items()
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return None


def _pi1_collapses(desc: ManifoldDescriptor, ref: SurfaceRef) -> bool:
    """True when gluing along ``ref`` kills the fundamental group of the
    ``desc`` side: either the piece and the surface complement are simply
    connected, or pi_1 of the piece is normally generated by the image of
    the surface (recorded at construction time for section classes)."""
    if desc.simply_connected and ref.complement_simply_connected:
        return True
    for note in desc.recipe.notes:
        if note.startswith(NOTE_PI1_SECTION):
            name = note[len(NOTE_PI1_SECTION):]
            if name in desc.lattice.basis_names:
                if ref.class_vec == desc.lattice.basis_vector(name):
                    return True
    return False


@dataclass(frozen=True)
class _Side:
    """Resolved data of one summand of a fibre sum."""

    desc: ManifoldDescriptor
    ref: SurfaceRef
    sigma_index: int
    b_basis_index: int | None  # dual surface tracked as a basis class
    b_witness: Witness | None  # or known only as a witness
    b_square: int
    b_genus: int | None
    removed: frozenset[int]

    @property
    def kept(self) -> list[int]:
        return [i for i in range(self.desc.lattice.rank) if i not in self.removed]


def _resolve_side(desc: ManifoldDescriptor, ref: SurfaceRef, label: str) -> _Side:
    _check_square_zero_indivisible(desc, ref)
    lat = desc.lattice
    i = _unit_basis_index(ref.class_vec)
    if i is None:
        raise ConstructionError(
            f"fibre-sum surface on the {label} side must be a tracked basis class"
        )
    partners = [j for j in range(lat.rank) if j != i and lat.gram[i][j] != 0]
    if len(partners) > 1:
        raise ConstructionError("fibre-sum surface pairs with more than one tracked class")
    if partners:
        j = partners[0]
        if lat.gram[i][j] != 1:
            raise ConstructionError("tracked dual must meet the surface exactly once")
        for k in range(lat.rank):
            if k not in (i, j) and lat.gram[j][k] != 0:
                raise ConstructionError(
                    "tracked dual pairs with classes outside the surface pair"
                )
        b_genus = None
        row_j = lat.pairing_row(lat.basis_vector(lat.basis_names[j]))
        for w in desc.witnesses:
            if w.pairings == row_j and w.genus is not None:
                b_genus = w.genus
                break
        return _Side(desc, ref, i, j, None, lat.gram[j][j], b_genus, frozenset((i, j)))
    for w in desc.witnesses:
        if dot(ref.class_vec, w.pairings) == 1:
            if w.self_intersection is None:
                raise ConstructionError(
                    "dual surface self-intersection unknown; cannot form fibre sum"
                )
            return _Side(desc, ref, i, None, w, w.self_intersection, w.genus, frozenset((i,)))
    raise ConstructionError("no tracked dual surface meets the fibre-sum surface once")


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    k = 2
    while name in taken:
        name = f"{base}.{k}"
        k += 1
    return name


def fibre_sum(
    m: ManifoldDescriptor,
    sm: SurfaceRef,
    n: ManifoldDescriptor,
    sn: SurfaceRef,
    no_rim_tori: bool,
) -> ManifoldDescriptor:
    """Generalized fibre sum of m and n along square-zero surfaces of equal
    genus representing indivisible classes.

    The tracked lattice of the result is the orthogonal complement of each
    surface pair, plus the identified surface Sigma_X and the sewn dual
    B_X with B_X^2 the sum of the two dual squares.  The canonical class
    is K_m + K_n - (2g-2) B_X + 2 Sigma_X under the induced embeddings.
    """
    if sm.genus != sn.genus:
        raise ConstructionError("fibre-sum surfaces must have equal genus")
    g = sm.genus
    side_m = _resolve_side(m, sm, "first")
    side_n = _resolve_side(n, sn, "second")

    m_keep = side_m.kept
    n_keep = side_n.kept
    m_names = [m.lattice.basis_names[i] for i in m_keep]
    sigma_name = m.lattice.basis_names[side_m.sigma_index]
    taken = set(m_names) | {sigma_name}
    b_name = _fresh("B_" + sigma_name, taken)
    taken.add(b_name)

    raw_n_names = [n.lattice.basis_names[i] for i in n_keep]
    prefix = ""
    if any(name in taken for name in raw_n_names):
        k = 1
        while True:
            prefix = f"N{k}."
            if all(prefix + name not in taken for name in raw_n_names):
                break
            k += 1
    n_names = [prefix + name for name in raw_n_names]
    new_names = tuple(m_names + [sigma_name, b_name] + n_names)

    rank = len(new_names)
    sigma_pos = len(m_keep)
    b_pos = sigma_pos + 1
    n_offset = b_pos + 1
    b_square = side_m.b_square + side_n.b_square

    rows: list[tuple[int, ...]] = []
    for i in m_keep:
        gi = m.lattice.gram[i]
        rows.append(tuple(gi[j] for j in m_keep) + (0, 0) + (0,) * len(n_keep))
    rows.append((0,) * sigma_pos + (0, 1) + (0,) * len(n_keep))
    rows.append((0,) * sigma_pos + (1, b_square) + (0,) * len(n_keep))
    for i in n_keep:
        gi = n.lattice.gram[i]
        rows.append((0,) * n_offset + tuple(gi[j] for j in n_keep))
    lattice = IntersectionLattice(
        new_names,
        tuple(rows),
        m.lattice.primitive_summand and n.lattice.primitive_summand,
    )

    def old_coeff(side: _Side, index: int | None) -> int:
        if index is None:
            return 0
        return side.desc.canonical.coefficients[index]

    coeffs = [0] * rank
    for pos, i in enumerate(m_keep):
        coeffs[pos] = m.canonical.coefficients[i]
    for pos, i in enumerate(n_keep):
        coeffs[n_offset + pos] = n.canonical.coefficients[i]
    coeffs[sigma_pos] = (
        m.canonical.coefficients[side_m.sigma_index]
        + n.canonical.coefficients[side_n.sigma_index]
        + 2
    )
    coeffs[b_pos] = (
        old_coeff(side_m, side_m.b_basis_index)
        + old_coeff(side_n, side_n.b_basis_index)
        - (2 * g - 2)
    )
    canonical = ClassVector(tuple(coeffs))

    witnesses: list[Witness] = []
    dropped: list[str] = []
    zero_notes = False

    def embed_witnesses(side: _Side, keep: list[int], offset: int, name_prefix: str) -> None:
        nonlocal zero_notes
        for w in side.desc.witnesses:
            if w is side.b_witness:
                continue
            s = dot(side.ref.class_vec, w.pairings)
            if s != 0:
                dropped.append(name_prefix + w.name)
                continue
            if side.b_basis_index is not None:
                b_pair = w.pairings[side.b_basis_index]
            else:
                b_pair = 0
                zero_notes = True
            pairings = [0] * rank
            for pos, i in enumerate(keep):
                pairings[offset + pos] = w.pairings[i]
            pairings[b_pos] = b_pair
            witnesses.append(
                Witness(name_prefix + w.name, tuple(pairings), w.genus, w.self_intersection)
            )

    embed_witnesses(side_m, m_keep, 0, "")
    embed_witnesses(side_n, n_keep, n_offset, prefix)

    b_pairings = [0] * rank
    for pos, i in enumerate(m_keep):
        if side_m.b_basis_index is not None:
            b_pairings[pos] = m.lattice.gram[side_m.b_basis_index][i]
        else:
            b_pairings[pos] = side_m.b_witness.pairings[i]
    for pos, i in enumerate(n_keep):
        if side_n.b_basis_index is not None:
            b_pairings[n_offset + pos] = n.lattice.gram[side_n.b_basis_index][i]
        else:
            b_pairings[n_offset + pos] = side_n.b_witness.pairings[i]
    b_pairings[sigma_pos] = 1
    b_pairings[b_pos] = b_square
    b_genus = None
    if side_m.b_genus is not None and side_n.b_genus is not None:
        b_genus = side_m.b_genus + side_n.b_genus
    witness_taken = {w.name for w in witnesses}
    witnesses.append(Witness(_fresh(b_name, witness_taken), tuple(b_pairings), b_genus, b_square))

    simply_connected = (
        m.simply_connected and sm.complement_simply_connected and _pi1_collapses(n, sn)
    ) or (
        n.simply_connected and sn.complement_simply_connected and _pi1_collapses(m, sm)
    )
    full = m.carries_full_canonical and n.carries_full_canonical

    notes = []
    if full:
        notes.append(NOTE_FULL_CANONICAL)
    if no_rim_tori:
        notes.append("no-rim-tori-asserted")
    else:
        notes.append("rim-tori-possible:rim classes untracked, they do not enter the canonical class here")
    if dropped:
        notes.append("dropped-witnesses:" + ",".join(dropped))
    if zero_notes:
        notes.append("assumed-disjoint:witness pairings with sewn dual set to zero")

    recipe = ConstructionRecipe(
        "fibre_sum",
        (
            ("genus", g),
            ("class_m", sm.class_vec.coefficients),
            ("sign_m", sm.symplectic_sign),
            ("complement_m", sm.complement_simply_connected),
            ("class_n", sn.class_vec.coefficients),
            ("sign_n", sn.symplectic_sign),
            ("complement_n", sn.complement_simply_connected),
            ("no_rim_tori", no_rim_tori),
        ),
        (m.recipe, n.recipe),
        tuple(notes),
    )
    e = m.e + n.e + 4 * g - 4
    sigma = m.sigma + n.sigma
    return ManifoldDescriptor(
        e=e,
        sigma=sigma,
        spin=_derive_spin(full, lattice.primitive_summand, canonical),
        simply_connected=simply_connected,
        symplectic=m.symplectic and n.symplectic,
        minimal=_derive_minimal(full, lattice.primitive_summand, canonical),
        lattice=lattice,
        canonical=canonical,
        witnesses=tuple(witnesses),
        recipe=recipe,
    )


def _cap_witnesses(
    witnesses: tuple[Witness, ...], torus: ClassVector, h: int
) -> tuple[Witness, ...]:
    # Capping with Seifert surfaces leaves the homology class, and hence
    # the self-intersection, untouched; only the genus grows.  A single
    # positive intersection point gives an exact new genus, anything else
    # leaves the genus unknown.
    out = []
    for w in witnesses:
        t = dot(torus, w.pairings)
        if t == 0 or h == 0:
            out.append(w)
        elif t == 1 and w.genus is not None:
            out.append(replace(w, genus=w.genus + h))
        else:
            out.append(replace(w, genus=None))
    return tuple(out)


def knot_surgery(
    x: ManifoldDescriptor, t: SurfaceRef, h: int, sign: str = "+"
) -> ManifoldDescriptor:
    """Knot surgery along a square-zero torus with a fibred knot of genus h.

    Euler characteristic, signature and the tracked lattice are unchanged;
    the canonical class moves by +- 2h times the torus class.
    """
    if t.genus != 1:
        raise ConstructionError("knot surgery needs a torus")
    if h < 0:
        raise ConstructionError("knot genus must be non-negative")
    if sign not in ("+", "-"):
        raise ConstructionError("sign must be + or -")
    _check_square_zero_indivisible(x, t)
    if x.carries_full_canonical and pairing(x.lattice, x.canonical, t.class_vec) != 0:
        raise ConstructionError("torus violates the adjunction identity")
    shift = t.class_vec.scaled(2 * h if sign == "+" else -2 * h)
    canonical = x.canonical + shift
    witnesses = _cap_witnesses(x.witnesses, t.class_vec, h)
    simply_connected = x.simply_connected and t.complement_simply_connected
    notes = []
    if x.carries_full_canonical:
        notes.append(NOTE_FULL_CANONICAL)
    notes.append(f"fibred-knot-genus:{h}")
    recipe = ConstructionRecipe(
        "knot_surgery",
        (
            ("torus", t.class_vec.coefficients),
            ("h", h),
            ("sign", sign),
            ("complement", t.complement_simply_connected),
        ),
        (x.recipe,),
        tuple(notes),
    )
    return ManifoldDescriptor(
        e=x.e,
        sigma=x.sigma,
        spin=x.spin,
        simply_connected=simply_connected,
        symplectic=x.symplectic,
        minimal=_derive_minimal(
            x.carries_full_canonical, x.lattice.primitive_summand, canonical
        ),
        lattice=x.lattice,
        canonical=canonical,
        witnesses=witnesses,
        recipe=recipe,
    )


def generalized_knot_surgery(
    m: ManifoldDescriptor, s: SurfaceRef, h: int
) -> ManifoldDescriptor:
    """Fibre sum with the bundle Y_{g,h} along its section: raises the
    Euler characteristic by 4h(g-1), keeps the signature, adds the
    2h(g-1) split-class blocks and moves the canonical class by 2h Sigma."""
    g = s.genus
    if g <= 1:
        raise ConstructionError("use knot_surgery")
    if h < 1:
        raise ConstructionError("knot genus must be positive")
    _check_square_zero_indivisible(m, s)
    if not (m.simply_connected and s.complement_simply_connected):
        raise ConstructionError(
            "generalized knot surgery requires a simply-connected complement"
        )
    if m.carries_full_canonical:
        if pairing(m.lattice, m.canonical, s.class_vec) != 2 * g - 2:
            raise ConstructionError("surface violates the adjunction identity")

    blocks = 2 * h * (g - 1)
    old_rank = m.lattice.rank
    taken = set(m.lattice.basis_names)
    new_names = list(m.lattice.basis_names)
    j = 1
    for _ in range(blocks):
        while f"V_{j}" in taken or f"W_{j}" in taken:
            j += 1
        new_names.extend([f"V_{j}", f"W_{j}"])
        taken.update((f"V_{j}", f"W_{j}"))
        j += 1
    rank = old_rank + 2 * blocks
    tail = _zeros(2 * blocks)
    rows = [row + tail for row in m.lattice.gram]
    for b in range(blocks):
        off = old_rank + 2 * b
        rows.append(_zeros(off) + (2, 1) + _zeros(rank - off - 2))
        rows.append(_zeros(off) + (1, 0) + _zeros(rank - off - 2))
    lattice = _trusted_lattice(tuple(new_names), tuple(rows), m.lattice.primitive_summand)

    ext = ClassVector(m.canonical.coefficients + tail)
    sigma_ext = ClassVector(s.class_vec.coefficients + tail)
    canonical = ext + sigma_ext.scaled(2 * h)

    witnesses: list[Witness] = []
    dropped = []
    for w in m.witnesses:
        if dot(s.class_vec, w.pairings) != 0:
            dropped.append(w.name)
            continue
        witnesses.append(replace(w, pairings=w.pairings + tail))
    sigma_row = m.lattice.pairing_row(s.class_vec) + tail
    witnesses.append(Witness(_fresh("Sigma", {w.name for w in witnesses}), sigma_row, g, 0))

    notes = []
    if m.carries_full_canonical:
        notes.append(NOTE_FULL_CANONICAL)
    if dropped:
        notes.append("dropped-witnesses:" + ",".join(dropped))
    recipe = ConstructionRecipe(
        "generalized_knot_surgery",
        (
            ("surface", s.class_vec.coefficients),
            ("genus", g),
            ("h", h),
            ("complement", s.complement_simply_connected),
        ),
        (m.recipe,),
        tuple(notes),
    )
    return ManifoldDescriptor(
        e=m.e + 4 * h * (g - 1),
        sigma=m.sigma,
        spin=m.spin,
        simply_connected=True,
        symplectic=m.symplectic,
        minimal=_derive_minimal(
            m.carries_full_canonical, lattice.primitive_summand, canonical
        ),
        lattice=lattice,
        canonical=canonical,
        witnesses=tuple(witnesses),
        recipe=recipe,
    )


def log_transform(x: ManifoldDescriptor, p: int) -> ManifoldDescriptor:
    """Logarithmic transform of multiplicity p on an unsurgered E(n)."""
    if p < 1:
        raise ConstructionError("log transform multiplicity must be positive")
    r = x.recipe
    if r.operation != "elliptic_surface" or r.param("p") != 1 or r.param("q") != 1:
        raise ConstructionError("log transform requires an unsurgered elliptic surface")
    n = r.param("n")
    out = elliptic_surface(n, p, 1)
    recipe = ConstructionRecipe(
        "log_transform",
        (("p", p),),
        (x.recipe,),
        out.recipe.notes + (f"multiple-fibre:{p}",),
    )
    return replace(out, recipe=recipe)


def blow_up(m: ManifoldDescriptor) -> ManifoldDescriptor:
    """Connected sum with a reversed projective plane: adds an exceptional
    class E of square -1 to the lattice and to the canonical class."""
    taken = set(m.lattice.basis_names)
    k = 1
    while f"E_{k}" in taken:
        k += 1
    name = f"E_{k}"
    rank = m.lattice.rank + 1
    rows = [tuple(row) + (0,) for row in m.lattice.gram]
    rows.append((0,) * (rank - 1) + (-1,))
    lattice = IntersectionLattice(
        m.lattice.basis_names + (name,), tuple(rows), m.lattice.primitive_summand
    )
    canonical = ClassVector(m.canonical.coefficients + (1,))
    witnesses = [replace(w, pairings=w.pairings + (0,)) for w in m.witnesses]
    exceptional = [0] * rank
    exceptional[-1] = -1
    witnesses.append(Witness(f"exceptional_{name}", tuple(exceptional), 0, -1))
    notes = []
    if m.carries_full_canonical:
        notes.append(NOTE_FULL_CANONICAL)
    recipe = ConstructionRecipe("blow_up", (), (m.recipe,), tuple(notes))
    return ManifoldDescriptor(
        e=m.e + 1,
        sigma=m.sigma - 1,
        spin=False,
        simply_connected=m.simply_connected,
        symplectic=m.symplectic,
        minimal="no",
        lattice=lattice,
        canonical=canonical,
        witnesses=tuple(witnesses),
        recipe=recipe,
    )


def lagrangian_triple_surgery(
    m: ManifoldDescriptor,
    triple_index: int,
    a: int,
    em: int,
    h1: int,
    h2: int,
    sign: str = "+",
) -> ManifoldDescriptor:
    """Composite surgery on a declared rim-torus triple (T_1, T_2, R) with
    R homologous to a T_1 + T_2: fibre sum with E(em) along R, knot
    surgery of genus h1 (signed) on T_1 and of genus h2 on T_2.

    The canonical class becomes K + (am +- 2 h1) T_1 + (m + 2 h2) T_2 with
    m = em, detected by the dual surfaces C_1 and C_2 installed here.
    """
    if a < 1 or em < 1 or h1 < 0 or h2 < 0:
        raise ConstructionError("triple surgery parameters out of range")
    if sign not in ("+", "-"):
        raise ConstructionError("sign must be + or -")
    t1, d1, r, dr = triple_names(triple_index)
    for name in (t1, d1, r, dr):
        if name not in m.lattice.basis_names:
            raise ConstructionError(f"undeclared triple {triple_index}")
    lat0 = m.lattice
    tori = (lat0.basis_vector(t1), lat0.basis_vector(r))
    if any(pairing(lat0, u, v) != 0 for u in tori for v in tori):
        raise ConstructionError(f"triple {triple_index} classes are not isotropic")
    if (
        pairing(lat0, tori[0], lat0.basis_vector(d1)) != 1
        or pairing(lat0, tori[1], lat0.basis_vector(dr)) != 1
    ):
        raise ConstructionError(f"triple {triple_index} lacks its dual spheres")

    base = elliptic_surface(em, 1, 1)
    r_ref = SurfaceRef(
        m.lattice.basis_vector(r), 1, 0, "+", complement_simply_connected=True
    )
    f_ref = SurfaceRef(
        base.lattice.basis_vector("f"), 1, 0, "+", complement_simply_connected=True
    )
    summed = fibre_sum(m, r_ref, base, f_ref, no_rim_tori=False)

    t1_ref = SurfaceRef(
        summed.lattice.basis_vector(t1), 1, 0, sign, complement_simply_connected=True
    )
    step2 = knot_surgery(summed, t1_ref, h1, sign)

    # The second triple torus is only determined after the sum: R_0 - a T_1.
    t2_class = step2.lattice.basis_vector(r) - step2.lattice.basis_vector(t1).scaled(a)
    t2_ref = SurfaceRef(t2_class, 1, 0, "+", complement_simply_connected=True)
    step3 = knot_surgery(step2, t2_ref, h2, "+")

    b_name = "B_" + r
    lat = step3.lattice
    c1_pairings = tuple(
        x + a * y
        for x, y in zip(
            lat.pairing_row(lat.basis_vector(d1)), lat.pairing_row(lat.basis_vector(b_name))
        )
    )
    witnesses = []
    for w in step3.witnesses:
        if w.name == b_name:
            witnesses.append(replace(w, name=f"C2_t{triple_index}"))
        else:
            witnesses.append(w)
    witness_names = {w.name for w in witnesses}
    witnesses.append(Witness(_fresh(f"C1_t{triple_index}", witness_names), c1_pairings))

    notes = []
    if step3.carries_full_canonical:
        notes.append(NOTE_FULL_CANONICAL)
    notes.append(f"triple:{triple_index}")
    notes.append("rim-tori-possible:rim classes untracked, they do not enter the canonical class here")
    recipe = ConstructionRecipe(
        "lagrangian_triple_surgery",
        (
            ("triple_index", triple_index),
            ("a", a),
            ("em", em),
            ("h1", h1),
            ("h2", h2),
            ("sign", sign),
        ),
        (m.recipe,),
        tuple(notes),
    )
    return replace(step3, witnesses=tuple(witnesses), recipe=recipe)

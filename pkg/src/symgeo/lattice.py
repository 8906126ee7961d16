"""Exact integer bilinear-form arithmetic.

An :class:`IntersectionLattice` is the tracked fragment of the second
cohomology of a 4-manifold: a list of named basis classes together with
the integer Gram matrix of their intersection pairing.  Class vectors and
witness surfaces are integer vectors over that basis.  All arithmetic is
done with Python integers, so values are exact at any size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import LatticeError

# Subset enumeration in q_set is exponential; inputs beyond this are a bug.
_MAX_DIVISOR_LIST = 20


@dataclass(frozen=True)
class ClassVector:
    """Integer coefficient vector over a lattice's basis."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __add__(self, other: "ClassVector") -> "ClassVector":
        if len(other) != len(self):
            raise LatticeError("basis mismatch")
        return ClassVector(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        if len(other) != len(self):
            raise LatticeError("basis mismatch")
        return ClassVector(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "ClassVector":
        return ClassVector(tuple(-a for a in self.coefficients))

    def scaled(self, k: int) -> "ClassVector":
        return ClassVector(tuple(k * a for a in self.coefficients))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def nonzero_items(self) -> list[tuple[int, int]]:
        return [(i, c) for i, c in enumerate(self.coefficients) if c]


@dataclass(frozen=True)
class Witness:
    """A named surface known only through its pairings with the basis.

    ``pairings[i]`` is the intersection number of the witness with the
    i-th basis class.  ``genus`` and ``self_intersection`` are declared
    only when a concrete embedded representative of that type is known;
    the adjunction validator skips witnesses with either field missing.
    """

    name: str
    pairings: tuple[int, ...]
    genus: int | None = None
    self_intersection: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "pairings", tuple(int(p) for p in self.pairings))
        if self.genus is not None and self.genus < 0:
            raise LatticeError("witness genus must be non-negative")


@dataclass(frozen=True)
class IntersectionLattice:
    """Named basis classes with a symmetric integer Gram matrix.

    ``primitive_summand`` asserts that the basis spans a primitive direct
    summand of the ambient unimodular second cohomology; it is what makes
    the coefficient gcd of a class vector a valid divisibility bound.
    """

    basis_names: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    primitive_summand: bool = True

    def __post_init__(self):
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        object.__setattr__(self, "gram", tuple(map(tuple, self.gram)))
        n = len(self.basis_names)
        if len(set(self.basis_names)) != n:
            raise LatticeError("basis names must be pairwise distinct")
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise LatticeError("gram matrix must be square with side equal to basis size")
        # Transpose comparison runs at C speed; ranks reach a few thousand.
        if self.gram != tuple(zip(*self.gram)):
            raise LatticeError("gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    def index_of(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise LatticeError(f"basis mismatch: no class named {name!r}") from None

    def basis_vector(self, name: str) -> ClassVector:
        i = self.index_of(name)
        return ClassVector(tuple(1 if j == i else 0 for j in range(self.rank)))

    def vector(self, coefficients: dict[str, int]) -> ClassVector:
        """Build a class vector from a sparse {name: coefficient} mapping."""
        out = [0] * self.rank
        for name, c in coefficients.items():
            out[self.index_of(name)] = int(c)
        return ClassVector(tuple(out))

    def pairing_row(self, v: ClassVector) -> tuple[int, ...]:
        """The vector of pairings of ``v`` against every basis class."""
        if len(v) != self.rank:
            raise LatticeError("basis mismatch")
        row = [0] * self.rank
        for i, c in v.nonzero_items():
            gi = self.gram[i]
            for j in range(self.rank):
                if gi[j]:
                    row[j] += c * gi[j]
        return tuple(row)


def pairing(lat: IntersectionLattice, v: ClassVector, w: ClassVector) -> int:
    """Evaluate the intersection pairing of two class vectors."""
    if len(v) != lat.rank or len(w) != lat.rank:
        raise LatticeError("basis mismatch")
    total = 0
    w_items = w.nonzero_items()
    for i, a in v.nonzero_items():
        gi = lat.gram[i]
        for j, b in w_items:
            if gi[j]:
                total += a * gi[j] * b
    return total


def dot(v: ClassVector, pairings: tuple[int, ...]) -> int:
    """Pair a class vector with a precomputed pairing row (e.g. a witness)."""
    if len(v) != len(pairings):
        raise LatticeError("basis mismatch")
    return sum(a * pairings[i] for i, a in v.nonzero_items())


def _zeros(n: int) -> tuple[int, ...]:
    return (0,) * n


def _trusted_lattice(
    basis_names: tuple[str, ...],
    gram: tuple[tuple[int, ...], ...],
    primitive_summand: bool,
) -> IntersectionLattice:
    """Construct without validation.  Only for internal block assemblies
    whose symmetry is structural; grams there can reach rank a few
    thousand, where the transpose check dominates construction."""
    lat = object.__new__(IntersectionLattice)
    object.__setattr__(lat, "basis_names", basis_names)
    object.__setattr__(lat, "gram", gram)
    object.__setattr__(lat, "primitive_summand", primitive_summand)
    return lat


def block_diagonal(blocks: Iterable[tuple[tuple[int, ...], ...]]) -> tuple[tuple[int, ...], ...]:
    """Assemble a block-diagonal Gram matrix from square integer blocks."""
    blocks = list(blocks)
    total = sum(len(b) for b in blocks)
    rows: list[tuple[int, ...]] = []
    offset = 0
    for b in blocks:
        size = len(b)
        left = _zeros(offset)
        right = _zeros(total - offset - size)
        for row in b:
            rows.append(left + tuple(row) + right)
        offset += size
    return tuple(rows)


def direct_sum(
    a: IntersectionLattice,
    b: IntersectionLattice,
    rename: tuple[str, str] = ("", ""),
) -> IntersectionLattice:
    """Orthogonal direct sum of two lattices.

    ``rename`` gives a name prefix for each side; the combined basis must
    be collision free.
    """
    pa, pb = rename
    names = tuple(pa + n for n in a.basis_names) + tuple(pb + n for n in b.basis_names)
    if len(set(names)) != len(names):
        raise LatticeError("basis name collision in direct sum")
    gram = block_diagonal([a.gram, b.gram])
    return IntersectionLattice(names, gram, a.primitive_summand and b.primitive_summand)


def coefficient_gcd(v: ClassVector) -> int:
    """Gcd of the absolute coefficients; zero exactly for the zero vector."""
    g = 0
    for c in v.coefficients:
        g = gcd(g, abs(c))
    return g


def _validate_divisor_list(d: int, divisors: list[int]) -> None:
    if d < 1:
        raise LatticeError("invalid divisor list: d must be positive")
    if not divisors or divisors[0] != d:
        raise LatticeError("invalid divisor list: first entry must equal d")
    if len(divisors) - 1 > _MAX_DIVISOR_LIST:
        raise LatticeError("invalid divisor list: too many divisors")
    for di in divisors:
        if di < 1 or d % di != 0:
            raise LatticeError("invalid divisor list: entries must be positive divisors of d")
        if d % 2 == 0 and di % 2 != 0:
            raise LatticeError("invalid divisor list: even d requires even divisors")


def q_set(d: int, divisors: list[int] | tuple[int, ...]) -> frozenset[int]:
    """Set of subset gcds of a divisor list, with the doubling rule for 4 | d.

    For ``d`` odd or congruent to 2 mod 4 this is the set of gcds of all
    non-empty subsets of the list.  When 4 divides ``d``, entries not
    divisible by 4 are doubled before the subsets are formed.
    """
    divisors = list(divisors)
    _validate_divisor_list(d, divisors)
    if d % 4 == 0:
        entries = [di if di % 4 == 0 else 2 * di for di in divisors]
    else:
        entries = divisors
    out = set()
    for r in range(1, len(entries) + 1):
        for subset in itertools.combinations(entries, r):
            g = 0
            for x in subset:
                g = gcd(g, x)
            out.add(g)
    return frozenset(out)


def odd_part(n: int) -> int:
    n = abs(n)
    while n and n % 2 == 0:
        n //= 2
    return n


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g

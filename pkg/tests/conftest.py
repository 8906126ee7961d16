import random

from symgeo.errors import ConstructionError
from symgeo.manifolds import elliptic_surface
from symgeo.surgery import SurfaceRef, blow_up, fibre_sum, knot_surgery, log_transform


def random_descriptor(rng: random.Random):
    """Small random construction tree over the registered operations."""
    n = rng.randint(1, 4)
    base = elliptic_surface(n, 1, 1)
    for _ in range(rng.randint(0, 3)):
        move = rng.choice(["knot", "blow", "log", "sum", "rim"])
        if move == "knot":
            ref = SurfaceRef(base.lattice.basis_vector("f"), 1, 0, "+", True)
            base = knot_surgery(base, ref, rng.randint(0, 4), rng.choice("+-"))
        elif move == "blow":
            base = blow_up(base)
        elif move == "log" and base.recipe.operation == "elliptic_surface":
            base = log_transform(base, rng.randint(1, 4))
        elif move == "sum" and "f" in base.lattice.basis_names:
            other = elliptic_surface(rng.randint(1, 2), 1, 1)
            try:
                base = fibre_sum(
                    base,
                    SurfaceRef(base.lattice.basis_vector("f"), 1, 0, "+", True),
                    other,
                    SurfaceRef(other.lattice.basis_vector("f"), 1, 0, "+", True),
                    no_rim_tori=True,
                )
            except ConstructionError:
                # After a log transform the fibre dual has unknown square
                # and the sum is rightly rejected; skip the move.
                continue
        elif move == "rim" and "DR_1" in base.lattice.basis_names:
            ref = SurfaceRef(base.lattice.basis_vector("R_1"), 1, 0, "+", True)
            base = knot_surgery(base, ref, rng.randint(1, 3), "+")
    return base

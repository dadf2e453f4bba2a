# ## Invariants of a rank-4 hyperbolic lattice

# A lattice is given by its Gram matrix.  Everything below is exact integer
# or rational arithmetic.

from vinberg_lab.lattice import (
    QuadraticLattice,
    all_overlattices,
    discriminant,
    invariant_factors,
    is_isomorphic,
    maximal_overlattices,
    rational_diagonalize,
    signature,
)
from vinberg_lab.local import hilbert_symbol, local_anisotropy, is_anisotropic_global

g = QuadraticLattice(
    ((1, 0, -1, -1), (0, 2, -1, -1), (-1, -1, 2, -4), (-1, -1, -4, 2)), name="frame"
)
print(g)
print("discriminant", discriminant(g), "invariant factors", invariant_factors(g))
print("signature", tuple(signature(g)), "rational diagonal form", rational_diagonalize(g))

# ### Overlattices

# The discriminant -60 has the square factor 4, so there is room for an
# index-2 overlattice.  Every integral overlattice is found by gluing
# prime-order elements of the discriminant group.

for o in all_overlattices(g):
    print(o.index, discriminant(o.lattice), invariant_factors(o.lattice))

(m,) = maximal_overlattices(g)
print("maximal:", m.gram)
print("same as [-15]+[1]+[1]+[1]:", is_isomorphic(m, QuadraticLattice.diagonal(-15, 1, 1, 1)))
print("an index-k extension of discriminant -7 needs 7 k^2 = 60:", any(7 * k * k == 60 for k in range(1, 8)))

# ### Anisotropy

# A rank-4 form is isotropic at every prime not dividing 2d, so only 2, the
# primes of d and the real place can make it anisotropic.

for d in [(-15, 1, 1, 1), (-1, 1, 1, 1), (-1, 3, 3, 2), (-1, 3, 2, 2)]:
    lat = QuadraticLattice.diagonal(*d)
    print(d, local_anisotropy(lat), "anisotropic" if is_anisotropic_global(lat) else "isotropic")

# Hilbert symbols behind those verdicts

print([hilbert_symbol(-15, 1, p) for p in (2, 3, 5)], hilbert_symbol(-1, -1, 2))

# ## Vinberg's algorithm on [-3]+[5]+[1]+[1]

from vinberg_lab.coxeter import (
    bad_reflections_finite,
    build_diagram,
    diagram_criterion,
    emit_dot,
    finite_volume_check,
    polyhedron_combinatorics,
)
from vinberg_lab.lattice import QuadraticLattice
from vinberg_lab.vinberg import VinbergConfig, admissible_root_norms, next_root, start

lat = QuadraticLattice.diagonal(-3, 5, 1, 1)
print("root norms divide 2 * 15:", sorted(admissible_root_norms(lat)))

# ### The fundamental cone at v0 = (1, 0, 0, 0)

config = VinbergConfig.for_lattice(lat, basic_point=(1, 0, 0, 0))
state = start(lat, config)
for r in state.roots:
    print(r.coords, "norm", r.norm)

# ### Adding roots in order of (a, v0)^2 / (a, a)

# After every root the cone's extreme rays are recomputed incrementally; the
# run stops as soon as all of them lie in the closed future light cone.

while next_root(state, config) is not None:
    print(state.roots[-1].coords, "norm", state.roots[-1].norm, "priority", state.priorities[-1])
    if state._tracker.finite_volume():
        break

print(finite_volume_check(state.roots, state.basic_point))
print("diagram criterion:", diagram_criterion(state.roots))

# ### The polyhedron

comb = polyhedron_combinatorics(state.roots, state.basic_point)
print(len(comb.vertices), "vertices,", len(comb.edges), "edges")
for v in comb.vertices:
    print([i + 1 for i in v.facets], v.vector, "ideal" if v.ideal else "")

# ### Reflections in roots of norm other than 1 and 2

print("they generate a finite group:", bad_reflections_finite(state.roots))

print(emit_dot(build_diagram(state.roots), "L5"))

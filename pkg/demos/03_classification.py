# ## From outermost-edge frames to a classification

import collections

from vinberg_lab.analysis import Budget, classify_table
from vinberg_lab.enumeration import CASE_TREE, candidate_table, frames, frames_to_candidates

print(len(CASE_TREE), "case-tree leaves,", len(frames()), "frames")

# ### Frames that survive the signature and anisotropy filters

candidates = frames_to_candidates()
print(len(candidates), "hyperbolic anisotropic frames")
print(collections.Counter(c.frame.label.split(".")[0] for c in candidates))

# ### Their maximal overlattices, up to isomorphism

rows = candidate_table(candidates)
for r in rows:
    print(f"{r.name:6} d={r.discriminant:5} {r.invariant_factors}  from {', '.join(r.sources[:3])}")

# ### Reflectivity of each class

reports = classify_table(rows, Budget())
for rep in reports:
    runs = ", ".join(f"{len(x['roots'])} roots/{x['status']}" for x in rep["runs"])
    print(f"{rep['name']:6} {rep['status']:24} {runs}")
    for note in rep["notes"]:
        print("       ", note)

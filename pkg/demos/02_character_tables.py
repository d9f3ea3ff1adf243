"""Dirichlet character groups as dense tables.

The group mod q is assembled from cyclic factors of (Z/q)^*, one per odd
prime power plus the {-1, 5} pair at powers of two.  Every character is a
row of roots of unity; the principal character is row 0 and each row knows
its conductor (the modulus of the primitive character inducing it).
"""

import numpy as np

from bdhvar import character_group

q = 12
G = character_group(q)
print(f"q = {q}: phi = {G.phi}, cyclic factor orders = {G.orders.tolist()}")
M = G.value_table()
np.set_printoptions(precision=3, suppress=True, linewidth=100)
for chi, row in zip(G.characters, M):
    print(f"  chi_{chi.index} (conductor {chi.conductor:2d}): {np.round(row.real, 3).tolist()}")

# Parseval-grade orthogonality: rows form an orthogonal basis of the
# functions on the unit group
gram = M @ M.conj().T
residual = np.max(np.abs(gram - G.phi * np.eye(G.phi)))
print(f"row-orthogonality residual: {residual:.2e}")

# conductor census over a few moduli
for q in (8, 45, 100):
    G = character_group(q)
    counts = {}
    for chi in G.characters:
        counts[chi.conductor] = counts.get(chi.conductor, 0) + 1
    prim = int(G.primitive_mask().sum())
    print(f"q = {q:3d}: conductors {dict(sorted(counts.items()))}, "
          f"{prim} primitive")

"""
The transpose is not completely contractive
===========================================

On ``M_2`` the transpose is an isometry, but at matrix level 2 it doubles
the norm of the block matrix of matrix units.
"""

import numpy as np

from adjunctions.opspace import CbLinearMap, ConcreteOpSpace, cb_norm_lower, level_norm

M2 = ConcreteOpSpace.matrices(2)
T = CbLinearMap.from_images(M2, M2, [e.T for e in M2.basis])

res = cb_norm_lower(T, max_level=3, restarts=16)
for n, (v, w) in enumerate(zip(res.levels, res.witnesses), 1):
    print(f"level {n}: ||T_n|| >= {v:.12f}  (witness norm {level_norm(M2, w):.3f})")
print("level 2 is already the cb norm:", res.is_cb_norm)

# the witness by hand: [[E11, E21], [E12, E22]]
w = np.zeros((2, 2, 4))
w[0, 0, 0] = w[0, 1, 2] = w[1, 0, 1] = w[1, 1, 3] = 1
print("hand-built witness:", level_norm(M2, w), "->", level_norm(M2, T.apply(w)))

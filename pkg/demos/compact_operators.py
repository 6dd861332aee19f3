"""
Compact operators as a Haagerup tensor product
==============================================

For a Hilbert module ``E`` the map ``e (x) f* -> e <f, .>`` identifies
``E (x)_h E*`` with the compact operators. Over the scalars the two norms
meet exactly; over bigger coefficient algebras the plain Haagerup bound
sits above, since balancing over ``B`` can only lower it.
"""

import numpy as np

from adjunctions.correspondence import Correspondence, FinCStar, random_correspondence, verify_cstar_frobenius
from adjunctions.opspace import haagerup_norm_upper, level_norm

rng = np.random.default_rng(3)
E = Correspondence(FinCStar((1,)), (3,))
X, K = E.operator_space(), E.compacts_space()

for n in (1, 2, 3):
    x = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
    u = np.einsum("ia,jb->ijab", x, x.conj())
    upper = haagerup_norm_upper(u, X, X.adjoint())
    kappa = np.array([[E.compacts_coordinates(E.rank_one(x[i], x[j])) for j in range(n)] for i in range(n)])
    print(f"level {n}: Haagerup upper bound {upper:.12f}, |kappa(u)| {level_norm(K, kappa):.12f}")

# Frobenius reciprocity for a random correspondence
corr = random_correspondence(rng)
print(corr)
samples = [(corr.A.random(rng), corr.random_element(rng)) for _ in range(200)]
rep = verify_cstar_frobenius(corr, samples)
print(f"both chains on 200 samples: ok={rep.ok}, max residual {rep.max_residual:.1e}")

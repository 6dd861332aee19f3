"""
The norm of tau on a growing grid
=================================

In the grid model ``tau = tanh`` and elements of ``B`` sit inside 2x2
matrices ``[[b, 0], [delta(b), w(b)]]``. For ``b = tau`` this is
``[[t, 0], [1, -t]]``, whose norm tends to the golden ratio as ``t -> 1``.
"""

import numpy as np

from adjunctions.sl2 import Sl2EvenModel, embed_norm_bound

golden = (1 + np.sqrt(5)) / 2

print(f"{'extent':>8} {'max tau':>12} {'|embed(tau)|':>14} {'gap':>10}")
for extent in (0.5, 1, 2, 4, 8, 12):
    m = Sl2EvenModel(256, extent, 1)
    tau = m.ring.tau_element
    norm = m.b_norm(tau)
    print(f"{extent:8g} {m.tau.values.real.max():12.9f} {norm:14.10f} {golden - norm:10.2e}")

# the closed form agrees with the sampled 2x2 norms
print("closed form at t = tanh(8):", embed_norm_bound(np.tanh(8.0)))

# delta is a twisted derivation: delta(b1 b2) = delta(b1) b2 + w(b1) delta(b2)
rng = np.random.default_rng(0)
m = Sl2EvenModel()
b1, b2 = m.random_b(rng), m.random_b(rng)
lhs = m.delta_pointwise(b1 * b2)
rhs = m.delta_pointwise(b1) * b2.value + b1.value.reflect() * m.delta_pointwise(b2)
print("Leibniz defect:", lhs.distance(rhs))

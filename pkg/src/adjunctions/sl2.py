"""Even-part models for SL(2, R) on a symmetric grid.

After Morita reduction the even principal series is described by

* ``A`` -- even scalar functions (the even part of ``C_0(R)``),
* ``B`` -- functions ``a0 + a1 * tau`` with ``a0, a1`` even and ``tau = 1/c``,
* ``E = C_0(R, H)`` -- vector-valued functions, ``H`` truncated to the weight
  vectors ``-2d, ..., 0, ..., 2d``,
* the group algebra part -- reflection-invariant ``K(H)``-valued functions.

Here ``c`` is an odd function with ``c(x) ~ 1/x`` at 0 and ``c -> 1`` at
``+inf``. Everything is sampled on a :class:`~adjunctions.coeff.Grid` that
avoids 0, and elements of ``B`` are always built from their coordinates.
"""

from dataclasses import dataclass

import numpy as np

from .coeff import Grid, GridFunction
from .quadext import QuadExtRing, check_triangles

__all__ = ["CFunction", "C_FUNCTIONS", "Sl2EvenModel", "embed_norm_bound"]


@dataclass(frozen=True)
class CFunction:
    """Odd ``c`` with a bounded reciprocal ``tau = 1/c``."""

    name: str
    c: object
    tau: object


C_FUNCTIONS = {
    "coth": CFunction("coth", lambda x: 1.0 / np.tanh(x), np.tanh),
    "algebraic": CFunction(
        "algebraic",
        lambda x: np.sqrt(1.0 + x * x) / x,
        lambda x: x / np.sqrt(1.0 + x * x),
    ),
}


def embed_norm_bound(t):
    """Largest singular value of ``[[t, 0], [1, -t]]`` for real ``t`` (closed form)."""
    t2 = np.asarray(t, dtype=float) ** 2
    return np.sqrt((2 * t2 + 1 + np.sqrt(4 * t2 + 1)) / 2)


class Sl2EvenModel:
    """The scalar even-part model on ``m`` positive grid points up to ``extent``.

    :param d: ``H`` has dimension ``2d + 1``, weights ``-2d, ..., 2d``
    :param cfunc: key of :data:`C_FUNCTIONS` or a :class:`CFunction`
    """

    def __init__(self, m=256, extent=8.0, d=2, cfunc="coth"):
        self.grid = Grid.uniform(m, extent)
        self.cfunc = C_FUNCTIONS[cfunc] if isinstance(cfunc, str) else cfunc
        self.d = d
        self.weights = np.arange(-2 * d, 2 * d + 1, 2)
        self.c = self.grid.evaluate(self.cfunc.c)
        self.tau = self.grid.evaluate(self.cfunc.tau)
        self.ring = QuadExtRing(self.tau)

    def __repr__(self):
        return f"Sl2EvenModel({self.grid!r}, d={self.d}, c={self.cfunc.name})"

    @property
    def h_dim(self):
        return self.weights.size

    # random elements

    def random_even(self, rng):
        m = self.grid.points.size
        return self.grid.even(rng.standard_normal(m) + 1j * rng.standard_normal(m))

    def random_b(self, rng):
        return self.ring.element(self.random_even(rng), self.random_even(rng))

    def random_e(self, rng, support=None):
        """Random ``H``-valued function; ``support="positive"`` zeroes ``x < 0``."""
        shape = (self.grid.size, self.h_dim)
        v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        if support == "positive":
            v[self.grid.full < 0] = 0
        return GridFunction(self.grid, v)

    def random_scalar(self, rng):
        n = self.grid.size
        return GridFunction(self.grid, rng.standard_normal(n) + 1j * rng.standard_normal(n))

    def random_g(self, rng):
        """Random reflection-invariant ``K(H)``-valued function."""
        m, D = self.grid.points.size, self.h_dim
        half = rng.standard_normal((m, D, D)) + 1j * rng.standard_normal((m, D, D))
        return self.grid.even(half)

    # actions and inner products

    def act_left(self, g, f):
        """Group-algebra element acting pointwise on ``E``."""
        return g * f

    def act_right(self, f, a):
        """Scalar function acting pointwise on ``E`` from the right."""
        return f * a

    def g_valued_inner(self, f1, f2):
        """``1/2 f1 f2* + 1/2 w(f1) w(f2)*`` pointwise, a ``K(H)``-valued even function."""
        v1, v2 = f1.values, f2.values
        outer = np.einsum("xi,xj->xij", v1, v2.conj())
        return GridFunction(self.grid, 0.5 * outer + 0.5 * outer[::-1])

    def a_valued_inner(self, f1, f2):
        """``1/2 f1* f2 + 1/2 w(f1* f2)`` for scalar functions."""
        p = f1.conj() * f2
        return (p + p.reflect()) * 0.5

    # the twisted derivation and the 2x2 picture of B

    def delta_op(self, b):
        """``delta(b) = c * b-``, read off as the ``tau``-coordinate of ``b``."""
        return b.a1

    def delta_pointwise(self, b):
        """``c * b-`` evaluated from the sampled values of ``b``."""
        _, odd = b.value.parity_split()
        return self.c * odd

    def embed_2x2(self, b):
        """``[[b, 0], [delta(b), w(b)]]`` at every grid point."""
        v = b.value.values
        out = np.zeros((self.grid.size, 2, 2), dtype=complex)
        out[:, 0, 0] = v
        out[:, 1, 0] = self.delta_op(b).values
        out[:, 1, 1] = v[::-1]
        return GridFunction(self.grid, out)

    def b_norm(self, b):
        """Operator-algebra norm of ``b``: sup of the pointwise 2x2 norms."""
        return self.embed_2x2(b).sup_norm()

    # adjunctions

    def run_bernstein_opalg(self, samples=500, seed=0, tol=1e-12):
        """Triangle checks for both adjunctions on random ``B``-elements.

        Returns ``(bernstein_report, frobenius_report)``. Samples are
        ``(module element, acting element)`` pairs; for Frobenius the acting
        element is the even part, so it lies in ``A``.
        """
        if isinstance(samples, int):
            rng = np.random.default_rng(seed)
            samples = [(self.random_b(rng), self.random_b(rng)) for _ in range(samples)]
        bern = check_triangles("bernstein", samples, tol=tol)
        frob = check_triangles("frobenius", [(m, b.parity_split()[0]) for m, b in samples], tol=tol)
        return bern, frob

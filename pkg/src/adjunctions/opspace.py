"""Finite-dimensional concrete operator spaces.

A :class:`ConcreteOpSpace` is the span of a list of ``h x k`` complex matrices
inside ``B(C^k, C^h)``. An element of ``M_{p,r}(X)`` is stored as an array of
coefficients of shape ``(p, r, dim)``; its norm is the largest singular value
of the assembled ``(p h) x (r k)`` block matrix.

Norms of maps between such spaces and Haagerup-tensor norms are nonconvex
optimization problems. :func:`cb_norm_lower` returns certified lower bounds
(every reported value comes with a witness that reproduces it) and
:func:`haagerup_norm_upper` returns certified upper bounds (every value comes
with an explicit factorization).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

__all__ = [
    "ConcreteOpSpace",
    "CbLinearMap",
    "CbNormResult",
    "HaagerupResult",
    "level_norm",
    "cb_norm_lower",
    "haagerup_norm_upper",
    "haagerup_factorization",
    "tensor_from_terms",
]


def _spectral_norm(a):
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, ord=2))


class ConcreteOpSpace:
    """Span of ``basis[l]`` (each ``h x k``) with the matrix norms of ``B(C^k, C^h)``.

    :param basis: array-like of shape ``(dim, h, k)``; must be linearly independent
    :param kind: ``"plain"``, ``"column"``, ``"matrix"`` or ``"adjoint"``
    """

    def __init__(self, basis, kind="plain", source=None):
        b = np.array(basis, dtype=complex)
        if b.ndim != 3:
            raise ValueError("basis must have shape (dim, h, k)")
        if b.shape[0] and np.linalg.matrix_rank(b.reshape(b.shape[0], -1)) != b.shape[0]:
            raise ValueError("basis matrices are linearly dependent")
        if kind == "adjoint" and source is None:
            raise ValueError("an adjoint space needs its source space")
        b.flags.writeable = False
        self.basis = b
        self.kind = kind
        self.source = source

    @classmethod
    def column(cls, d):
        """Column Hilbert space ``C^d = B(C, C^d)``."""
        return cls(np.eye(d).reshape(d, d, 1), kind="column")

    @classmethod
    def matrices(cls, h, k=None):
        """All of ``M_{h,k}`` with the matrix-unit basis (row-major order)."""
        k = h if k is None else k
        return cls(np.eye(h * k).reshape(h * k, h, k), kind="matrix")

    def adjoint(self):
        """The adjoint space ``E*``.

        Realized concretely on the conjugate-transposed basis, which is
        completely isometric to the transposed-pattern norms; the coefficient
        vector ``c`` stands for ``(sum conj(c_l) b_l)*``.
        """
        if self.kind == "adjoint":
            return self.source
        return ConcreteOpSpace(np.conj(np.swapaxes(self.basis, 1, 2)), kind="adjoint", source=self)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def shape(self):
        return self.basis.shape[1:]

    def __repr__(self):
        h, k = self.shape
        return f"ConcreteOpSpace(dim={self.dim}, {h}x{k}, kind={self.kind!r})"

    def element(self, coeffs):
        """Ambient matrix of a level-1 element."""
        return np.tensordot(np.asarray(coeffs, dtype=complex), self.basis, axes=(0, 0))

    def coordinates(self, matrix, tol=1e-10):
        """Coefficients of an ambient matrix; raises if it is not in the span."""
        m = np.asarray(matrix, dtype=complex)
        if m.shape != self.shape:
            raise ValueError(f"matrix of shape {m.shape} is not in a {self.shape} space")
        flat = self.basis.reshape(self.dim, -1).T
        c, *_ = np.linalg.lstsq(flat, m.ravel(), rcond=None)
        if np.linalg.norm(flat @ c - m.ravel()) > tol * max(1.0, np.linalg.norm(m)):
            raise ValueError("matrix does not lie in the span of the basis")
        return c

    def assemble(self, coeffs):
        """Block matrix of a ``(p, r, dim)`` coefficient array."""
        c = _as_level(coeffs, self.dim)
        p, r, _ = c.shape
        h, k = self.shape
        blocks = np.einsum("ijl,lab->iajb", c, self.basis)
        return blocks.reshape(p * h, r * k)

    def norm_and_gradient(self, coeffs):
        """Level norm and ``G`` with ``d norm = Re sum(conj(G) * d coeffs)``."""
        c = _as_level(coeffs, self.dim)
        p, r, _ = c.shape
        h, k = self.shape
        a = self.assemble(c)
        u, s, vh = np.linalg.svd(a)
        u1 = u[:, 0].reshape(p, h)
        v1 = vh[0].conj().reshape(r, k)
        w = np.einsum("ia,lab,jb->ijl", u1.conj(), self.basis, v1)
        return float(s[0]), w.conj()

    def random_level(self, n, rng, cols=None):
        r = n if cols is None else cols
        shape = (n, r, self.dim)
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _as_level(coeffs, dim):
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim == 1:
        c = c.reshape(1, 1, -1)
    if c.ndim != 3 or c.shape[2] != dim:
        raise ValueError(f"coefficient array of shape {c.shape} does not match a space of dimension {dim}")
    return c


def level_norm(space, m):
    """Norm of ``m`` in ``M_{p,r}(space)``.

    ``m`` is a coefficient array of shape ``(p, r, dim)`` (or ``(dim,)`` at
    level 1). For an adjoint space the norm of ``[e_ij*]`` is computed as the
    norm of ``[e_ji]`` in the source space.
    """
    c = _as_level(m, space.dim)
    if space.kind == "adjoint":
        src = space.source
        return _spectral_norm(src.assemble(np.conj(np.swapaxes(c, 0, 1))))
    return _spectral_norm(space.assemble(c))


def direct_sum(a, b):
    """Block-diagonal level element ``a (+) b``."""
    a, b = np.asarray(a), np.asarray(b)
    p1, r1, d = a.shape
    p2, r2, _ = b.shape
    out = np.zeros((p1 + p2, r1 + r2, d), dtype=complex)
    out[:p1, :r1] = a
    out[p1:, r1:] = b
    return out


def matrix_action(a, x, b):
    """``a x b`` for scalar matrices ``a``, ``b`` and a level element ``x``."""
    return np.einsum("ik,klm,lj->ijm", a, x, b)


class CbLinearMap:
    """Linear map ``T: X -> Y``; ``matrix[:, l]`` holds the coordinates of ``T(x_l)``."""

    def __init__(self, domain, codomain, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (codomain.dim, domain.dim):
            raise ValueError(f"map matrix must have shape {(codomain.dim, domain.dim)}")
        m.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.matrix = m

    @classmethod
    def from_images(cls, domain, codomain, images):
        """Build ``T`` from the ambient matrices ``T(x_l)``."""
        cols = [codomain.coordinates(im) for im in images]
        if len(cols) != domain.dim:
            raise ValueError("need one image per domain basis element")
        return cls(domain, codomain, np.array(cols).T)

    def apply(self, coeffs):
        """``M_n(T)`` on a coefficient array."""
        return np.asarray(coeffs) @ self.matrix.T

    def level_value(self, coeffs):
        """``||M_n(T) x|| / ||x||``."""
        den = level_norm(self.domain, coeffs)
        if den == 0:
            return 0.0
        return level_norm(self.codomain, self.apply(coeffs)) / den


@dataclass
class CbNormResult:
    """Level-wise lower bounds on ``||M_n(T)||``.

    ``witnesses[n-1]`` is a unit-norm element of ``M_n(X)`` whose image has
    norm ``levels[n-1]``. ``is_cb_norm`` is set when the codomain is ``M_k``
    and ``k`` levels were examined, where level ``k`` already gives the cb norm.
    """

    levels: list
    witnesses: list
    is_cb_norm: bool

    @property
    def best(self):
        return max(self.levels, default=0.0)


def _ratio_objective(T, n):
    dim = T.domain.dim
    shape = (n, n, dim)
    mconj = T.matrix.conj()

    def f(z):
        c = (z[: z.size // 2] + 1j * z[z.size // 2 :]).reshape(shape)
        nx, gx = T.domain.norm_and_gradient(c)
        ny, gy = T.codomain.norm_and_gradient(T.apply(c))
        if nx == 0 or ny == 0:
            return 0.0, np.zeros_like(z)
        g = gy @ mconj / ny - gx / nx
        val = -(np.log(ny) - np.log(nx))
        return val, -np.concatenate([g.real.ravel(), g.imag.ravel()])

    return f


def _pack(c):
    return np.concatenate([c.real.ravel(), c.imag.ravel()])


def _unpack(z, shape):
    return (z[: z.size // 2] + 1j * z[z.size // 2 :]).reshape(shape)


def _matrix_unit_candidates(space, n):
    # [E_ij] and [E_ji] placed in the top-left corner of M_n(M_k)
    if space.kind != "matrix":
        return []
    h, k = space.shape
    if n < max(h, k):
        return []
    out = []
    for transpose in (False, True):
        c = np.zeros((n, n, space.dim), dtype=complex)
        for i in range(h):
            for j in range(k):
                row, col = (j, i) if transpose else (i, j)
                c[row, col, i * k + j] = 1
        out.append(c)
    return out


def _pad(c, n):
    p = c.shape[0]
    out = np.zeros((n, n, c.shape[2]), dtype=complex)
    out[:p, :p] = c
    return out


def cb_norm_lower(T, max_level=3, restarts=32, iterations=200, seed=0):
    """Lower bounds on ``||M_n(T)||`` for ``n = 1..max_level``.

    Each level is maximized from ``restarts`` random starts plus structured
    candidates (the previous level's witness padded with zeros, and matrix-unit
    arrangements when the domain is a full matrix space), then the best point
    is polished. The best candidate wins, ties going to the earliest one, so
    results are deterministic for a given seed. Levels are nondecreasing
    because the previous witness is always a candidate.
    """
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    rng = np.random.default_rng(seed)
    levels, witnesses = [], []
    zero_map = not np.any(T.matrix)
    for n in range(1, max_level + 1):
        shape = (n, n, T.domain.dim)
        if zero_map:
            w = np.zeros(shape, dtype=complex)
            w[0, 0, 0] = 1
            w /= level_norm(T.domain, w)
            levels.append(0.0)
            witnesses.append(w)
            continue
        f = _ratio_objective(T, n)
        candidates = []
        if witnesses:
            candidates.append(_pad(witnesses[-1], n))
        candidates += _matrix_unit_candidates(T.domain, n)
        candidates += [T.domain.random_level(n, rng) for _ in range(restarts)]
        best_val, best_c = -np.inf, None
        for c0 in candidates:
            for c in (c0, _unpack(minimize(f, _pack(c0), jac=True, method="L-BFGS-B",
                                           options={"maxiter": iterations}).x, shape)):
                val = T.level_value(c)
                if val > best_val:
                    best_val, best_c = val, c
        polished = _unpack(minimize(f, _pack(best_c), jac=True, method="L-BFGS-B",
                                    options={"maxiter": 10 * iterations, "ftol": 1e-15, "gtol": 1e-12}).x, shape)
        if T.level_value(polished) > best_val:
            best_c = polished
        w = best_c / level_norm(T.domain, best_c)
        val = level_norm(T.codomain, T.apply(w))
        if levels and val < levels[-1]:
            # padded witness differs from the previous one only by rounding
            val = levels[-1]
        levels.append(val)
        witnesses.append(w)
    cod = T.codomain
    is_cb = cod.kind == "matrix" and cod.shape[0] == cod.shape[1] and max_level >= cod.shape[0]
    return CbNormResult(levels, witnesses, is_cb)


def tensor_from_terms(terms, left_dim, right_dim):
    """Level-1 coefficient tensor of ``sum_k x_k (x) y_k``.

    ``terms`` is a list of ``(x_coeffs, y_coeffs)``; returns shape ``(1, 1, dx, dy)``.
    """
    u = np.zeros((1, 1, left_dim, right_dim), dtype=complex)
    for x, y in terms:
        u[0, 0] += np.outer(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    return u


@dataclass
class HaagerupResult:
    """Upper bound ``||x|| ||y||`` from the factorization ``u = x (.) y``.

    ``x`` has shape ``(n, p, dim X)`` and ``y`` shape ``(p, n, dim Y)``.
    """

    value: float
    x: np.ndarray
    y: np.ndarray


def _flatten_tensor(u):
    n, _, dx, dy = u.shape
    return u.transpose(0, 2, 1, 3).reshape(n * dx, n * dy)


def _x_coeffs(xt, n, dx):
    return xt.reshape(n, dx, -1).transpose(0, 2, 1)


def _y_coeffs(yt, n, dy):
    return yt.reshape(yt.shape[0], n, dy)


def haagerup_factorization(u, left, right, restarts=8, iterations=200, seed=0, target=None):
    """Search for a short factorization of ``u`` in ``M_n(X (x)_h Y)``.

    ``u`` is a coefficient tensor of shape ``(n, n, dim X, dim Y)`` or a list of
    level-1 ``(x, y)`` coefficient pairs. Starting from the balanced singular
    value factorization ``U sqrt(S) . sqrt(S) V*`` of minimal inner length, the
    inner change of basis ``S`` in ``x S . S^-1 y`` is optimized to minimize
    ``log ||x|| + log ||y||``. Every returned factorization is checked to
    reproduce ``u``.

    With a known lower bound ``target`` the search stops as soon as a
    factorization within ``1e-10`` (relative) of it is found.
    """
    if not isinstance(u, np.ndarray):
        u = tensor_from_terms(u, left.dim, right.dim)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 4 or u.shape[0] != u.shape[1] or u.shape[2:] != (left.dim, right.dim):
        raise ValueError("tensor must have shape (n, n, dim X, dim Y)")
    n, _, dx, dy = u.shape
    flat = _flatten_tensor(u)
    scale = np.linalg.norm(flat)
    if scale == 0:
        return HaagerupResult(0.0, np.zeros((n, 1, dx), complex), np.zeros((1, n, dy), complex))
    U, s, Vh = np.linalg.svd(flat, full_matrices=False)
    r = int(np.sum(s > s[0] * 1e-13))
    root = np.sqrt(s[:r])
    x0 = U[:, :r] * root
    y0 = root[:, None] * Vh[:r]

    def parts(S):
        return x0 @ S, np.linalg.solve(S, y0)

    def value_of(S):
        xt, yt = parts(S)
        xc, yc = _x_coeffs(xt, n, dx), _y_coeffs(yt, n, dy)
        return level_norm(left, xc) * level_norm(right, yc), xc, yc, xt, yt

    def f(z):
        S = _unpack(z, (r, r))
        try:
            xt, yt = parts(S)
            Sinv = np.linalg.inv(S)
        except np.linalg.LinAlgError:
            return np.inf, np.zeros_like(z)
        nx, gx = left.norm_and_gradient(_x_coeffs(xt, n, dx))
        ny, gy = right.norm_and_gradient(_y_coeffs(yt, n, dy))
        if nx == 0 or ny == 0 or not np.isfinite(nx * ny):
            return np.inf, np.zeros_like(z)
        gxt = gx.transpose(0, 2, 1).reshape(n * dx, r)
        gyt = gy.reshape(r, n * dy)
        grad = x0.conj().T @ gxt / nx - Sinv.conj().T @ gyt @ yt.conj().T / ny
        return np.log(nx) + np.log(ny), _pack(grad)

    rng = np.random.default_rng(seed)
    starts = [np.eye(r, dtype=complex)]
    for _ in range(restarts):
        g = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        starts.append(np.eye(r) + 0.5 * g / np.sqrt(r))
    best = None
    for S0 in starts:
        opt = minimize(f, _pack(S0), jac=True, method="L-BFGS-B", options={"maxiter": iterations})
        for S in (S0, _unpack(opt.x, (r, r))):
            if not np.all(np.isfinite(S)) or np.linalg.cond(S) > 1e12:
                continue
            val, xc, yc, xt, yt = value_of(S)
            if np.linalg.norm(xt @ yt - flat) > 1e-10 * scale:
                continue
            if best is None or val < best.value:
                best = HaagerupResult(val, xc, yc)
        if target is not None and best is not None and best.value <= target * (1 + 1e-10):
            break
    return best


def haagerup_norm_upper(u, left, right, restarts=8, iterations=200, seed=0, target=None):
    """Upper bound on the Haagerup norm of ``u`` (see :func:`haagerup_factorization`)."""
    return haagerup_factorization(u, left, right, restarts, iterations, seed, target).value

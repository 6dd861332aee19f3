"""Commutative coefficient rings with the parity involution x -> -x.

Two realizations are provided:

* :class:`Poly` -- exact polynomials over the rationals in the variable ``x``.
  Every identity checked with them holds with zero tolerance.
* :class:`GridFunction` -- complex (scalar, vector or matrix valued) functions
  sampled on a symmetric grid ``{+-x_k}`` that never contains 0.

Both expose the same small protocol (``+``, ``-``, ``*``, ``reflect``,
``parity_split``, ``one_like``, ``zero_like``) so the quadratic-extension
engine in :mod:`adjunctions.quadext` works over either one.
"""

from fractions import Fraction
from math import gcd, ulp

import numpy as np

__all__ = [
    "Poly",
    "Grid",
    "GridFunction",
    "parity_split",
    "reflect",
    "odd_coordinate",
    "residual",
]


def _strip(nums):
    n = len(nums)
    while n and nums[n - 1] == 0:
        n -= 1
    return nums[:n]


def _as_fraction(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class Poly:
    """Exact rational polynomial ``sum_k c_k x**k``.

    Stored as integer numerators over one positive common denominator, reduced
    so the gcd of everything is 1 and there are no trailing zeros. That keeps
    the representation canonical, so ``==`` and ``hash`` are structural.

    >>> p = Poly([-1, 0, 2, 1])          # x^3 + 2x^2 - 1
    >>> p.parity_split()
    (Poly([-1, 0, 2]), Poly([0, 0, 0, 1]))
    """

    __slots__ = ("_num", "_den")

    def __init__(self, coefficients=()):
        fracs = [_as_fraction(c) for c in coefficients]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        nums = tuple(f.numerator * (den // f.denominator) for f in fracs)
        self._set(nums, den)

    @classmethod
    def _raw(cls, nums, den):
        p = cls.__new__(cls)
        p._set(tuple(nums), den)
        return p

    def _set(self, nums, den):
        nums = _strip(nums)
        if not nums:
            self._num, self._den = (), 1
            return
        g = den
        for c in nums:
            g = gcd(g, c)
            if g == 1:
                break
        if g != 1:
            nums = tuple(c // g for c in nums)
            den //= g
        self._num, self._den = nums, den

    # constructors

    @classmethod
    def x(cls):
        return cls._raw((0, 1), 1)

    @classmethod
    def monomial(cls, degree, coefficient=1):
        return cls([0] * degree + [coefficient])

    @classmethod
    def constant(cls, c):
        return cls([c])

    def one_like(self):
        return Poly._raw((1,), 1)

    def zero_like(self):
        return Poly._raw((), 1)

    # inspection

    @property
    def coefficients(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self):
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self._num) - 1

    def is_zero(self):
        return not self._num

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self._num, self._den))

    def __repr__(self):
        return "Poly([%s])" % ", ".join(_fmt(c) for c in self.coefficients)

    def __str__(self):
        if not self._num:
            return "0"
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = _fmt(abs(c)) + mono
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[-1]
        out = ("-" if sign == "-" else "") + body
        for sign, body in reversed(terms[:-1]):
            out += f" {sign} {body}"
        return out

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._num, other._num
        da, db = self._den, other._den
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] += c * db
        for i, c in enumerate(b):
            out[i] += c * da
        return Poly._raw(out, da * db)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self._num), self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._num, other._num
        if not a or not b:
            return Poly._raw((), 1)
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly._raw(out, self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("non-negative integer exponent required")
        out, base = self.one_like(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # parity

    def reflect(self):
        """Return ``p(-x)``."""
        return Poly._raw(tuple(-c if k % 2 else c for k, c in enumerate(self._num)), self._den)

    def parity_split(self):
        even = tuple(0 if k % 2 else c for k, c in enumerate(self._num))
        odd = tuple(c if k % 2 else 0 for k, c in enumerate(self._num))
        return Poly._raw(even, self._den), Poly._raw(odd, self._den)

    def is_even(self):
        return all(c == 0 for c in self._num[1::2])

    def is_odd(self):
        return all(c == 0 for c in self._num[0::2])

    def divide_exact(self, divisor):
        """Polynomial division that must leave no remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coefficients)
        dc = divisor.coefficients
        lead = dc[-1]
        qdeg = len(rem) - len(dc)
        if qdeg < 0:
            if self.is_zero():
                return self.zero_like()
            raise ValueError(f"{self} is not divisible by {divisor}")
        quot = [Fraction(0)] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            c = rem[k + len(dc) - 1] / lead
            quot[k] = c
            if c:
                for j, d in enumerate(dc):
                    rem[k + j] -= c * d
        if any(rem):
            raise ValueError(f"{self} is not divisible by {divisor}")
        return Poly(quot)

    def distance(self, other):
        """Largest coefficient of ``self - other`` in absolute value (a float).

        Never rounds a nonzero difference down to 0.
        """
        diff = self - other
        if diff.is_zero():
            return 0.0
        return max(max(abs(float(c)) for c in diff.coefficients), ulp(0.0))

    def norm(self):
        return max((abs(float(c)) for c in self.coefficients), default=0.0)


def _fmt(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Grid:
    """Symmetric sample grid ``-x_m < ... < -x_1 < x_1 < ... < x_m``.

    ``points`` holds the strictly increasing positive half; the full grid is
    stored negative half first so that reflection is a plain reversal.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid needs a non-empty 1-d array of points")
        if pts[0] <= 0 or np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be positive and strictly increasing")
        pts = pts.copy()
        pts.flags.writeable = False
        self.points = pts
        full = np.concatenate([-pts[::-1], pts])
        full.flags.writeable = False
        self.full = full

    @classmethod
    def uniform(cls, m, extent):
        """``m`` positive points ``extent * k / m`` for ``k = 1..m``."""
        if m < 1 or extent <= 0:
            raise ValueError("need m >= 1 and extent > 0")
        return cls(extent * np.arange(1, m + 1) / m)

    @property
    def size(self):
        return self.full.size

    def __eq__(self, other):
        return isinstance(other, Grid) and (
            self is other or np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash(self.points.tobytes())

    def __repr__(self):
        return f"Grid(m={self.points.size}, extent={self.points[-1]:g})"

    def function(self, values):
        return GridFunction(self, values)

    def evaluate(self, f):
        """Sample a vectorized callable on the full grid."""
        return GridFunction(self, f(self.full))

    def even(self, half_values):
        """Even function from its values at the positive points."""
        half = np.asarray(half_values)
        return GridFunction(self, np.concatenate([half[::-1], half]))

    def odd(self, half_values):
        half = np.asarray(half_values)
        return GridFunction(self, np.concatenate([-half[::-1], half]))

    def constant(self, c, shape=()):
        return GridFunction(self, np.full((self.size,) + tuple(shape), c, dtype=complex))


class GridFunction:
    """Function on a symmetric :class:`Grid`.

    ``values`` has shape ``(2m,)`` (scalar mode), ``(2m, d)`` (vector mode) or
    ``(2m, d, d)`` (operator mode). Products are pointwise: scalars broadcast,
    matrices compose, and a matrix times a vector is the matrix action.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        vals = np.array(values, dtype=complex)
        if vals.ndim == 0:
            vals = np.full(grid.size, vals)
        if vals.shape[0] != grid.size or vals.ndim > 3:
            raise ValueError(f"values of shape {vals.shape} do not fit {grid!r}")
        vals.flags.writeable = False
        self.grid = grid
        self.values = vals

    def _wrap(self, values):
        return GridFunction(self.grid, values)

    @property
    def value_shape(self):
        return self.values.shape[1:]

    def one_like(self):
        return self._wrap(np.ones(self.grid.size))

    def zero_like(self):
        return self._wrap(np.zeros_like(self.values))

    def _other_values(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise ValueError("grid functions live on different grids")
            return other.values
        if np.isscalar(other):
            return other
        return None

    def __add__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        return self._wrap(self.values + o)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.values)

    def __sub__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        return self._wrap(self.values - o)

    def __rsub__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        return self._wrap(o - self.values)

    def __mul__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        return self._wrap(_pointwise_product(self.values, o))

    def __rmul__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        return self._wrap(_pointwise_product(o, self.values))

    def __truediv__(self, other):
        o = self._other_values(other)
        if o is None:
            return NotImplemented
        if isinstance(other, GridFunction) and other.values.ndim != 1:
            raise TypeError("can only divide by a scalar grid function")
        if np.ndim(o) == 1 and self.values.ndim > 1:
            o = o.reshape((-1,) + (1,) * (self.values.ndim - 1))
        return self._wrap(self.values / o)

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return other.grid == self.grid and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self):
        return f"GridFunction({self.grid!r}, shape={self.values.shape})"

    def conj(self):
        return self._wrap(self.values.conj())

    def adjoint(self):
        """Pointwise conjugate transpose (operator mode)."""
        if self.values.ndim != 3:
            raise TypeError("adjoint needs operator-valued samples")
        return self._wrap(np.conj(np.swapaxes(self.values, 1, 2)))

    def reflect(self):
        """Return ``f(-x)``."""
        return self._wrap(self.values[::-1])

    def parity_split(self):
        v, w = self.values, self.values[::-1]
        return self._wrap((v + w) / 2), self._wrap((v - w) / 2)

    def pointwise_norms(self):
        v = self.values
        if v.ndim == 1:
            return np.abs(v)
        if v.ndim == 2:
            return np.linalg.norm(v, axis=1)
        if v.shape[1:] == (2, 2):
            return _spectral_norm_2x2(v)
        return np.linalg.norm(v, ord=2, axis=(1, 2))

    def sup_norm(self):
        """Sup over the samples of the pointwise (operator) norm."""
        return float(self.pointwise_norms().max())

    def norm(self):
        return self.sup_norm()

    def parity_defect(self, sign):
        """Relative size of ``f(-x) - sign * f(x)``."""
        scale = self.sup_norm()
        if scale == 0:
            return 0.0
        return float(np.abs(self.values[::-1] - sign * self.values).max()) / scale

    def is_even(self, tol=0.0):
        return self.parity_defect(+1) <= tol

    def is_odd(self, tol=0.0):
        return self.parity_defect(-1) <= tol

    def distance(self, other):
        """Sup-norm distance relative to the larger of the two sup norms."""
        scale = max(self.sup_norm(), other.sup_norm())
        if scale == 0:
            return 0.0
        return (self - other).sup_norm() / scale


def _spectral_norm_2x2(v):
    # eigenvalues of the Gram matrix [[p, r], [r*, s]]; the discriminant is a sum of squares
    a, b, c, d = v[:, 0, 0], v[:, 0, 1], v[:, 1, 0], v[:, 1, 1]
    p = np.abs(a) ** 2 + np.abs(c) ** 2
    s = np.abs(b) ** 2 + np.abs(d) ** 2
    r = np.conj(a) * b + np.conj(c) * d
    disc = np.hypot(p - s, 2 * np.abs(r))
    return np.sqrt((p + s + disc) / 2)


def _pointwise_product(a, b):
    a_nd, b_nd = np.ndim(a), np.ndim(b)
    if a_nd == 0 or b_nd == 0:
        return a * b
    if a_nd == 1:
        return a.reshape((-1,) + (1,) * (b_nd - 1)) * b
    if b_nd == 1:
        return a * b.reshape((-1,) + (1,) * (a_nd - 1))
    if a_nd == 3 and b_nd == 3:
        return np.matmul(a, b)
    if a_nd == 3 and b_nd == 2:
        return np.einsum("xij,xj->xi", a, b)
    raise TypeError(f"no pointwise product for value ranks {a_nd - 1} and {b_nd - 1}")


def parity_split(p):
    """``(even part, odd part)`` of a ring element."""
    return p.parity_split()


def reflect(p):
    return p.reflect()


def odd_coordinate(p, tau, tol=1e-12):
    """Return the even ``a`` with ``p = a * tau`` for odd ``p`` and odd ``tau``.

    Polynomials are divided exactly; grid functions pointwise, after checking
    ``tau`` does not vanish on the grid. ``tol`` bounds the relative parity
    defect accepted in grid mode.
    """
    if isinstance(p, Poly):
        if not p.is_odd():
            raise ValueError(f"{p} is not odd")
        if not tau.is_odd() or tau.is_zero():
            raise ValueError(f"{tau} is not a nonzero odd element")
        return p.divide_exact(tau)
    if isinstance(p, GridFunction):
        if not p.is_odd(tol):
            raise ValueError("grid function is not odd")
        if tau.values.ndim != 1 or not tau.is_odd(tol):
            raise ValueError("tau must be an odd scalar grid function")
        if np.any(tau.values == 0):
            raise ValueError("tau vanishes at a sample point")
        return p / tau
    raise TypeError(f"unsupported ring element {type(p).__name__}")


def residual(u, v):
    """Discrepancy between two ring elements.

    Exact (0.0 iff equal) for polynomials, relative sup-norm for grid functions.
    """
    return u.distance(v)

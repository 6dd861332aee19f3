"""Graded quadratic extensions ``B = A + A*tau`` and their adjunction maps.

``A`` is a commutative ring of even elements, ``tau`` a distinguished odd
element and ``q = tau**2`` (even, so in ``A``). Every element of ``B`` is
stored by its coordinates ``(a0, a1)`` with ``b = a0 + a1*tau``.

Because ``B`` is free of rank 2 over ``A``, the balanced tensor product
``B (x)_A B`` is free of rank 4 on ``1(x)1, 1(x)tau, tau(x)1, tau(x)tau``
and :class:`BalancedTensor` stores exactly those four ``A``-coordinates.
``B (x)_B B`` collapses to ``B`` by multiplication.

With ``tau = x`` over polynomials this is the Schwartz-level model; with
``tau = 1/c`` over grid functions it is the operator-algebra model. The same
code evaluates the Frobenius pair (inclusion / multiplication) and the
Bernstein pair (``b -> b*tau (x) 1 + b (x) tau`` / ``tau``-coordinate).
"""

from dataclasses import dataclass, field

from .coeff import Poly, odd_coordinate, residual

__all__ = [
    "QuadExtRing",
    "QuadExtElement",
    "BalancedTensor",
    "tensor_normal_form",
    "collapse_over_self",
    "bernstein_unit",
    "bernstein_unit_factored",
    "bernstein_counit",
    "frobenius_unit",
    "frobenius_counit",
    "default_polynomial_ring",
    "TriangleRecord",
    "TriangleReport",
    "check_triangles",
]


class QuadExtRing:
    """The ring ``A + A*tau``.

    :param tau: odd ring element (``Poly.x()`` or an odd scalar grid function)
    :param tol: relative tolerance for the parity checks in grid mode
    """

    def __init__(self, tau, tol=1e-12):
        exact = isinstance(tau, Poly)
        if exact:
            if not tau.is_odd() or tau.is_zero():
                raise ValueError("tau must be a nonzero odd element")
        elif not tau.is_odd(tol):
            raise ValueError("tau must be odd")
        q = tau * tau
        q_even, q_odd = q.parity_split()
        self.tau = tau
        # the odd part of tau**2 is rounding noise in grid mode
        self.q = q_even
        self.exact = exact
        self.tol = 0.0 if exact else tol
        self.one_a = tau.one_like()
        self.zero_a = tau.zero_like()

    @classmethod
    def polynomial(cls):
        """Polynomials over Q with ``tau = x``."""
        return cls(Poly.x())

    def __repr__(self):
        kind = "exact" if self.exact else "grid"
        return f"QuadExtRing({kind}, tau={self.tau!r})"

    def element(self, a0, a1=None):
        return QuadExtElement(self, a0, self.zero_a if a1 is None else a1)

    @property
    def one(self):
        return self.element(self.one_a, self.zero_a)

    @property
    def zero(self):
        return self.element(self.zero_a, self.zero_a)

    @property
    def tau_element(self):
        return self.element(self.zero_a, self.one_a)

    def decompose(self, b):
        """Coordinates of a plain ring element: ``b+`` and ``b-/tau``."""
        even, odd = b.parity_split()
        return self.element(even, odd_coordinate(odd, self.tau, tol=self.tol or 1e-12))

    def coerce(self, b):
        if isinstance(b, QuadExtElement):
            if b.ring is not self:
                raise ValueError("element belongs to a different ring")
            return b
        return self.decompose(b)

    def tensor(self, c00, c01=None, c10=None, c11=None):
        z = self.zero_a
        return BalancedTensor(
            self, c00, z if c01 is None else c01, z if c10 is None else c10, z if c11 is None else c11
        )


@dataclass(frozen=True, eq=False)
class QuadExtElement:
    """``a0 + a1*tau`` with ``a0, a1`` in ``A``."""

    ring: QuadExtRing = field(repr=False)
    a0: object
    a1: object

    def _same(self, other):
        if isinstance(other, QuadExtElement):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.ring, self.a0 + o.a0, self.a1 + o.a1)

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.ring, self.a0 - o.a0, self.a1 - o.a1)

    def __neg__(self):
        return QuadExtElement(self.ring, -self.a0, -self.a1)

    def __mul__(self, other):
        o = self._same(other)
        if o is None:
            # A-scalar (or number)
            return QuadExtElement(self.ring, self.a0 * other, self.a1 * other)
        q = self.ring.q
        return QuadExtElement(
            self.ring,
            self.a0 * o.a0 + self.a1 * o.a1 * q,
            self.a0 * o.a1 + self.a1 * o.a0,
        )

    def __rmul__(self, other):
        return QuadExtElement(self.ring, other * self.a0, other * self.a1)

    def __eq__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return self.a0 == o.a0 and self.a1 == o.a1

    __hash__ = None

    @property
    def value(self):
        """The underlying ring element ``a0 + a1*tau``."""
        return self.a0 + self.a1 * self.ring.tau

    def reflect(self):
        return QuadExtElement(self.ring, self.a0, -self.a1)

    def parity_split(self):
        z = self.ring.zero_a
        return QuadExtElement(self.ring, self.a0, z), QuadExtElement(self.ring, z, self.a1)

    def distance(self, other):
        return max(residual(self.a0, other.a0), residual(self.a1, other.a1))


@dataclass(frozen=True, eq=False)
class BalancedTensor:
    """Element ``c00 1(x)1 + c01 1(x)tau + c10 tau(x)1 + c11 tau(x)tau`` of ``B (x)_A B``.

    Left multiplication by ``B`` acts on the first leg, right multiplication
    on the second.
    """

    ring: QuadExtRing = field(repr=False)
    c00: object
    c01: object
    c10: object
    c11: object

    @property
    def coords(self):
        return (self.c00, self.c01, self.c10, self.c11)

    def _map(self, fn, other=None):
        if other is None:
            return BalancedTensor(self.ring, *(fn(c) for c in self.coords))
        if other.ring is not self.ring:
            raise ValueError("tensors over different rings")
        return BalancedTensor(self.ring, *(fn(c, d) for c, d in zip(self.coords, other.coords)))

    def __add__(self, other):
        return self._map(lambda c, d: c + d, other)

    def __sub__(self, other):
        return self._map(lambda c, d: c - d, other)

    def __neg__(self):
        return self._map(lambda c: -c)

    def scale(self, a):
        """Multiply by an element of ``A`` (it passes through either leg)."""
        return self._map(lambda c: c * a)

    def left_mul(self, b):
        """``b . t`` for ``b`` in ``B``."""
        q = self.ring.q
        return BalancedTensor(
            self.ring,
            b.a0 * self.c00 + b.a1 * q * self.c10,
            b.a0 * self.c01 + b.a1 * q * self.c11,
            b.a1 * self.c00 + b.a0 * self.c10,
            b.a1 * self.c01 + b.a0 * self.c11,
        )

    def right_mul(self, b):
        """``t . b`` for ``b`` in ``B``."""
        q = self.ring.q
        return BalancedTensor(
            self.ring,
            self.c00 * b.a0 + self.c01 * b.a1 * q,
            self.c00 * b.a1 + self.c01 * b.a0,
            self.c10 * b.a0 + self.c11 * b.a1 * q,
            self.c10 * b.a1 + self.c11 * b.a0,
        )

    def legs(self):
        """Elementary decomposition ``sum_k f_k (x) e_k``.

        Fixed convention: f-legs ``(c00, c01, c10*tau, c11*tau)`` and e-legs
        ``(1, tau, 1, tau)``. For ``bernstein_unit(a0 + a1 tau)`` the f-legs are
        ``(a1 q, a0, a0 tau, a1 tau)``.
        """
        r = self.ring
        z = r.zero_a
        one, tau = r.one, r.tau_element
        return [
            (r.element(self.c00, z), one),
            (r.element(self.c01, z), tau),
            (r.element(z, self.c10), one),
            (r.element(z, self.c11), tau),
        ]

    def __eq__(self, other):
        if not isinstance(other, BalancedTensor):
            return NotImplemented
        return other.ring is self.ring and all(c == d for c, d in zip(self.coords, other.coords))

    __hash__ = None

    def distance(self, other):
        return max(residual(c, d) for c, d in zip(self.coords, other.coords))


def tensor_normal_form(b, b_prime):
    """Normal form of the elementary tensor ``b (x)_A b'``."""
    if b.ring is not b_prime.ring:
        raise ValueError("elements of different rings")
    return BalancedTensor(b.ring, b.a0 * b_prime.a0, b.a0 * b_prime.a1, b.a1 * b_prime.a0, b.a1 * b_prime.a1)


def collapse_over_self(e, f):
    """``B (x)_B B -> B``, ``e (x) f -> e f``."""
    return e * f


def bernstein_unit(b):
    """``eta(b) = b tau (x) 1 + b (x) tau`` in normal form: ``(a1 q, a0, a0, a1)``."""
    r = b.ring
    return BalancedTensor(r, b.a1 * r.q, b.a0, b.a0, b.a1)


def bernstein_unit_factored(b1, b2):
    """Expand ``b1 tau (x) b2 + b1 (x) tau b2`` for the factorization ``b = b1 b2``."""
    tau = b1.ring.tau_element
    return tensor_normal_form(b1 * tau, b2) + tensor_normal_form(b1, tau * b2)


def bernstein_counit(t):
    """``E (x)_B F = B -> A``: the ``tau``-coordinate, i.e. ``c * t-``."""
    return t.a1


def frobenius_unit(a, ring=None):
    """Inclusion ``A -> B = E (x)_B F``."""
    if isinstance(a, QuadExtElement):
        raise TypeError("frobenius_unit takes an element of A")
    if isinstance(a, Poly) and not a.is_even():
        raise ValueError(f"{a} is not even")
    return (ring or _ring_of_a(a)).element(a)


def frobenius_counit(t):
    """``F (x)_A E -> B``, ``f (x) e -> f e``."""
    q = t.ring.q
    return t.ring.element(t.c00 + t.c11 * q, t.c01 + t.c10)


_default_rings = {}


def default_polynomial_ring():
    """The shared ``tau = x`` ring used when plain polynomials are passed in."""
    ring = _default_rings.get("poly")
    if ring is None:
        ring = _default_rings["poly"] = QuadExtRing.polynomial()
    return ring


def _ring_of_a(a):
    # exact polynomials share one ring; grid elements need an explicit ring
    if isinstance(a, Poly):
        return default_polynomial_ring()
    raise TypeError("use ring.element(a) for non-polynomial coefficient rings")


@dataclass(frozen=True)
class TriangleRecord:
    index: int
    chain: str
    residual: float
    passed: bool


@dataclass
class TriangleReport:
    kind: str
    tol: float
    records: list

    @property
    def ok(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]

    @property
    def max_residual(self):
        return max((r.residual for r in self.records), default=0.0)

    def __len__(self):
        return len(self.records)


def _bernstein_left_chain(e, b):
    # E (x)_B B -> E (x)_B F (x)_A E -> A (x)_A E -> E
    out = e.ring.zero
    for f_leg, e_leg in bernstein_unit(b).legs():
        out = out + e_leg * bernstein_counit(collapse_over_self(e, f_leg))
    return out


def _bernstein_right_chain(b, f):
    # B (x)_B F -> F (x)_A E (x)_B F -> F (x)_A A -> F
    out = f.ring.zero
    for f_leg, e_leg in bernstein_unit(b).legs():
        out = out + f_leg * bernstein_counit(collapse_over_self(e_leg, f))
    return out


def _frobenius_left_chain(b, e):
    # A (x)_A E -> E (x)_B F (x)_A E -> E (x)_B B -> E, with eta(b) = b (x) 1
    r = e.ring
    return b * frobenius_counit(tensor_normal_form(r.one, e))


def _frobenius_right_chain(f, b):
    # F (x)_A A -> F (x)_A E (x)_B F -> B (x)_B F -> F
    r = f.ring
    return frobenius_counit(tensor_normal_form(f, b)) * r.one


def check_triangles(kind, samples, tol=None):
    """Evaluate both triangle compositions of an adjunction on samples.

    :param kind: ``"bernstein"`` or ``"frobenius"``
    :param samples: iterable of ``(m, b)`` pairs; ``m`` is the module element
        and ``b`` the acting element. Plain ring elements are decomposed.
    :param tol: pass threshold on the residual; defaults to 0 for exact rings
        and ``1e-12`` (relative) for grid rings
    :return: :class:`TriangleReport`; each sample yields a ``left`` record
        (module on the left, compared with ``m b``) and a ``right`` record
        (compared with ``b m``)

    For Frobenius the unit is the inclusion ``b -> b (x) 1``, so the acting
    element is meant to lie in ``A``; the chain formulas are well defined for
    any ``b`` and are evaluated as given.
    """
    if kind == "bernstein":
        left, right = _bernstein_left_chain, _bernstein_right_chain
    elif kind == "frobenius":
        left, right = _frobenius_left_chain, _frobenius_right_chain
    else:
        raise ValueError(f"unknown adjunction kind {kind!r}")
    records = []
    thresh = tol
    for i, (m, b) in enumerate(samples):
        ring = m.ring if isinstance(m, QuadExtElement) else b.ring if isinstance(b, QuadExtElement) else None
        if ring is None:
            ring = _ring_of_a(m)
        m, b = ring.coerce(m), ring.coerce(b)
        if thresh is None:
            thresh = ring.tol
        if kind == "bernstein":
            got_l, want_l = left(m, b), m * b
            got_r, want_r = right(b, m), b * m
        else:
            got_l, want_l = left(b, m), m * b
            got_r, want_r = right(m, b), b * m
        for chain, got, want in (("left", got_l, want_l), ("right", got_r, want_r)):
            res = got.distance(want)
            records.append(TriangleRecord(i, chain, res, res <= thresh))
    return TriangleReport(kind, 0.0 if thresh is None else thresh, records)

"""
Unit and counit on polynomials
==============================

Polynomials with rational coefficients split into even and odd parts. The
even ones form ``A`` and everything forms ``B = A + A x``.
"""

from adjunctions.coeff import Poly
from adjunctions.quadext import (
    bernstein_counit,
    bernstein_unit,
    bernstein_unit_factored,
    check_triangles,
    collapse_over_self,
    default_polynomial_ring,
)

x = Poly.x()
B = default_polynomial_ring()

# every element has two even coordinates
b = B.decompose(3 + 2 * x + x ** 2 + 5 * x ** 3)
print("coordinates:", b.a0, "|", b.a1)

# the unit, in the basis 1(x)1, 1(x)x, x(x)1, x(x)x
for p in (Poly([1]), x, x ** 2):
    print(f"eta({p}) =", [str(c) for c in bernstein_unit(B.decompose(p)).coords])

# it only depends on the product
e = B.decompose(x ** 2)
print("x * x and 1 * x^2 agree:", bernstein_unit_factored(B.decompose(x), B.decompose(x)) == bernstein_unit(e))

# the counit reads off the odd part divided by x
print("counit(x * (3 + x^2)) =", bernstein_counit(collapse_over_self(B.decompose(x), B.decompose(3 + x ** 2))))

# both triangle identities, exactly, on all monomial pairs up to degree 8
samples = [(x ** i, x ** j) for i in range(9) for j in range(9)]
for kind in ("bernstein", "frobenius"):
    rep = check_triangles(kind, samples)
    print(f"{kind}: {len(rep)} chains, failures: {len(rep.failures)}, max residual {rep.max_residual}")

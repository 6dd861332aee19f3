"""Finite-dimensional Hilbert C*-modules and C*-correspondences.

``B`` is a direct sum of full matrix algebras ``M_{k_1} + ... + M_{k_S}`` and
the right Hilbert ``B``-module is ``E = M_{m_1,k_1} + ... + M_{m_S,k_S}``,
stored as one flat complex vector, with right action by matrix
multiplication and inner product ``<e, f>_s = e_s^* P_s f_s``. The weights
``P_s = V_s^* V_s`` come from injective frames ``V_s``; ``P_s = 1`` is the
standard module.

``B``-compact operators on ``E`` are tuples of ``m_s x m_s`` matrices acting
on the left. The left action of a second algebra ``A`` is a *-homomorphism
into them, built from block-diagonal amplifications conjugated by unitaries.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm
from scipy.stats import unitary_group

from .opspace import ConcreteOpSpace

__all__ = [
    "FinCStar",
    "Correspondence",
    "CStarFrobeniusRecord",
    "CStarFrobeniusReport",
    "random_correspondence",
    "verify_cstar_frobenius",
]

COND_LIMIT = 1e8


@dataclass(frozen=True)
class FinCStar:
    """``M_{k_1} + ... + M_{k_S}``; elements are tuples of square arrays."""

    blocks: tuple

    def __post_init__(self):
        if not self.blocks or any(int(k) < 1 for k in self.blocks):
            raise ValueError("block sizes must be positive")
        object.__setattr__(self, "blocks", tuple(int(k) for k in self.blocks))

    @property
    def dim(self):
        return sum(k * k for k in self.blocks)

    def identity(self):
        return tuple(np.eye(k, dtype=complex) for k in self.blocks)

    def zero(self):
        return tuple(np.zeros((k, k), dtype=complex) for k in self.blocks)

    def random(self, rng):
        return tuple(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)) for k in self.blocks)

    @staticmethod
    def multiply(a, b):
        return tuple(x @ y for x, y in zip(a, b))

    @staticmethod
    def star(a):
        return tuple(x.conj().T for x in a)

    @staticmethod
    def norm(a):
        return max(np.linalg.norm(x, 2) for x in a)

    @staticmethod
    def distance(a, b):
        return max(np.linalg.norm(x - y, 2) for x, y in zip(a, b))


class Correspondence:
    """C*-correspondence from ``A`` to ``B`` on ``E = (+)_s M_{m_s, k_s}``.

    :param b_algebra: :class:`FinCStar` for ``B``
    :param multiplicities: ``m_s`` for each block of ``B``
    :param a_algebra: :class:`FinCStar` for ``A``; defaults to ``K_B(E)`` itself
    :param layout: ``{(t, s): mu}`` -- block ``t`` of ``A`` appears ``mu`` times
        in sector ``s``; defaults to the identity layout
    :param unitaries: per-sector ``m_s x m_s`` matrices conjugating the action
        (orthonormalized; rejected if their condition number exceeds ``1e8``)
    :param frames: per-sector injective ``V_s`` defining ``P_s = V_s^* V_s``
        (rejected if ``cond(P_s) > 1e8``)
    """

    def __init__(self, b_algebra, multiplicities, a_algebra=None, layout=None, unitaries=None, frames=None):
        self.B = b_algebra
        self.mults = tuple(int(m) for m in multiplicities)
        if len(self.mults) != len(self.B.blocks) or any(m < 1 for m in self.mults):
            raise ValueError("need one positive multiplicity per block of B")
        if a_algebra is None:
            a_algebra = FinCStar(self.mults)
            layout = {(s, s): 1 for s in range(len(self.mults))}
        elif layout is None:
            raise ValueError("a layout is required with an explicit A")
        self.A = a_algebra
        self.layout = dict(layout)
        for s, m in enumerate(self.mults):
            used = sum(self.A.blocks[t] * mu for (t, s2), mu in self.layout.items() if s2 == s)
            if used > m:
                raise ValueError(f"sector {s} is too small for its share of A")
        S = len(self.mults)
        self.unitaries = [_orthonormalize(u, "unitary") for u in (unitaries or [np.eye(m) for m in self.mults])]
        if len(self.unitaries) != S:
            raise ValueError("need one unitary per sector")
        frames = frames or [np.eye(m) for m in self.mults]
        if len(frames) != S:
            raise ValueError("need one frame per sector")
        self.weights, self._root, self._root_inv = [], [], []
        for V, m in zip(frames, self.mults):
            V = np.asarray(V, dtype=complex)
            if V.shape[1] != m:
                raise ValueError("frame has the wrong number of columns")
            P = V.conj().T @ V
            if np.linalg.cond(P) > COND_LIMIT:
                raise ValueError("degenerate inner product (condition number above 1e8)")
            P = (P + P.conj().T) / 2
            R = sqrtm(P)
            R = (R + R.conj().T) / 2
            self.weights.append(P)
            self._root.append(R)
            self._root_inv.append(np.linalg.inv(R))
        self._offsets = np.cumsum([0] + [m * k for m, k in zip(self.mults, self.B.blocks)])

    def __repr__(self):
        return f"Correspondence(A={self.A.blocks}, B={self.B.blocks}, m={self.mults})"

    @property
    def dim(self):
        return int(self._offsets[-1])

    # module elements

    def split(self, e):
        e = np.asarray(e)
        return [e[a:b].reshape(m, k) for a, b, m, k in zip(self._offsets[:-1], self._offsets[1:], self.mults, self.B.blocks)]

    @staticmethod
    def join(blocks):
        return np.concatenate([np.asarray(b, dtype=complex).ravel() for b in blocks])

    def basis(self):
        return list(np.eye(self.dim, dtype=complex))

    def random_element(self, rng):
        return rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)

    def right_act(self, e, b):
        return self.join([x @ y for x, y in zip(self.split(e), b)])

    def inner(self, e1, e2):
        """``<e1, e2>`` in ``B``."""
        return tuple(x.conj().T @ P @ y for x, y, P in zip(self.split(e1), self.split(e2), self.weights))

    def norm(self, e):
        return float(np.sqrt(FinCStar.norm(self.inner(e, e))))

    def matrix_inner(self, X, Y):
        """``M_n(B)``-valued inner product ``[sum_k <x_ki, y_kj>]`` of ``n x n`` arrays of elements."""
        X, Y = np.asarray(X), np.asarray(Y)
        n = X.shape[0]
        out = []
        for s, k in enumerate(self.B.blocks):
            blk = np.zeros((n * k, n * k), dtype=complex)
            for i in range(n):
                for j in range(n):
                    blk[i * k:(i + 1) * k, j * k:(j + 1) * k] = sum(
                        self.inner(X[l, i], Y[l, j])[s] for l in range(n)
                    )
            out.append(blk)
        return tuple(out)

    def matrix_norm(self, X):
        """Norm of ``X`` in ``M_n(E)``: ``||<X, X>||^(1/2)``."""
        return float(np.sqrt(max(np.linalg.norm(b, 2) for b in self.matrix_inner(X, X))))

    # operators

    def apply(self, op, e):
        return self.join([T @ x for T, x in zip(op, self.split(e))])

    def op_adjoint(self, op):
        """Adjoint with respect to the weighted inner product."""
        return tuple(np.linalg.solve(P, T.conj().T @ P) for T, P in zip(op, self.weights))

    def op_norm(self, op):
        return max(np.linalg.norm(R @ T @ Ri, 2) for T, R, Ri in zip(op, self._root, self._root_inv))

    def alpha(self, a):
        """Left action ``A -> K_B(E)``."""
        out = []
        for s, (m, W) in enumerate(zip(self.mults, self.unitaries)):
            blocks = []
            for (t, s2), mu in sorted(self.layout.items()):
                if s2 == s:
                    blocks += [a[t]] * mu
            D = np.zeros((m, m), dtype=complex)
            pos = 0
            for blk in blocks:
                D[pos:pos + blk.shape[0], pos:pos + blk.shape[0]] = blk
                pos += blk.shape[0]
            R, Ri = self._root[s], self._root_inv[s]
            out.append(Ri @ W @ D @ W.conj().T @ R)
        return tuple(out)

    def left_act(self, a, e):
        return self.apply(self.alpha(a), e)

    def rank_one(self, e1, e2):
        """Operator ``e -> e1 <e2, e>``."""
        return tuple(x @ y.conj().T @ P for x, y, P in zip(self.split(e1), self.split(e2), self.weights))

    def kappa(self, terms):
        """``E (x) E* -> K_B(E)``: ``sum e (x) f* -> sum rank_one(e, f)``."""
        out = [np.zeros((m, m), dtype=complex) for m in self.mults]
        for e, f in terms:
            for s, blk in enumerate(self.rank_one(e, f)):
                out[s] = out[s] + blk
        return tuple(out)

    def _rank_one_system(self):
        if not hasattr(self, "_r1"):
            basis = self.basis()
            pairs = [(i, j) for i in range(self.dim) for j in range(self.dim)]
            cols = [np.concatenate([b.ravel() for b in self.rank_one(basis[i], basis[j])]) for i, j in pairs]
            self._r1 = (np.array(cols).T, pairs)
        return self._r1

    def kappa_inverse(self, op, tol=1e-10):
        """Minimum-norm tensor ``sum c_ij e_i (x) e_j*`` with ``kappa = op``.

        Returns a list of ``(e, f)`` pairs. Raises ``ValueError`` if ``op`` is
        not in the span of the rank-one operators.
        """
        M, pairs = self._rank_one_system()
        target = np.concatenate([np.asarray(b).ravel() for b in op])
        c, *_ = np.linalg.lstsq(M, target, rcond=None)
        if np.linalg.norm(M @ c - target) > tol * max(1.0, np.linalg.norm(target)):
            raise ValueError("operator is not in the span of rank-one operators")
        basis = self.basis()
        return [(c[n] * basis[i], basis[j]) for n, (i, j) in enumerate(pairs) if c[n] != 0]

    def ip_pairing(self, e1_star, e2):
        """``E* (x) E -> B``; ``e1_star`` is given by the underlying element ``e1``."""
        return self.inner(e1_star, e2)

    # concrete operator-space pictures

    def _placement(self):
        rows = np.cumsum([0] + list(self.mults))
        cols = np.cumsum([0] + list(self.B.blocks))
        return rows, cols

    def concrete(self, e):
        """``E`` inside ``B(C^{sum k}, C^{sum m})`` (block diagonal, weighted)."""
        rows, cols = self._placement()
        out = np.zeros((rows[-1], cols[-1]), dtype=complex)
        for s, x in enumerate(self.split(e)):
            out[rows[s]:rows[s + 1], cols[s]:cols[s + 1]] = self._root[s] @ x
        return out

    def concrete_operator(self, op):
        rows, _ = self._placement()
        out = np.zeros((rows[-1], rows[-1]), dtype=complex)
        for s, T in enumerate(op):
            out[rows[s]:rows[s + 1], rows[s]:rows[s + 1]] = self._root[s] @ T @ self._root_inv[s]
        return out

    def operator_space(self):
        """``E`` as a :class:`ConcreteOpSpace` on the standard basis."""
        return ConcreteOpSpace([self.concrete(b) for b in self.basis()], kind="column" if self.B.blocks == (1,) else "plain")

    def compacts_space(self):
        """``K_B(E)`` as a :class:`ConcreteOpSpace` on the matrix-unit basis of each sector."""
        mats = []
        for s, m in enumerate(self.mults):
            for i in range(m):
                for j in range(m):
                    op = [np.zeros((mm, mm), dtype=complex) for mm in self.mults]
                    op[s][i, j] = 1
                    mats.append(self.concrete_operator(op))
        return ConcreteOpSpace(mats)

    def compacts_coordinates(self, op):
        return np.concatenate([np.asarray(T).ravel() for T in op])


def _orthonormalize(u, what):
    u = np.asarray(u, dtype=complex)
    if u.shape[0] != u.shape[1]:
        raise ValueError(f"{what} must be square")
    if np.linalg.cond(u) > COND_LIMIT:
        raise ValueError(f"{what} is too close to singular")
    W, _, Vh = np.linalg.svd(u)
    return W @ Vh


def random_correspondence(rng, max_dim=6, max_blocks=3, weighted=True):
    """Random correspondence with ``dim E <= max_dim`` and blocks of size ``<= max_blocks``.

    ``A`` is assembled from random compositions of each sector, so a block of
    ``A`` can act with multiplicity and on several sectors at once. Unitaries
    are Haar random and, if ``weighted``, frames are random Gaussian ``V_s``.
    """
    while True:
        S = int(rng.integers(1, max_blocks + 1))
        ks = [int(rng.integers(1, max_blocks + 1)) for _ in range(S)]
        ms = [int(rng.integers(1, max_blocks + 1)) for _ in range(S)]
        if sum(m * k for m, k in zip(ms, ks)) <= max_dim:
            break
    a_blocks, layout = [], {}
    for s, m in enumerate(ms):
        left = m
        while left:
            reuse = [t for t, a in enumerate(a_blocks) if a <= left]
            if reuse and rng.random() < 0.5:
                t = int(rng.choice(reuse))
            else:
                a_blocks.append(int(rng.integers(1, left + 1)))
                t = len(a_blocks) - 1
            mu = int(rng.integers(1, left // a_blocks[t] + 1))
            layout[(t, s)] = layout.get((t, s), 0) + mu
            left -= mu * a_blocks[t]
    unitaries = [unitary_group.rvs(m, random_state=rng) if m > 1 else np.eye(1) for m in ms]
    frames = None
    if weighted:
        frames = []
        for m in ms:
            while True:
                V = rng.standard_normal((m + 1, m)) + 1j * rng.standard_normal((m + 1, m))
                if np.linalg.cond(V.conj().T @ V) < 1e4:
                    break
            frames.append(V)
    return Correspondence(FinCStar(ks), ms, FinCStar(a_blocks), layout, unitaries, frames)


@dataclass(frozen=True)
class CStarFrobeniusRecord:
    index: int
    chain: str
    residual: float
    passed: bool


@dataclass
class CStarFrobeniusReport:
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


def _rel(got, want, scale):
    return float(np.linalg.norm(got - want)) / max(1.0, scale)


def verify_cstar_frobenius(corr, samples, tol=1e-10):
    """Replay both triangle chains of ``E* -| E`` on ``(a, e)`` samples.

    Chain 1: ``a (x) e -> kappa^-1(alpha(a)) (x) e -> alpha(a) e``.
    Chain 2: ``e* (x) a -> e* (x) kappa^-1(alpha(a)) -> e* alpha(a) = (alpha(a*) e)*``;
    elements of ``E*`` are compared through their underlying elements.
    Residuals are relative to ``max(1, ||a|| ||e||)``.
    """
    records = []
    for i, (a, e) in enumerate(samples):
        alpha_a = corr.alpha(a)
        terms = corr.kappa_inverse(alpha_a)
        scale = FinCStar.norm(a) * float(np.linalg.norm(e))
        chain1 = sum((corr.right_act(x, corr.inner(y, e)) for x, y in terms), np.zeros(corr.dim, complex))
        want1 = corr.apply(alpha_a, e)
        chain2 = sum((corr.right_act(y, corr.inner(x, e)) for x, y in terms), np.zeros(corr.dim, complex))
        want2 = corr.left_act(FinCStar.star(a), e)
        for chain, got, want in (("eta-then-eps", chain1, want1), ("adjoint", chain2, want2)):
            res = _rel(got, want, scale)
            records.append(CStarFrobeniusRecord(i, chain, res, res <= tol))
    return CStarFrobeniusReport(tol, records)

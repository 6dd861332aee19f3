"""Verification suites and the versioned text report."""

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .coeff import Poly, odd_coordinate
from .config import SUITES
from .correspondence import Correspondence, FinCStar, random_correspondence, verify_cstar_frobenius
from .opspace import (
    CbLinearMap,
    ConcreteOpSpace,
    cb_norm_lower,
    direct_sum,
    haagerup_norm_upper,
    level_norm,
    matrix_action,
)
from .quadext import (
    bernstein_counit,
    bernstein_unit,
    bernstein_unit_factored,
    check_triangles,
    collapse_over_self,
    default_polynomial_ring,
    frobenius_counit,
    frobenius_unit,
    tensor_normal_form,
)
from .sl2 import Sl2EvenModel, embed_norm_bound

__all__ = ["Record", "SuiteReport", "NumericFailure", "run", "format_report", "random_poly"]

REPORT_FORMAT = "adjunctions-report/1"
GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class Record:
    suite: str
    case: str
    digest: str
    n: int
    measured: float
    bound: float
    passed: bool


@dataclass
class SuiteReport:
    config: object
    records: list

    @property
    def ok(self):
        return all(r.passed for r in self.records)

    @property
    def failed(self):
        return [r for r in self.records if not r.passed]

    def sections(self):
        return sorted({r.suite for r in self.records})


class NumericFailure(RuntimeError):
    """A suite crashed numerically; ``partial`` holds the records gathered so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def _digest(*objs):
    h = hashlib.sha256()

    def feed(o):
        if isinstance(o, np.ndarray):
            h.update(np.ascontiguousarray(o).tobytes())
        elif isinstance(o, (list, tuple)):
            for x in o:
                feed(x)
        elif hasattr(o, "a0") and hasattr(o, "a1"):
            feed(o.a0)
            feed(o.a1)
        elif hasattr(o, "values") and isinstance(getattr(o, "values"), np.ndarray):
            feed(o.values)
        else:
            h.update(repr(o).encode())
        h.update(b"|")

    for o in objs:
        feed(o)
    return h.hexdigest()[:16]


class _Collector:
    def __init__(self, suite, records):
        self.suite = suite
        self.records = records

    def add(self, case, inputs, n, measured, bound, passed=None):
        measured = float(measured)
        if passed is None:
            passed = bool(measured <= bound)
        self.records.append(Record(self.suite, case, _digest(inputs), n, measured, float(bound), passed))


def random_poly(rng, degree, num=9, den=9):
    """Random rational polynomial of degree ``<= degree``."""
    return Poly(
        [Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1))) for _ in range(degree + 1)]
    )


def _poly_samples(cfg, rng):
    x = Poly.x()
    monos = [(x ** i, x ** j) for i in range(cfg.monomial_degree + 1) for j in range(cfg.monomial_degree + 1)]
    randoms = [(random_poly(rng, cfg.degree), random_poly(rng, cfg.degree)) for _ in range(cfg.samples)]
    return monos, randoms


def _report_triangles(col, case, samples, kind):
    rep = check_triangles(kind, samples, tol=0.0)
    col.add(case, [(str(a), str(b)) for a, b in samples], len(samples), rep.max_residual, 0.0, rep.ok)


def suite_schwartz_bernstein(cfg, col):
    rng = np.random.default_rng([cfg.seed, 1])
    ring = default_polynomial_ring()
    monos, randoms = _poly_samples(cfg, rng)
    _report_triangles(col, "triangles/monomials", monos, "bernstein")
    _report_triangles(col, "triangles/random", randoms, "bernstein")

    x = Poly.x()
    b = ring.one
    col.add("unit/eta(1)", "1", 1, bernstein_unit(b).distance(ring.tensor(x.zero_like(), x.one_like(), x.one_like())), 0.0)

    # factorization independence and bimodule property
    worst_fact = worst_nat = worst_bal = worst_counit = 0.0
    inputs = []
    for _ in range(cfg.samples):
        p1, p2, p3 = (random_poly(rng, cfg.degree // 2) for _ in range(3))
        b1, b2, b3 = (ring.decompose(p) for p in (p1, p2, p3))
        inputs.append((str(p1), str(p2), str(p3)))
        prod = b1 * b2 * b3
        eta = bernstein_unit(prod)
        worst_fact = max(worst_fact, bernstein_unit_factored(b1 * b2, b3).distance(eta),
                         bernstein_unit_factored(b1, b2 * b3).distance(eta))
        worst_nat = max(worst_nat, eta.distance(bernstein_unit(b2).left_mul(b1).right_mul(b3)))
        a = ring.element(b3.a0)
        worst_bal = max(worst_bal, tensor_normal_form(b1 * a, b2).distance(tensor_normal_form(b1, a * b2)))
        t = collapse_over_self(b1, b2)
        direct = odd_coordinate((p1 * p2).parity_split()[1], x)
        worst_counit = max(worst_counit, bernstein_counit(t).distance(direct))
    col.add("unit/factorization-independence", inputs, cfg.samples, worst_fact, 0.0)
    col.add("unit/bimodule-naturality", inputs, cfg.samples, worst_nat, 0.0)
    col.add("tensor/balancing", inputs, cfg.samples, worst_bal, 0.0)
    col.add("counit/odd-part-over-x", inputs, cfg.samples, worst_counit, 0.0)


def suite_schwartz_frobenius(cfg, col):
    rng = np.random.default_rng([cfg.seed, 1])
    ring = default_polynomial_ring()
    monos, randoms = _poly_samples(cfg, rng)
    _report_triangles(col, "triangles/monomials", monos, "frobenius")
    _report_triangles(col, "triangles/random", randoms, "frobenius")
    worst = 0.0
    inputs = []
    for _ in range(cfg.samples):
        a1 = random_poly(rng, cfg.degree // 2).parity_split()[0]
        a2 = random_poly(rng, cfg.degree // 2).parity_split()[0]
        inputs.append((str(a1), str(a2)))
        # eta(a1 a2) = a1 (x) a2 in E (x)_B F = B
        eta = collapse_over_self(ring.element(a1), ring.element(a2))
        worst = max(worst, eta.distance(frobenius_unit(a1 * a2)))
        # epsilon(f (x) e) = f e
        f, e = ring.decompose(a1 * Poly.x() + a2), ring.decompose(a2 * Poly.x())
        worst = max(worst, frobenius_counit(tensor_normal_form(f, e)).distance(f * e))
    col.add("unit-counit/formulas", inputs, cfg.samples, worst, 0.0)


def suite_opalg_bernstein(cfg, col):
    rng = np.random.default_rng([cfg.seed, 2])
    model = Sl2EvenModel(cfg.grid_m, cfg.grid_extent, cfg.dim, cfg.cfunc)
    ring = model.ring
    tol12 = cfg.tolerance(1e-12)
    tol10 = cfg.tolerance(1e-10)
    grid_tag = (cfg.grid_m, cfg.grid_extent, cfg.cfunc)

    samples = [(model.random_b(rng), model.random_b(rng)) for _ in range(cfg.opalg_samples)]
    bern, frob = model.run_bernstein_opalg(samples, tol=tol12)
    col.add("triangles/bernstein", [grid_tag, samples], len(samples), bern.max_residual, tol12, bern.ok)
    col.add("triangles/frobenius", [grid_tag, samples], len(samples), frob.max_residual, tol12, frob.ok)

    eta1 = bernstein_unit(ring.one)
    want = ring.tensor(ring.zero_a, ring.one_a, ring.one_a, ring.zero_a)
    col.add("unit/eta(1)", grid_tag, 1, eta1.distance(want), tol12)
    tau = ring.tau_element
    q = tau * tau
    fact = max(bernstein_unit_factored(tau, tau).distance(bernstein_unit(q)),
               bernstein_unit_factored(ring.one, q).distance(bernstein_unit(q)))
    col.add("unit/tau-squared-factorizations", grid_tag, 2, fact, tol12)

    c, t = model.c, model.tau
    col.add("cfunction/odd", grid_tag, 1, (c + c.reflect()).sup_norm(), 0.0)
    col.add("cfunction/c-times-tau", grid_tag, 1, (c * t - 1).sup_norm(), cfg.tolerance(1e-14))

    leib = mult = coord = 0.0
    pairs = [(model.random_b(rng), model.random_b(rng)) for _ in range(cfg.pair_samples)]
    for b1, b2 in pairs:
        lhs = model.delta_pointwise(b1 * b2)
        rhs = model.delta_pointwise(b1) * b2.value + b1.value.reflect() * model.delta_pointwise(b2)
        leib = max(leib, lhs.distance(rhs))
        coord = max(coord, model.delta_op(b1).distance(model.delta_pointwise(b1)))
        mult = max(mult, model.embed_2x2(b1 * b2).distance(model.embed_2x2(b1) * model.embed_2x2(b2)))
    col.add("delta/twisted-leibniz", [grid_tag, pairs], len(pairs), leib, tol12)
    col.add("delta/coordinate-equals-c-times-odd-part", [grid_tag, pairs], len(pairs), coord, tol12)
    col.add("embed/multiplicative", [grid_tag, pairs], len(pairs), mult, tol12)

    tau_norm = model.b_norm(tau)
    oracle = float(embed_norm_bound(np.abs(t.values.real).max()))
    col.add("embed/norm-of-tau-vs-pointwise-oracle", grid_tag, 1, abs(tau_norm - oracle), tol12)
    col.add("embed/norm-of-tau-vs-golden-ratio", grid_tag, 1, abs(tau_norm - GOLDEN), cfg.tolerance(1e-3))

    psd = herm = refl = 0.0
    sandwich_lo, sandwich_hi = np.inf, -np.inf
    fs = [model.random_e(rng) for _ in range(cfg.positivity_samples)]
    for f in fs:
        g = model.g_valued_inner(f, f)
        eig = np.linalg.eigvalsh(g.values)
        psd = max(psd, -eig.min())
        refl = max(refl, float(np.abs(g.values - g.values[::-1]).max()))
        herm = max(herm, float(np.abs(g.values - np.conj(np.swapaxes(g.values, 1, 2))).max()))
    scalars = [model.random_scalar(rng) for _ in range(cfg.positivity_samples)]
    for f in scalars:
        a = model.a_valued_inner(f, f)
        ratio = math.sqrt(a.sup_norm()) / f.sup_norm()
        sandwich_lo = min(sandwich_lo, ratio)
        sandwich_hi = max(sandwich_hi, ratio)
    col.add("g-inner/positive-semidefinite", [grid_tag, fs], len(fs), psd, tol10)
    col.add("g-inner/reflection-invariant", [grid_tag, fs], len(fs), refl, 0.0)
    col.add("g-inner/hermitian", [grid_tag, fs], len(fs), herm, tol10)
    col.add("a-inner/sandwich-lower", [grid_tag, scalars], len(scalars),
            1 / math.sqrt(2) - sandwich_lo, cfg.tolerance(1e-12))
    col.add("a-inner/sandwich-upper", [grid_tag, scalars], len(scalars),
            sandwich_hi - 1, cfg.tolerance(1e-12))

    assoc = 0.0
    triples = [(model.random_g(rng), model.random_g(rng), model.random_e(rng), model.random_scalar(rng))
               for _ in range(50)]
    for g1, g2, f, a in triples:
        assoc = max(assoc,
                    model.act_left(g1 * g2, f).distance(model.act_left(g1, model.act_left(g2, f))),
                    model.act_left(g1, model.act_right(f, a)).distance(model.act_right(model.act_left(g1, f), a)))
    col.add("module/pointwise-associativity", [grid_tag, triples], len(triples), assoc, tol12)


def suite_cstar_frobenius(cfg, col):
    rng = np.random.default_rng([cfg.seed, 3])
    tol = cfg.tolerance(1e-10)
    for i in range(cfg.correspondences):
        corr = random_correspondence(rng)
        samples = [(corr.A.random(rng), corr.random_element(rng)) for _ in range(cfg.cstar_samples)]
        rep = verify_cstar_frobenius(corr, samples, tol=tol)
        tag = repr(corr)
        col.add(f"chains/corr-{i:02d}", [tag, samples], len(samples), rep.max_residual, tol, rep.ok)

        cs = herm = lin = adj = pos = 0.0
        for a, e in samples:
            f = corr.random_element(rng)
            b = corr.B.random(rng)
            ip = corr.inner(e, f)
            cs = max(cs, FinCStar.norm(ip) - corr.norm(e) * corr.norm(f))
            herm = max(herm, FinCStar.distance(FinCStar.star(ip), corr.inner(f, e)))
            lin = max(lin, FinCStar.distance(corr.inner(e, corr.right_act(f, b)), FinCStar.multiply(ip, b))
                      / max(1.0, FinCStar.norm(ip) * FinCStar.norm(b)))
            adj = max(adj, FinCStar.distance(corr.inner(corr.left_act(a, e), f),
                                             corr.inner(e, corr.left_act(FinCStar.star(a), f)))
                      / max(1.0, FinCStar.norm(a) * corr.norm(e) * corr.norm(f)))
            pos = max(pos, -min(np.linalg.eigvalsh(blk).min() for blk in corr.inner(e, e)))
        col.add(f"inner/corr-{i:02d}/cauchy-schwarz", [tag, samples], len(samples), cs, tol)
        col.add(f"inner/corr-{i:02d}/hermitian", [tag, samples], len(samples), herm, tol)
        col.add(f"inner/corr-{i:02d}/right-linear", [tag, samples], len(samples), lin, tol)
        col.add(f"inner/corr-{i:02d}/left-action-adjointable", [tag, samples], len(samples), adj, tol)
        col.add(f"inner/corr-{i:02d}/positive", [tag, samples], len(samples), pos, tol)


def _kappa_level(corr, u):
    """Concrete ``[kappa(u_ij)]`` coefficients in the compacts space."""
    n = u.shape[0]
    basis = corr.basis()
    out = np.zeros((n, n, sum(m * m for m in corr.mults)), dtype=complex)
    for i in range(n):
        for j in range(n):
            terms = [(u[i, j, a, b] * basis[a], basis[b]) for a in range(corr.dim) for b in range(corr.dim)
                     if u[i, j, a, b] != 0]
            out[i, j] = corr.compacts_coordinates(corr.kappa(terms))
    return out


def _kappa_gap(corr, u, cfg, seed, restarts=None):
    E = corr.operator_space()
    K = corr.compacts_space()
    kn = level_norm(K, _kappa_level(corr, u))
    upper = haagerup_norm_upper(u, E, E.adjoint(), restarts=restarts or cfg.haagerup_restarts,
                                iterations=cfg.iterations, seed=seed, target=kn)
    return upper, kn


def suite_kappa_isometry(cfg, col):
    rng = np.random.default_rng([cfg.seed, 4])
    d = 3
    corr = Correspondence(FinCStar((1,)), (d,))
    eq_tol = cfg.tolerance(1e-6)
    k = 0
    for n in range(1, cfg.levels + 1):
        cases = {}
        x = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        y = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        # u_ij = x_i (x) x_j*  and  u_ij = x_i (x) y_j*  (inner length one)
        cases["rank-one/self"] = np.einsum("ia,jb->ijab", x, x.conj())
        cases["rank-one/mixed"] = np.einsum("ia,jb->ijab", x, y.conj())
        # orthonormal sums: u_ij = delta_ij sum_k e_k (x) e_k*, and x . x* with orthonormal columns
        cases["orthonormal/identity"] = np.einsum("ij,ab->ijab", np.eye(n), np.eye(d))
        p = min(2, n * d)
        Q, _ = np.linalg.qr(rng.standard_normal((n * d, p)) + 1j * rng.standard_normal((n * d, p)))
        X = Q.reshape(n, d, p)
        cases["orthonormal/isometry"] = np.einsum("iak,jbk->ijab", X, X.conj())
        for name, u in cases.items():
            upper, kn = _kappa_gap(corr, u, cfg, seed=k)
            k += 1
            col.add(f"level-{n}/{name}", u, 1, abs(upper - kn), eq_tol)
    lo_tol = cfg.tolerance(1e-8)
    worst = -np.inf
    tensors = []
    for i in range(cfg.random_tensors):
        corr_i = random_correspondence(rng)
        n = int(rng.integers(1, cfg.levels + 1))
        N = corr_i.dim
        u = rng.standard_normal((n, n, N, N)) + 1j * rng.standard_normal((n, n, N, N))
        tensors.append((repr(corr_i), u))
        upper, kn = _kappa_gap(corr_i, u, cfg, seed=i, restarts=cfg.random_restarts)
        worst = max(worst, kn - upper)
    col.add("random/upper-bound-dominates-kappa", tensors, len(tensors), worst, lo_tol)


def suite_opspace_axioms(cfg, col):
    rng = np.random.default_rng([cfg.seed, 5])
    tol = cfg.tolerance(1e-10)
    worst_a = worst_b = 0.0
    inst = []
    for _ in range(cfg.ruan_samples):
        dim, h, k = (int(v) for v in rng.integers(1, 4, size=3))
        dim = min(dim, h * k)
        X = ConcreteOpSpace(rng.standard_normal((dim, h, k)) + 1j * rng.standard_normal((dim, h, k)))
        n = int(rng.integers(1, cfg.levels + 1))
        x = X.random_level(n, rng)
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = level_norm(X, matrix_action(a, x, b))
        worst_a = max(worst_a, lhs - np.linalg.norm(a, 2) * level_norm(X, x) * np.linalg.norm(b, 2))
        y = X.random_level(int(rng.integers(1, cfg.levels + 1)), rng)
        worst_b = max(worst_b, abs(level_norm(X, direct_sum(x, y)) - max(level_norm(X, x), level_norm(X, y))))
        inst.append((X.basis, x, a, b, y))
    col.add("ruan/a-bimodule-contraction", inst, len(inst), worst_a, tol)
    col.add("ruan/b-block-diagonal-max", inst, len(inst), worst_b, tol)

    M2 = ConcreteOpSpace.matrices(2)
    opts = dict(restarts=cfg.restarts, iterations=cfg.iterations, seed=cfg.seed)
    T = CbLinearMap.from_images(M2, M2, [b.T for b in M2.basis])
    res = cb_norm_lower(T, max_level=cfg.levels, **opts)
    col.add("cb/transpose-level-1", "transpose-M2", 1, abs(res.levels[0] - 1), cfg.tolerance(1e-8))
    if cfg.levels >= 2:
        col.add("cb/transpose-level-2", "transpose-M2", 1, abs(res.levels[1] - 2), cfg.tolerance(1e-8))
    rep = max(abs(T.level_value(w) - v) for w, v in zip(res.witnesses, res.levels))
    col.add("cb/transpose-witness-reevaluation", "transpose-M2", len(res.levels), rep, tol)
    mono = max(0.0, max((a - b for a, b in zip(res.levels, res.levels[1:])), default=0.0))
    col.add("cb/transpose-monotone", "transpose-M2", len(res.levels), mono, 0.0)

    ident = cb_norm_lower(CbLinearMap(M2, M2, np.eye(4)), max_level=cfg.levels, **opts)
    col.add("cb/identity", "identity-M2", len(ident.levels), max(abs(v - 1) for v in ident.levels), cfg.tolerance(1e-8))
    zero = cb_norm_lower(CbLinearMap(M2, M2, np.zeros((4, 4))), max_level=cfg.levels, **opts)
    col.add("cb/zero", "zero-M2", len(zero.levels), max(zero.levels), 0.0)

    C2 = ConcreteOpSpace.column(2)
    col.add("level/column-unit-vector", "C2", 1, abs(level_norm(C2, [1, 0]) - 1), tol)
    blocks = direct_sum(np.array([[[1, 0]]]), np.array([[[0, 2]]]))
    col.add("level/block-diagonal-1-and-2", "C2", 1, abs(level_norm(C2, blocks) - 2), tol)
    e = np.array([3, 0])
    col.add("level/adjoint-level-1", "C2*", 1, abs(level_norm(C2.adjoint(), e) - 3), tol)
    worst = 0.0
    for _ in range(50):
        X = ConcreteOpSpace(rng.standard_normal((3, 2, 3)) + 1j * rng.standard_normal((3, 2, 3)))
        Xs = X.adjoint()
        n = int(rng.integers(1, cfg.levels + 1))
        c = Xs.random_level(n, rng)
        worst = max(worst, abs(level_norm(Xs, c) - np.linalg.norm(Xs.assemble(c), 2)))
    col.add("level/adjoint-transpose-pattern-vs-dagger-basis", "random", 50, worst, tol)


_RUNNERS = {
    "schwartz-frobenius": suite_schwartz_frobenius,
    "schwartz-bernstein": suite_schwartz_bernstein,
    "opalg-bernstein": suite_opalg_bernstein,
    "cstar-frobenius": suite_cstar_frobenius,
    "kappa-isometry": suite_kappa_isometry,
    "opspace-axioms": suite_opspace_axioms,
}
assert set(_RUNNERS) == set(SUITES)


def run(cfg):
    """Run the configured suites and return a :class:`SuiteReport`.

    Raises :class:`NumericFailure` (carrying the partial report) if a suite
    breaks down numerically.
    """
    records = []
    for name in cfg.suites():
        col = _Collector(name, [])
        try:
            with np.errstate(all="ignore"):
                _RUNNERS[name](cfg, col)
        except (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError, OverflowError) as exc:
            records.extend(col.records)
            raise NumericFailure(f"{name}: {exc}", SuiteReport(cfg, _sorted(records))) from exc
        records.extend(col.records)
    return SuiteReport(cfg, _sorted(records))


def _sorted(records):
    return sorted(records, key=lambda r: (r.suite, r.case))


def _num(v):
    return repr(float(v))


def format_report(report, partial=False):
    lines = [f"# {REPORT_FORMAT}", f"# version {__version__}"]
    lines.append("# config " + " ".join(f"{k}={v}" for k, v in report.config.items()))
    for r in report.records:
        lines.append(
            f"suite={r.suite}\tcase={r.case}\tdigest={r.digest}\tn={r.n}"
            f"\tmeasured={_num(r.measured)}\tbound={_num(r.bound)}\tpass={int(r.passed)}"
        )
    failed = len(report.failed)
    lines.append(
        f"# summary sections={len(report.sections())} checks={len(report.records)} "
        f"passed={len(report.records) - failed} failed={failed}" + (" partial=1" if partial else "")
    )
    return "\n".join(lines) + "\n"

"""Named verification suites run by ``fockalg verify``.

Each suite returns a list of :class:`Check` rows in a fixed order; a suite
passes when every row passes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock, gaussian, operators, wiener
from .fock import Context, FockElement
from .multiindex import enumerate_indices, factorial
from .space import random_in_ball, random_unitary, unitary_cm

SUITES = ("moments", "kernel", "algebra", "ccr", "triple")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    threshold: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.threshold - self.value


@dataclass
class SuiteResult:
    checks: list = field(default_factory=list)
    mc_rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _rng(seed: int, tag: str):
    return np.random.default_rng([seed, sum(tag.encode())])


def _points(ctx: Context, n: int, rng, rmax: float):
    S = ctx.spectrum
    return [random_in_ball(S, float(rng.uniform(0.05, rmax)), rng) for _ in range(n)]


def moments(ctx: Context, seeds, M: int, sigma: float = 4.0, max_degree: int = 3) -> SuiteResult:
    """MC moments of all monomial pairs against ``delta_IJ I! k^(2I)``."""
    out = SuiteResult()
    S = ctx.spectrum
    idx = enumerate_indices(ctx.dims, min(max_degree, ctx.cap))
    analytic = np.diag([factorial(I) * float(np.prod(S.k[: len(I)] ** (2 * np.asarray(I))))
                        for I in idx])
    for seed in seeds:
        batch = gaussian.sample(S, M, seed)
        est, se = gaussian.mc_moment_matrix(idx, batch)
        worst = 0.0
        for a, I in enumerate(idx):
            for b, J in enumerate(idx):
                err = abs(est[a, b] - analytic[a, b])
                ok = err <= sigma * se[a, b]
                worst = max(worst, err / se[a, b] if se[a, b] > 0 else (0.0 if err == 0 else np.inf))
                out.mc_rows.append((f"moment {list(I)} {list(J)}", float(analytic[a, b]),
                                    complex(est[a, b]), float(se[a, b]), M, seed, bool(ok)))
        out.checks.append(Check("moments", f"max z-score seed={seed}", worst, sigma,
                                worst <= sigma))
    return out


def kernel(ctx: Context, seed: int, points=(), n_pairs: int = 100, rtol: float = 1e-10) -> SuiteResult:
    out = SuiteResult()
    rng = _rng(seed, "kernel")
    pts = list(points) + _points(ctx, 2 * n_pairs, rng, 0.7)
    S = ctx.spectrum
    worst = 0.0
    for a in range(0, len(pts) - 1, 2):
        xi, eta = pts[a], pts[a + 1]
        diff = abs(fock.kernel_eval_closed(xi, eta, ctx) - fock.kernel_eval_series(xi, eta, ctx))
        worst = max(worst, diff)
    out.checks.append(Check("kernel", "closed vs series", worst, rtol, worst <= rtol))

    worst = 0.0
    for a in range(min(n_pairs, len(pts))):
        f = fock.random_element(ctx, rng)
        lhs = fock.inner_A(fock.kernel_section(pts[a], ctx), f)
        worst = max(worst, abs(lhs - fock.evaluate(f, pts[a])) / (1 + fock.norm_A(f)))
    out.checks.append(Check("kernel", "reproducing property", worst, rtol, worst <= rtol))

    g = fock.gram_psd_check(pts[:32], ctx)
    out.checks.append(Check("kernel", "gram min eigenvalue", -g.min_eigenvalue,
                            rtol * g.norm, g.psd))

    worst = 0.0
    for u in range(20):
        U = random_unitary(ctx.dims, rng)
        xi, eta = pts[2 * u], pts[2 * u + 1]
        a = fock.kernel_eval_closed(xi, eta, ctx)
        b = fock.kernel_eval_closed(unitary_cm(xi, S, U), unitary_cm(eta, S, U), ctx)
        worst = max(worst, abs(a - b))
    out.checks.append(Check("kernel", "unitary invariance", worst, rtol, worst <= rtol))
    return out


def algebra(ctx: Context, seed: int, n_pairs: int = 200, rtol: float = 1e-10) -> SuiteResult:
    out = SuiteResult()
    rng = _rng(seed, "algebra")
    cert = wiener.subconv_certificate(ctx.cone)
    S = ctx.spectrum
    worst_ratio = 0.0
    worst_hom = 0.0
    worst_comm = 0.0
    for _ in range(n_pairs):
        df = int(rng.integers(0, ctx.cap + 1))
        f = fock.random_element(ctx, rng, max_degree=df, positive=True)
        g = fock.random_element(ctx, rng, max_degree=ctx.cap - df, positive=True)
        fg = fock.multiply(f, g)
        worst_ratio = max(worst_ratio, fock.norm_A(fg) / (fock.norm_A(f) * fock.norm_A(g)))
        xi = random_in_ball(S, float(rng.uniform(0.05, 0.95)), rng)
        lhs = fock.evaluate(fg, xi)
        rhs = fock.evaluate(f, xi) * fock.evaluate(g, xi)
        worst_hom = max(worst_hom, abs(lhs - rhs) / max(1.0, abs(rhs)))
        gf = fock.multiply(g, f)
        worst_comm = max(worst_comm, fock.norm_A(fg - gf) / fock.norm_A(fg))
    out.checks.append(Check("algebra", "product norm ratio vs C_N", worst_ratio, cert.C_N,
                            worst_ratio <= cert.C_N))
    out.checks.append(Check("algebra", "evaluation homomorphism", worst_hom, rtol,
                            worst_hom <= rtol))
    out.checks.append(Check("algebra", "commutativity", worst_comm, rtol, worst_comm <= rtol))
    return out


def ccr(ctx: Context, seed: int, n_elements: int = 100, rtol: float = 1e-11,
        adj_tol: float = 1e-12) -> SuiteResult:
    out = SuiteResult()
    rng = _rng(seed, "ccr")
    if ctx.cap < 2:
        out.checks.append(Check("ccr", "cap too small for bracket", 1.0, 0.0, False))
        return out
    worst = 0.0
    for _ in range(n_elements):
        f = fock.random_element(ctx, rng, max_degree=ctx.cap - 2)
        nf = fock.norm_A(f)
        for j in range(1, ctx.dims + 1):
            worst = max(worst, operators.ccr_defect(j, f) / nf)
    out.checks.append(Check("ccr", "twisted CCR defect", worst, rtol, worst <= rtol))
    adj = adjointness_defect(ctx)
    out.checks.append(Check("ccr", "adjointness on monomials", adj, adj_tol, adj <= adj_tol))
    return out


def adjointness_defect(ctx: Context) -> float:
    """Max relative ``|<a_j f, g> - <f, a_j^dagger g>|`` over basis pairs, ``deg g <= N-1``."""
    B = ctx.basis
    mons = [FockElement.monomial(I, ctx) for I in B.indices]
    norms = np.sqrt(ctx.a_sq)
    scale = np.outer(norms, norms)
    ok_g = B.degrees <= ctx.cap - 1
    worst = 0.0
    for j in range(1, ctx.dims + 1):
        # columns: images of basis monomials
        down = np.stack([operators.annihilate(j, m).to_dense() for m in mons], axis=1)
        up = np.stack([operators.create(j, m).to_dense() for m in mons], axis=1)
        # lhs[p, q] = <a_j e_p, e_q>_A,  rhs[p, q] = <e_p, a_j^dagger e_q>_A
        lhs = down.conj().T * ctx.a_sq[None, :]
        rhs = up * ctx.a_sq[:, None]
        diff = np.abs(lhs - rhs) / scale
        worst = max(worst, float(diff[:, ok_g].max()))
    return worst


def triple(ctx: Context, seed: int, n_elements: int = 100, rtol: float = 1e-12) -> SuiteResult:
    out = SuiteResult()
    rng = _rng(seed, "triple")
    worst_iso = 0.0
    worst_chain = 0.0
    W = ctx.W
    for _ in range(n_elements):
        f = fock.random_element(ctx, rng)
        t = fock.triple_norms(f)
        worst_iso = max(worst_iso, abs(fock.norm_A(operators.apply_T_half(f)) - t.norm_L2)
                        / t.norm_L2)
        worst_chain = max(worst_chain, t.norm_A / (W * t.norm_L2) - 1,
                          t.norm_L2 / (W * t.norm_hat) - 1)
    out.checks.append(Check("triple", "T^1/2 isometry", worst_iso, rtol, worst_iso <= rtol))
    out.checks.append(Check("triple", "Gelfand chain excess", worst_chain, rtol,
                            worst_chain <= rtol))
    return out

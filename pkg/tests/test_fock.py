import json
import math

import numpy as np
import pytest

from fockalg.errors import ContextMismatch, DomainError
from fockalg.fock import (Context, FockElement, evaluate, gram_psd_check, inner_A,
                          kernel_eval_closed, kernel_eval_series, kernel_section,
                          kernel_series_shells, kernel_truncation_bound, monomial_norm_A,
                          multiply, norm_A, norm_hat, norm_L2, random_element,
                          symmetric_tensor_norm, triple_norms)
from fockalg.multiindex import MultiIndex, enumerate_indices, factorial
from fockalg.space import HVector, cm_norm, pairing, random_in_ball, random_unitary, unitary_cm
from fockalg.wiener import make_geometric, make_tau_p, subconv_certificate


def mono(I, ctx, c=1.0):
    return FockElement.monomial(I, ctx, c)


def test_monomial_norm_examples(hardy_ctx):
    ctx = Context.build([0.8, 0.5], make_tau_p(1.0, 0.5, 4))
    assert monomial_norm_A((), ctx) == 1.0
    for n in range(11):
        assert monomial_norm_A((n,), hardy_ctx) == pytest.approx(1.0, rel=1e-14)
    ctx2 = Context.build([0.5, 0.2], make_tau_p(1.0, 1.0, 4))
    assert monomial_norm_A((1, 1), ctx2) ** 2 == pytest.approx(0.005 * math.e**2, rel=1e-14)
    with pytest.raises(DomainError):
        monomial_norm_A((5,), ctx)


def test_three_norms_on_hardy_monomials(hardy_ctx):
    for n in range(11):
        f = mono((n,), hardy_ctx)
        assert norm_A(f) == pytest.approx(1.0, rel=1e-14)
        assert norm_L2(f) == pytest.approx(math.sqrt(math.factorial(n)), rel=1e-14)
        assert norm_hat(f) == pytest.approx(math.factorial(n), rel=1e-14)
    one = mono((), hardy_ctx)
    assert norm_L2(one) == 1.0


def test_orthogonality(ref_ctx):
    idx = enumerate_indices(3, 3)
    for I in idx:
        for J in idx:
            v = inner_A(mono(I, ref_ctx), mono(J, ref_ctx))
            if I != J:
                assert v == 0
            else:
                assert v.real == pytest.approx(monomial_norm_A(I, ref_ctx) ** 2, rel=1e-14)


def test_inner_A_sesquilinear(ref_ctx, rng):
    f, g = random_element(ref_ctx, rng), random_element(ref_ctx, rng)
    c = 0.4 + 1.3j
    assert inner_A(c * f, g) == pytest.approx(np.conj(c) * inner_A(f, g), rel=1e-13)
    assert inner_A(f, c * g) == pytest.approx(c * inner_A(f, g), rel=1e-13)
    assert inner_A(f, f).real == pytest.approx(norm_A(f) ** 2, rel=1e-13)


def test_theta_correspondence(ref_ctx):
    k = ref_ctx.spectrum.k
    for I in enumerate_indices(3, 8):
        direct = math.sqrt(factorial(I)) * np.prod([k[j] ** e for j, e in enumerate(I)])
        assert norm_L2(mono(I, ref_ctx)) == pytest.approx(symmetric_tensor_norm(I, k), rel=1e-14)
        assert symmetric_tensor_norm(I, k) == pytest.approx(direct, rel=1e-14)


def test_evaluate_examples(ref_ctx):
    xi = random_in_ball(ref_ctx.spectrum, 0.6, 4)
    assert evaluate(mono((), ref_ctx), xi) == 1
    assert evaluate(mono((1,), ref_ctx), HVector([0.3, 0, 0])) == 0.3
    with pytest.raises(DomainError):
        evaluate(mono((1,), ref_ctx), HVector([0.9, 0, 0]))
    edge = HVector([0.8, 0, 0])
    assert evaluate(mono((2,), ref_ctx), edge) == pytest.approx(0.64)


def test_evaluate_matches_direct_power_sum(ref_ctx, rng):
    f = random_element(ref_ctx, rng, normalize=None)
    xi = random_in_ball(ref_ctx.spectrum, 0.7, 5)
    direct = sum(a * np.prod([xi.alpha[j] ** e for j, e in enumerate(I)])
                 for I, a in f.terms.items())
    assert evaluate(f, xi) == pytest.approx(direct, rel=1e-12)


def test_multiply_examples(ref_ctx, rng):
    assert multiply(mono((1, 0), ref_ctx), mono((0, 1), ref_ctx)).terms == {MultiIndex((1, 1)): 1}
    f = random_element(ref_ctx, rng)
    fu = multiply(f, mono((), ref_ctx))
    assert fu.allclose(f, rtol=0) and not fu.truncated


def test_multiply_truncation_flag(ref_ctx):
    a = mono((4,), ref_ctx)
    b = mono((0, 5), ref_ctx)
    p = multiply(a, b)
    assert p.truncated and len(p) == 0
    assert not multiply(mono((4,), ref_ctx), mono((0, 4), ref_ctx)).truncated


def test_multiply_matches_dictionary_convolution(ref_ctx, rng):
    f = random_element(ref_ctx, rng, max_degree=4, density=0.5)
    g = random_element(ref_ctx, rng, max_degree=4, density=0.5)
    expect = {}
    for I, a in f.terms.items():
        for J, b in g.terms.items():
            K = I + J
            expect[K] = expect.get(K, 0) + a * b
    fg = multiply(f, g)
    assert set(fg.terms) == {K for K, v in expect.items() if v != 0}
    for K, v in expect.items():
        assert fg.coeff(K) == pytest.approx(v, rel=1e-13)


def test_multiply_commutative_associative(ref_ctx, rng):
    f = random_element(ref_ctx, rng, max_degree=3)
    g = random_element(ref_ctx, rng, max_degree=2)
    h = random_element(ref_ctx, rng, max_degree=3)
    assert multiply(f, g).allclose(multiply(g, f), rtol=1e-14)
    assert multiply(multiply(f, g), h).allclose(multiply(f, multiply(g, h)), rtol=1e-12)


def test_evaluation_homomorphism(ref_ctx, rng):
    S = ref_ctx.spectrum
    for _ in range(100):
        df = int(rng.integers(0, 9))
        f = random_element(ref_ctx, rng, max_degree=df)
        g = random_element(ref_ctx, rng, max_degree=8 - df)
        fg = multiply(f, g)
        assert not fg.truncated
        xi = random_in_ball(S, float(rng.uniform(0.1, 0.99)), rng)
        rhs = evaluate(f, xi) * evaluate(g, xi)
        assert abs(evaluate(fg, xi) - rhs) <= 1e-10 * max(1, abs(rhs))


def test_product_norm_bounded_by_subconvolution_constant(ref_ctx, rng):
    C = subconv_certificate(ref_ctx.cone).C_N
    worst = 0
    for _ in range(200):
        df = int(rng.integers(0, 9))
        f = random_element(ref_ctx, rng, max_degree=df, positive=True)
        g = random_element(ref_ctx, rng, max_degree=8 - df, positive=True)
        worst = max(worst, norm_A(multiply(f, g)) / (norm_A(f) * norm_A(g)))
    # Cauchy-Schwarz on the convolution gives the sharper sqrt(C)
    assert worst <= math.sqrt(C)


def test_kernel_section(ref_ctx, rng):
    S = ref_ctx.spectrum
    K0 = kernel_section(HVector.zero(3), ref_ctx)
    assert K0.terms == {MultiIndex(): 1 / ref_ctx.w2[0]}
    for _ in range(20):
        xi = random_in_ball(S, float(rng.uniform(0, 0.99)), rng)
        f = random_element(ref_ctx, rng)
        Kx = kernel_section(xi, ref_ctx)
        assert abs(inner_A(Kx, f) - evaluate(f, xi)) <= 1e-10 * abs(evaluate(f, xi)) + 1e-15
        assert norm_A(Kx) ** 2 == pytest.approx(kernel_eval_series(xi, xi, ref_ctx).real,
                                                rel=1e-13)
        eta = random_in_ball(S, 0.5, rng)
        assert evaluate(Kx, eta) == pytest.approx(kernel_eval_series(xi, eta, ref_ctx), rel=1e-12)
    with pytest.raises(DomainError):
        kernel_section(HVector([1.0, 0, 0]), ref_ctx)


def test_kernel_closed_examples(ref_ctx):
    S = ref_ctx.spectrum
    xi = random_in_ball(S, 0.6, 11)
    assert kernel_eval_closed(xi, HVector.zero(3), ref_ctx) == ref_ctx.cone[0]
    ctx = Context.build([0.8, 0.5, 0.3], make_geometric(1.0, 60))
    eta = random_in_ball(S, 0.7, 12)
    p = pairing(xi, eta, S)
    exact = 1 / (1 - p)
    assert abs(kernel_eval_closed(xi, eta, ctx) - exact) <= tail_from_modulus(abs(p), 60)


def tail_from_modulus(q, N):
    return q ** (N + 1) / (1 - q)


def test_kernel_shells_are_multinomial(ref_ctx, rng):
    S = ref_ctx.spectrum
    xi, eta = random_in_ball(S, 0.7, rng), random_in_ball(S, 0.5, rng)
    p = pairing(xi, eta, S)
    shells = kernel_series_shells(xi, eta, ref_ctx)
    assert shells[0] == ref_ctx.cone[0]
    assert shells[1] == pytest.approx(ref_ctx.cone[1] * p, rel=1e-14)
    for n in range(9):
        assert shells[n] == pytest.approx(ref_ctx.cone[n] * p**n, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("d, N", [(1, 24), (2, 24), (3, 24), (6, 12)])
def test_kernel_identity_across_dimensions(d, N, rng):
    k = np.linspace(0.9, 0.2, d)
    ctx = Context.build(k, make_tau_p(1.0, 0.5, N))
    for _ in range(10):
        xi = random_in_ball(ctx.spectrum, float(rng.uniform(0, 0.7)), rng)
        eta = random_in_ball(ctx.spectrum, float(rng.uniform(0, 0.7)), rng)
        diff = abs(kernel_eval_closed(xi, eta, ctx) - kernel_eval_series(xi, eta, ctx))
        assert diff <= max(1e-10, kernel_truncation_bound(xi, eta, ctx))


def test_kernel_hermitian_and_unitary_invariant(ref_ctx, rng):
    S = ref_ctx.spectrum
    for s in range(20):
        xi, eta = random_in_ball(S, 0.8, rng), random_in_ball(S, 0.9, rng)
        k1 = kernel_eval_closed(xi, eta, ref_ctx)
        assert k1 == pytest.approx(np.conj(kernel_eval_closed(eta, xi, ref_ctx)), rel=1e-14)
        U = random_unitary(3, s)
        k2 = kernel_eval_closed(unitary_cm(xi, S, U), unitary_cm(eta, S, U), ref_ctx)
        assert abs(k1 - k2) <= 1e-10


def test_gram(ref_ctx, rng):
    S = ref_ctx.spectrum
    xi = random_in_ball(S, 0.5, 1)
    one = gram_psd_check([xi], ref_ctx)
    assert one.min_eigenvalue == pytest.approx(ref_ctx.cone(0.25).real, rel=1e-14)
    assert one.min_eigenvalue > 0
    twice = gram_psd_check([xi, xi], ref_ctx)
    assert abs(twice.min_eigenvalue) <= 1e-12 * twice.norm and twice.psd
    pts = [random_in_ball(S, float(rng.uniform(0, 0.99)), rng) for _ in range(32)]
    assert gram_psd_check(pts, ref_ctx).psd
    with pytest.raises(ValueError):
        gram_psd_check(pts * 3, ref_ctx)


def test_gelfand_chain(ref_ctx, rng):
    for _ in range(50):
        f = random_element(ref_ctx, rng, normalize=None)
        assert triple_norms(f).chain_holds(1e-12)


def test_context_mismatch(ref_ctx):
    other = Context.build([0.8, 0.5, 0.3], make_tau_p(1.0, 0.5, 7))
    with pytest.raises(ContextMismatch):
        inner_A(mono((), ref_ctx), mono((), other))
    with pytest.raises(ContextMismatch):
        multiply(mono((), ref_ctx), mono((), other))


def test_invalid_terms(ref_ctx):
    with pytest.raises(ValueError):
        mono((9,), ref_ctx)
    with pytest.raises(ValueError):
        mono((0, 0, 0, 1), ref_ctx)
    assert len(FockElement({MultiIndex((1,)): 0.0}, ref_ctx)) == 0


def test_json_roundtrip_is_bit_exact(ref_ctx, rng):
    f = random_element(ref_ctx, rng, density=0.3)
    text = f.to_json()
    g = FockElement.from_json(text)
    assert g.ctx == f.ctx
    assert np.array_equal(g.to_dense(), f.to_dense())
    assert g.to_json() == text
    d = json.loads(text)
    assert set(d["context"]) == {"spectrum", "cone", "cap", "dims"}
    degrees = [sum(t["index"]) for t in d["terms"]]
    assert degrees == sorted(degrees)

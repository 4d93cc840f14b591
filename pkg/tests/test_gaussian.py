import csv
import io
import math

import numpy as np
import pytest

from fockalg.fock import Context, FockElement, evaluate, norm_L2, random_element
from fockalg.gaussian import (CHUNK, CSV_COLUMNS, csv_rows, jackknife_mean, mc_l2_norm,
                              mc_l2_norms, mc_moment, mc_moment_matrix, mc_T_apply,
                              mc_T_apply_many, sample)
from fockalg.multiindex import enumerate_indices, factorial
from fockalg.space import HVector, Spectrum, random_in_ball
from fockalg.wiener import make_tau_p

S3 = Spectrum([0.8, 0.5, 0.3])


def test_sample_shape_and_second_moments():
    b = sample(S3, 200_000, 1)
    assert b.points.shape == (200_000, 3) and b.M == 200_000
    var = np.mean(np.abs(b.points) ** 2, axis=0)
    assert np.allclose(var, S3.k**2, rtol=0.02)
    # circular: E z^2 = 0
    assert np.all(np.abs(np.mean(b.points**2, axis=0)) < 0.01)


def test_determinism_chunk_and_thread_invariance():
    a = sample(S3, 3 * CHUNK + 17, 42)
    b = sample(S3, 3 * CHUNK + 17, 42, threads=4)
    assert np.array_equal(a.points, b.points)
    c = sample(S3, CHUNK + 5, 42)
    assert np.array_equal(a.points[: CHUNK + 5], c.points)
    assert not np.array_equal(sample(S3, 100, 43).points, a.points[:100])
    with pytest.raises(ValueError):
        sample(S3, 0, 1)


def test_jackknife_closed_form_matches_leave_one_out(rng):
    x = rng.normal(size=50) + 1j * rng.normal(size=50)
    est = jackknife_mean(x)
    loo = np.array([(x.sum() - v) / 49 for v in x])
    var = 49 / 50 * np.sum(np.abs(loo - loo.mean()) ** 2)
    assert est.estimate == pytest.approx(x.mean(), rel=1e-14)
    assert est.std_error == pytest.approx(math.sqrt(var), rel=1e-12)


def test_moment_examples():
    b = sample(S3, 100_000, 3)
    one = mc_moment((), (), b)
    assert one.estimate == 1 and one.std_error == 0
    S1 = Spectrum([0.5])
    e = mc_moment((2,), (2,), sample(S1, 400_000, 4))
    assert e.within(0.125, 4)
    assert mc_moment((1,), (0, 1), b).within(0.0, 4)


def test_moment_matrix_agrees_with_single_moments():
    b = sample(S3, 20_000, 5)
    idx = enumerate_indices(3, 2)
    est, se = mc_moment_matrix(idx, b)
    for a, I in enumerate(idx):
        for c, J in enumerate(idx):
            m = mc_moment(I, J, b)
            assert est[a, c] == pytest.approx(m.estimate, rel=1e-12, abs=1e-15)
            assert se[a, c] == pytest.approx(m.std_error, rel=1e-9, abs=1e-15)


def test_clt_coverage_over_seeds():
    # 2-sigma band should hold for roughly 95% of seeds
    hits = sum(mc_moment((1,), (1,), sample(S3, 5000, s)).within(0.64, 2) for s in range(200))
    assert 0.90 <= hits / 200 <= 0.99


def test_variance_scaling():
    Ms = [2000, 8000, 32000, 128000]
    se = [mc_moment((1, 1), (1, 1), sample(S3, M, 7)).std_error for M in Ms]
    slope = np.polyfit(np.log(Ms), np.log(np.square(se)), 1)[0]
    assert abs(slope + 1) <= 0.1


def test_l2_norms(ref_ctx, rng):
    b = sample(ref_ctx.spectrum, 400_000, 8)
    fs = [random_element(ref_ctx, rng, max_degree=3, normalize="L2") for _ in range(5)]
    ests = mc_l2_norms(fs, b)
    for f, e in zip(fs, ests):
        assert e.within(norm_L2(f) ** 2, 4)
    assert mc_l2_norm(fs[0], b).estimate == ests[0].estimate
    assert all(e.estimate.imag == 0 for e in ests)


def test_T_apply_constant_and_linear():
    lam = make_tau_p(1.0, 0.5, 8)
    ctx = Context.build([0.8, 0.5], lam)
    S = ctx.spectrum
    b = sample(S, 400_000, 9)
    eta = random_in_ball(S, 0.6, 10)
    e0 = mc_T_apply(lam, (), eta, b)
    assert e0.within(lam[0], 4)
    e1 = mc_T_apply(lam, (1,), eta, b)
    assert e1.within(lam[1] * eta.alpha[0], 4)
    many = mc_T_apply_many(lam, [(), (1,)], eta, b)
    assert many[1].estimate == pytest.approx(e1.estimate, rel=1e-12)
    with pytest.raises(ValueError):
        mc_T_apply(lam, (9,), eta, b)


def test_T_apply_matches_weight_rescaling():
    lam = make_tau_p(1.0, 0.5, 6)
    ctx = Context.build([0.8, 0.5], lam)
    b = sample(ctx.spectrum, 400_000, 11)
    eta = random_in_ball(ctx.spectrum, 0.5, 12)
    idx = enumerate_indices(2, 3)
    for J, est in zip(idx, mc_T_apply_many(lam, idx, eta, b)):
        expect = evaluate(FockElement.monomial(J, ctx), eta) / ctx.w2[sum(J)]
        assert est.within(expect, 4)


def test_csv():
    text = csv_rows([("moment [1] [1]", 0.64, 0.6401 + 0j, 0.001, 1000, 3, True)])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][0] == "moment [1] [1]" and rows[1][-1] == "true"
    assert complex(rows[1][2]) == 0.6401

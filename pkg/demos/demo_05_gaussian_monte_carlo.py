"""
Monte Carlo checks against the Gaussian measure
===============================================

Samples are drawn from counter-based streams, so a run is reproducible for
any thread count.  Estimates carry jackknife standard errors.
"""
import numpy as np

from fockalg import Context, FockElement, Spectrum, evaluate, make_tau_p, random_in_ball
from fockalg.gaussian import mc_moment_matrix, mc_T_apply_many, sample
from fockalg.multiindex import enumerate_indices

S = Spectrum([0.8, 0.5])
batch = sample(S, 10**6, seed=0)
idx = enumerate_indices(2, 2)
est, se = mc_moment_matrix(idx, batch)

# monomials are orthogonal with norm^2 I! k^(2I)
print("indices:", [tuple(I) for I in idx])
print("diagonal estimates:", np.round(est.diagonal().real, 4))
print("largest off-diagonal |z|:", np.max(np.abs(est - np.diag(est.diagonal())) / np.where(se > 0, se, 1)))

# the kernel integral operator divides each monomial by w(|J|)^2
ctx = Context.build(S.k, make_tau_p(1.0, 0.5, 8))
eta = random_in_ball(S, 0.5, 7)
for J, e in zip(idx, mc_T_apply_many(ctx.cone, idx, eta, batch)):
    exact = evaluate(FockElement.monomial(J, ctx), eta) / ctx.w2[sum(J)]
    print(f"J = {tuple(J)}: z = {e.zscore(exact):.2f}")

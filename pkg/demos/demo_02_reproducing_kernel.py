"""
Reproducing kernel on the Cameron-Martin ball
=============================================

Points are coordinate vectors ``alpha``; the ball is ``sum |alpha_j/k_j|^2 <= 1``.
The kernel is the cone series evaluated at the Cameron-Martin pairing.
"""
import numpy as np

from fockalg import (Context, evaluate, gram_psd_check, inner_A, kernel_eval_closed,
                     kernel_eval_series, kernel_section, make_tau_p, random_element,
                     random_in_ball)

ctx = Context.build([0.8, 0.5, 0.3], make_tau_p(1.0, 0.5, 24))
rng = np.random.default_rng(1)
xi = random_in_ball(ctx.spectrum, 0.6, rng)
eta = random_in_ball(ctx.spectrum, 0.7, rng)

# closed form against the shell-by-shell monomial sum
print("closed:", kernel_eval_closed(xi, eta, ctx))
print("series:", kernel_eval_series(xi, eta, ctx))

# inner products with the kernel section evaluate functions
f = random_element(ctx, rng, max_degree=6)
print("<K_xi, f> =", inner_A(kernel_section(xi, ctx), f))
print("f(xi)     =", evaluate(f, xi))

# the kernel is positive definite
pts = [random_in_ball(ctx.spectrum, r, rng) for r in rng.uniform(0, 0.99, 32)]
print("smallest Gram eigenvalue:", gram_psd_check(pts, ctx).min_eigenvalue)

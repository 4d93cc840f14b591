"""
Products of elements
====================

Multiplication is pointwise on the ball and coefficient convolution on
monomials.  The norm of a product is controlled by the certificate constant.
"""
import numpy as np

from fockalg import (Context, evaluate, make_geometric, make_tau_p, multiply, norm_A,
                     random_element, random_in_ball, subconv_certificate)

rng = np.random.default_rng(3)
k = [0.8, 0.5, 0.3]


def worst_ratio(ctx, pairs=100):
    out = 0.0
    for _ in range(pairs):
        df = int(rng.integers(0, ctx.cap + 1))
        f = random_element(ctx, rng, max_degree=df, positive=True)
        g = random_element(ctx, rng, max_degree=ctx.cap - df, positive=True)
        out = max(out, norm_A(multiply(f, g)) / (norm_A(f) * norm_A(g)))
    return out


ctx = Context.build(k, make_tau_p(1.0, 0.5, 8))
f, g = random_element(ctx, rng, max_degree=4), random_element(ctx, rng, max_degree=4)
xi = random_in_ball(ctx.spectrum, 0.9, rng)
print("(fg)(xi) =", evaluate(multiply(f, g), xi))
print("f(xi)g(xi) =", evaluate(f, xi) * evaluate(g, xi))

print("tau_p: worst ratio", worst_ratio(ctx), "vs C_N", subconv_certificate(ctx.cone).C_N)

# the geometric weights give no uniform bound
for N in (4, 8, 12, 16):
    print(f"geometric(1), N = {N:2d}: worst ratio",
          round(worst_ratio(Context.build(k, make_geometric(1.0, N))), 3))

# products past the cap are dropped and flagged
print("truncated:", multiply(random_element(ctx, rng), random_element(ctx, rng)).truncated)

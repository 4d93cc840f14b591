"""
Three norms
===========

The weighted norm, the Gaussian L2 norm and the dual norm differ by the
weights ``w(n)``; ``T^(1/2)`` maps L2 isometrically onto the weighted space.
"""
import numpy as np

from fockalg import Context, make_tau_p, random_element
from fockalg.fock import norm_A, triple_norms
from fockalg.operators import apply_T_half

ctx = Context.build([0.8, 0.5, 0.3], make_tau_p(1.0, 0.5, 8))
rng = np.random.default_rng(6)
print("W = max w(n) =", ctx.W)
for _ in range(5):
    f = random_element(ctx, rng, normalize=None)
    t = triple_norms(f)
    print(f"A {t.norm_A:9.4f} <= W L2 {ctx.W * t.norm_L2:9.4f} <= W^2 hat "
          f"{ctx.W**2 * t.norm_hat:9.4f}   |f|_L2 {t.norm_L2:.6f} = |T^1/2 f|_A "
          f"{norm_A(apply_T_half(f)):.6f}")

"""
Creation, annihilation and coherent states
==========================================

``a_j^dagger`` multiplies by ``z_j / k_j`` and ``a_j`` is its adjoint.  The
plain commutator depends on the degree; conjugating ``a_j`` by the weight
operator ``D`` restores the canonical relation.
"""
import numpy as np

from fockalg import (Context, FockElement, HVector, annihilate, ccr_defect,
                     coherent_eigencheck, create, make_tau_p, norm_A, random_element)

ctx = Context.build([0.8, 0.5, 0.3], make_tau_p(1.0, 0.5, 8))
rng = np.random.default_rng(4)

z2 = FockElement.monomial((2,), ctx)
print("a_1^dagger z^(2) =", create(1, z2).terms)
print("a_1 z^(2)        =", annihilate(1, z2).terms)

f = random_element(ctx, rng, max_degree=6)
print("twisted CCR defect / |f|:", max(ccr_defect(j, f) for j in (1, 2, 3)) / norm_A(f))

# kernel sections are approximate eigenvectors of a_j; only the top shell spoils it
eta = HVector([0.6 * 0.8, 0, 0])
for N in (8, 12, 16, 20, 24):
    chk = coherent_eigencheck(1, eta, Context.build([0.8, 0.5, 0.3], make_tau_p(1.0, 0.5, N)))
    print(f"N = {N:2d}: eigenvalue {chk.eigenvalue_est.real:.8f} "
          f"(exact {chk.expected.real}), residual {chk.residual:.2e}")

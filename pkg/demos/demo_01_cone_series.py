"""
Cone series and the subconvolution certificate
==============================================

A cone series ``Lambda(t) = sum lambda_n t^n`` fixes the weights of the
space.  The space is an algebra when the self-convolution of the
coefficients stays within a constant multiple of the coefficients.
"""
import numpy as np

from fockalg import make_delta, make_geometric, make_tau_p, subconv_certificate, tail_bound

# the stretched exponential exp(-sqrt(n)) is subconvolutive
lam = make_tau_p(1.0, 0.5, 256)
cert = subconv_certificate(lam)
print("tau_p(1, 0.5): C_N =", round(cert.C_N, 6), " plateau:", cert.plateau)
print("ratio attains its max at n =", int(np.argmax(cert.ratios)))

# the geometric series has ratios n + 1, so no constant works
geo = subconv_certificate(make_geometric(1.0, 64))
print("geometric(1): last ratios", geo.ratios[-3:], " plateau:", geo.plateau)

# the constant series is trivially an algebra
print("delta: C_N =", subconv_certificate(make_delta(16)).C_N)

# tail of the kernel series past degree N at radius r
for N in (8, 16, 32, 64):
    print(f"tail bound at r = 1, N = {N:2d}:", tail_bound(lam, 1.0, N))

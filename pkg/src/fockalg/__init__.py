"""Reproducing kernel Hilbert algebras of power series on a Gaussian Hilbert space,
truncated to finitely many coordinates and a finite total degree."""

from .errors import ContextMismatch, DomainError
from .multiindex import MultiIndex, enumerate_indices
from .wiener import (ConeSeries, convolve, make_delta, make_exponential, make_geometric,
                     make_tau_p, subconv_certificate, tail_bound)
from .space import (HVector, Spectrum, cm_norm, h_norm, in_ball, pairing, random_in_ball,
                    random_unitary, unitary_cm)
from .fock import (Context, FockElement, evaluate, gram_psd_check, inner_A,
                   kernel_eval_closed, kernel_eval_series, kernel_section, monomial_norm_A,
                   multiply, norm_A, norm_hat, norm_L2, random_element)
from .operators import (annihilate, apply_D, apply_D_inv, apply_T, apply_T_half, ccr_defect,
                        coherent_eigencheck, create, gl_derivative)

__version__ = "0.1.0"

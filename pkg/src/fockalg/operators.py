"""
Ladder operators and diagonal weight operators on the truncated space.

All maps act in coefficient space: ``create``/``annihilate`` shift a monomial
index up/down one step in coordinate ``j`` (1-based), while ``D`` and ``T``
rescale each degree shell by a power of ``w(n)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import (Context, FockElement, inner_A, kernel_section, norm_A)
from .space import HVector, cm_coordinates, in_ball
from .wiener import ConeSeries


def _check_j(j: int, ctx: Context):
    if not 1 <= j <= ctx.dims:
        raise DomainError(f"dimension index {j} outside 1..{ctx.dims}")


def _shift(vec, targets, scale):
    out = np.zeros_like(vec)
    keep = targets >= 0
    np.add.at(out, targets[keep], (vec * scale)[keep])
    dropped = bool(np.any(vec[~keep] != 0))
    return out, dropped


def create(j: int, f: FockElement) -> FockElement:
    """``a_j^dagger z^I = z^{I + e_j} / k_j`` (multiplication by ``z_j / k_j``)."""
    ctx = f.ctx
    _check_j(j, ctx)
    vec = f.to_dense()
    out, dropped = _shift(vec, ctx.basis.shift_up[j - 1], 1.0 / ctx.spectrum.k[j - 1])
    return FockElement.from_dense(out, ctx, dropped or f.truncated)


def annihilation_factors(j: int, ctx: Context) -> np.ndarray:
    """Per-basis factor ``i_j k_j w(n)^2 / w(n-1)^2`` of ``a_j`` (zero when ``i_j = 0``)."""
    B = ctx.basis
    n = B.degrees
    ij = B.exponents[:, j - 1]
    w2 = ctx.w2
    ratio = np.zeros(B.size)
    pos = n >= 1
    ratio[pos] = w2[n[pos]] / w2[n[pos] - 1]
    return ij * ctx.spectrum.k[j - 1] * ratio


def annihilate(j: int, f: FockElement) -> FockElement:
    """Adjoint of :func:`create` in the ``A`` inner product.

    ``a_j z^I = i_j k_j w(n)^2 / w(n-1)^2 z^{I - e_j}``, ``n = |I|``, which
    equals ``i_j k_j lambda_{n-1} / (n lambda_n)``.
    """
    ctx = f.ctx
    _check_j(j, ctx)
    vec = f.to_dense()
    out, _ = _shift(vec, ctx.basis.shift_down[j - 1], annihilation_factors(j, ctx))
    return FockElement.from_dense(out, ctx, f.truncated)


def _diagonal(f: FockElement, per_degree: np.ndarray) -> FockElement:
    scale = per_degree[f.ctx.basis.degrees]
    return FockElement.from_dense(f.to_dense() * scale, f.ctx, f.truncated)


def apply_D(f: FockElement) -> FockElement:
    """``D z^I = w(|I|)^2 z^I``."""
    return _diagonal(f, f.ctx.w2)


def apply_D_inv(f: FockElement) -> FockElement:
    return _diagonal(f, 1.0 / f.ctx.w2)


def apply_T(f: FockElement) -> FockElement:
    """``T z^I = z^I / w(|I|)^2``, the Gaussian integral operator of the kernel."""
    return _diagonal(f, 1.0 / f.ctx.w2)


def apply_T_half(f: FockElement) -> FockElement:
    """Square root of :func:`apply_T`; an isometry from ``L2`` onto ``A``."""
    return _diagonal(f, 1.0 / np.sqrt(f.ctx.w2))


def ad_D(op):
    """``Ad_D(A) = D A D^{-1}`` for a map ``A`` on elements."""
    return lambda f: apply_D(op(apply_D_inv(f)))


def twisted_bracket(j: int, f: FockElement) -> FockElement:
    """``[a_j, a_j^dagger]_D f = (Ad_D(a_j) a_j^dagger - a_j^dagger Ad_D(a_j)) f``."""
    Da = ad_D(lambda g: annihilate(j, g))
    return Da(create(j, f)) - create(j, Da(f))


def ccr_defect(j: int, f: FockElement) -> float:
    """``norm_A([a_j, a_j^dagger]_D f - f)``; zero up to roundoff when ``deg f <= N - 2``."""
    if f.degree > f.ctx.cap - 2:
        raise DomainError("bracket check needs deg f <= N - 2")
    return norm_A(twisted_bracket(j, f) - f)


def gl_derivative(lam: ConeSeries, f: FockElement) -> FockElement:
    """Gelfond-Leontiev derivative of a one-variable series.

    Moves ``a_m s^m`` to ``a_m (lambda_{m-1} / lambda_m) s^{m-1}``; with
    ``lambda_m = 1/m!`` this is the ordinary derivative.
    """
    ctx = f.ctx
    if ctx.dims != 1:
        raise DomainError("Gelfond-Leontiev derivative is defined for one variable")
    out = {}
    for I, a in f.terms.items():
        m = sum(I)
        if m == 0:
            continue
        if m > lam.cap:
            raise DomainError(f"series has no coefficient of degree {m}")
        if lam.coeffs[m] == 0 or lam.coeffs[m - 1] == 0:
            raise DomainError(f"zero coefficient in the generating series near degree {m}")
        out[(m - 1,)] = a * lam.coeffs[m - 1] / lam.coeffs[m]
    return FockElement(out, ctx, f.truncated)


@dataclass(frozen=True)
class EigenCheck:
    eigenvalue_est: complex
    residual: float
    expected: complex


def coherent_eigencheck(j: int, eta: HVector, ctx: Context) -> EigenCheck:
    """Test the kernel section at ``eta`` as an eigenvector of ``a_j``.

    The exact eigenvalue in this convention is ``conj(alpha_j(eta)) / k_j``;
    the truncation at degree ``N`` leaves a residual set by the top shell.
    """
    _check_j(j, ctx)
    if in_ball(eta, ctx.spectrum).status != "inside":
        raise DomainError("coherent state needs eta strictly inside the ball")
    eps = kernel_section(eta, ctx)
    g = annihilate(j, eps)
    nrm2 = norm_A(eps) ** 2
    lam = inner_A(eps, g) / nrm2
    residual = norm_A(g - lam * eps) / np.sqrt(nrm2)
    expected = complex(np.conj(cm_coordinates(eta, ctx.spectrum)[j - 1]))
    return EigenCheck(complex(lam), float(residual), expected)

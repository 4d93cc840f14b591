"""
Truncated weighted Fock space of power series ``f = sum_I a_I z^I``.

One coefficient map is read in three Hilbert norms, all diagonal in the
monomial basis::

    norm_A(f)**2   = sum |a_I|^2 w(|I|)^2 I! k^(2I)     (the RKHS / algebra)
    norm_L2(f)**2  = sum |a_I|^2 I! k^(2I)               (Gaussian L2)
    norm_hat(f)**2 = sum |a_I|^2 I! k^(2I) / w(|I|)^2

Everything is truncated at total degree ``N`` over ``d`` coordinates.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import wiener
from .errors import ContextMismatch, DomainError
from .multiindex import MultiIndex, enumerate_indices, factorial
from .space import HVector, Spectrum, pairing, require_closed_ball, cm_norm
from .wiener import ConeSeries

PSD_RTOL = 1e-10


class Basis:
    """Graded-lex monomial basis of degree ``<= N`` in ``d`` variables."""

    def __init__(self, d: int, N: int):
        self.d = d
        self.N = N
        self.indices = enumerate_indices(d, N)
        self.size = len(self.indices)
        E = np.zeros((self.size, d), dtype=np.int64)
        for p, I in enumerate(self.indices):
            E[p, : len(I)] = I
        E.setflags(write=False)
        self.exponents = E
        self.degrees = E.sum(axis=1)
        self.position = {I: p for p, I in enumerate(self.indices)}
        self.factorials = np.array([float(factorial(I)) for I in self.indices])
        self._radix = 2 * N + 1
        self._codes = self._encode(E)
        self._order = np.argsort(self._codes)
        self._sorted_codes = self._codes[self._order]
        # degree shells are contiguous in graded order
        self.shell_start = np.searchsorted(self.degrees, np.arange(N + 2))

    def _encode(self, E):
        code = np.zeros(E.shape[:-1], dtype=np.int64)
        for j in range(self.d - 1, -1, -1):
            code = code * self._radix + E[..., j]
        return code

    def lookup(self, E) -> np.ndarray:
        """Basis positions of exponent rows ``E`` (``-1`` where absent)."""
        E = np.asarray(E, dtype=np.int64)
        code = self._encode(E)
        i = np.searchsorted(self._sorted_codes, code)
        i = np.clip(i, 0, self.size - 1)
        hit = self._sorted_codes[i] == code
        hit &= E.sum(axis=-1) <= self.N
        hit &= np.all(E >= 0, axis=-1)
        return np.where(hit, self._order[i], -1)

    @cached_property
    def shift_up(self) -> np.ndarray:
        """``shift_up[j, p]``: position of ``I_p + e_{j+1}``, or -1 above the cap."""
        out = np.empty((self.d, self.size), dtype=np.int64)
        for j in range(self.d):
            E = self.exponents.copy()
            E[:, j] += 1
            out[j] = self.lookup(E)
        return out

    @cached_property
    def shift_down(self) -> np.ndarray:
        """``shift_down[j, p]``: position of ``I_p - e_{j+1}``, or -1 when ``i_j = 0``."""
        out = np.empty((self.d, self.size), dtype=np.int64)
        for j in range(self.d):
            E = self.exponents.copy()
            E[:, j] -= 1
            out[j] = self.lookup(E)
        return out

    def monomials(self, alpha: np.ndarray) -> np.ndarray:
        """``z^I`` at coordinates ``alpha`` (shape ``(..., d)``) for every basis index."""
        alpha = np.asarray(alpha, dtype=complex)
        out = np.ones(alpha.shape[:-1] + (self.size,), dtype=complex)
        for j in range(self.d):
            powers = alpha[..., j, None] ** np.arange(self.N + 1)
            out *= np.take(powers, self.exponents[:, j], axis=-1)
        return out


@lru_cache(maxsize=32)
def basis(d: int, N: int) -> Basis:
    return Basis(d, N)


@dataclass(frozen=True, eq=False)
class Context:
    """Spectrum, cone series and degree cap fixing a truncated space."""

    spectrum: Spectrum
    cone: ConeSeries
    cap: int

    def __post_init__(self):
        if self.cap < 0:
            raise ValueError("cap must be nonnegative")
        if self.cone.cap < self.cap:
            raise ValueError(f"cone series has cap {self.cone.cap} < {self.cap}")
        if self.cone.cap > self.cap:
            object.__setattr__(self, "cone", self.cone.truncate(self.cap))
        if not self.cone.is_positive():
            raise DomainError("building a space needs lambda_n > 0 for n <= N")

    @classmethod
    def build(cls, k: Iterable[float], cone: ConeSeries, cap: int | None = None) -> "Context":
        return cls(Spectrum(np.asarray(list(k), dtype=float)), cone,
                   cone.cap if cap is None else cap)

    @property
    def dims(self) -> int:
        return self.spectrum.dims

    @property
    def N(self) -> int:
        return self.cap

    @property
    def basis(self) -> Basis:
        return basis(self.dims, self.cap)

    @cached_property
    def w2(self) -> np.ndarray:
        """``w(n)^2`` for ``n = 0..N``."""
        return self.cone.weights_squared()

    @cached_property
    def W(self) -> float:
        """``max_n w(n)``, the constant of the Gelfand-triple inclusions."""
        return float(np.sqrt(self.w2.max()))

    @cached_property
    def l2_sq(self) -> np.ndarray:
        """``||z^I||_L2^2 = I! k^(2I)`` over the basis."""
        B = self.basis
        k2 = np.prod((self.spectrum.k**2)[None, :] ** B.exponents, axis=1)
        return B.factorials * k2

    @cached_property
    def a_sq(self) -> np.ndarray:
        """``||z^I||_A^2 = w(|I|)^2 I! k^(2I)`` over the basis."""
        return self.w2[self.basis.degrees] * self.l2_sq

    @cached_property
    def hat_sq(self) -> np.ndarray:
        return self.l2_sq / self.w2[self.basis.degrees]

    def __eq__(self, other):
        return (isinstance(other, Context) and self.cap == other.cap
                and self.spectrum == other.spectrum
                and np.array_equal(self.cone.coeffs, other.cone.coeffs))

    def __hash__(self):
        return hash((self.cap, self.spectrum, self.cone.coeffs.tobytes()))

    def to_dict(self) -> dict:
        return {"spectrum": self.spectrum.to_dict(), "cone": self.cone.to_dict(),
                "cap": self.cap, "dims": self.dims}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Context":
        S = Spectrum.from_dict(d["spectrum"])
        if "dims" in d and int(d["dims"]) != S.dims:
            raise ValueError("dims does not match the spectrum length")
        return cls(S, ConeSeries.from_dict(d["cone"]), int(d["cap"]))


def _fsum_complex(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


@dataclass(frozen=True, eq=False)
class FockElement:
    """Sparse truncated power series attached to a :class:`Context`.

    ``truncated`` records that some operation producing this element
    discarded nonzero terms above the degree cap.
    """

    terms: Mapping[MultiIndex, complex]
    ctx: Context
    truncated: bool = False

    def __post_init__(self):
        B = self.ctx.basis
        clean = {}
        for I, a in self.terms.items():
            I = MultiIndex(I)
            a = complex(a)
            if a == 0:
                continue
            if len(I) > self.ctx.dims:
                raise ValueError(f"{I} uses more than {self.ctx.dims} coordinates")
            if sum(I) > self.ctx.cap:
                raise ValueError(f"{I} exceeds degree cap {self.ctx.cap}")
            clean[I] = clean.get(I, 0) + a
        order = sorted(clean, key=B.position.__getitem__)
        object.__setattr__(self, "terms", {I: clean[I] for I in order if clean[I] != 0})

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ctx: Context) -> "FockElement":
        return cls({}, ctx)

    @classmethod
    def monomial(cls, I, ctx: Context, coeff: complex = 1.0) -> "FockElement":
        return cls({MultiIndex(I): coeff}, ctx)

    @classmethod
    def from_dense(cls, vec, ctx: Context, truncated: bool = False) -> "FockElement":
        vec = np.asarray(vec, dtype=complex)
        B = ctx.basis
        if vec.shape != (B.size,):
            raise ValueError(f"dense vector must have length {B.size}")
        nz = np.flatnonzero(vec)
        return cls({B.indices[p]: vec[p] for p in nz}, ctx, truncated)

    def to_dense(self) -> np.ndarray:
        B = self.ctx.basis
        out = np.zeros(B.size, dtype=complex)
        for I, a in self.terms.items():
            out[B.position[I]] = a
        return out

    # queries ----------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Highest total degree present (-1 for the zero element)."""
        return max((sum(I) for I in self.terms), default=-1)

    def coeff(self, I) -> complex:
        return self.terms.get(MultiIndex(I), 0j)

    def __len__(self):
        return len(self.terms)

    def __call__(self, xi: HVector) -> complex:
        return evaluate(self, xi)

    # linear structure -------------------------------------------------------
    def _same(self, other: "FockElement"):
        if not isinstance(other, FockElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch("elements belong to different contexts")

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for I, a in other.terms.items():
            out[I] = out.get(I, 0) + a
        return FockElement(out, self.ctx, self.truncated or other.truncated)

    def __neg__(self):
        return FockElement({I: -a for I, a in self.terms.items()}, self.ctx, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FockElement):
            return multiply(self, other)
        return FockElement({I: a * other for I, a in self.terms.items()}, self.ctx,
                           self.truncated)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def allclose(self, other: "FockElement", rtol=1e-12, atol=0.0) -> bool:
        self._same(other)
        return bool(np.allclose(self.to_dense(), other.to_dense(), rtol=rtol, atol=atol))

    # serialization ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "context": self.ctx.to_dict(),
            "terms": [{"index": list(I), "re": a.real, "im": a.imag}
                      for I, a in self.terms.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping, ctx: Context | None = None) -> "FockElement":
        ctx = Context.from_dict(d["context"]) if ctx is None else ctx
        terms = {}
        for t in d["terms"]:
            I = MultiIndex(t["index"])
            terms[I] = terms.get(I, 0) + complex(t["re"], t.get("im", 0.0))
        return cls(terms, ctx)

    @classmethod
    def from_json(cls, text: str) -> "FockElement":
        return cls.from_dict(json.loads(text))


def _dense_pair(f: FockElement, g: FockElement):
    if f.ctx != g.ctx:
        raise ContextMismatch("elements belong to different contexts")
    return f.to_dense(), g.to_dense()


# norms --------------------------------------------------------------------------
def monomial_norm_A(I, ctx: Context) -> float:
    """``||z^I||_A = w(|I|) sqrt(I!) k^I``."""
    I = MultiIndex(I)
    if sum(I) > ctx.cap:
        raise DomainError(f"degree {sum(I)} exceeds cap {ctx.cap}")
    if len(I) > ctx.dims:
        raise DomainError(f"{I} uses more than {ctx.dims} coordinates")
    return math.sqrt(ctx.a_sq[ctx.basis.position[I]])


def inner_A(f: FockElement, g: FockElement) -> complex:
    """``<f, g>_A``, conjugate-linear in ``f``."""
    a, b = _dense_pair(f, g)
    return _fsum_complex(a.conj() * b * f.ctx.a_sq)


def _weighted_norm(f: FockElement, weights) -> float:
    a = f.to_dense()
    return math.sqrt(math.fsum((a.real**2 + a.imag**2) * weights))


def norm_A(f: FockElement) -> float:
    return _weighted_norm(f, f.ctx.a_sq)


def norm_L2(f: FockElement) -> float:
    return _weighted_norm(f, f.ctx.l2_sq)


def norm_hat(f: FockElement) -> float:
    return _weighted_norm(f, f.ctx.hat_sq)


def symmetric_tensor_norm(I, norms) -> float:
    """Norm of ``xi_1^{v i_1} v xi_2^{v i_2} ...`` for orthogonal ``xi_j`` of the given norms."""
    I = MultiIndex(I)
    norms = np.asarray(norms, dtype=float)
    return math.sqrt(factorial(I)) * float(np.prod(norms[: len(I)] ** np.asarray(I)))


@dataclass(frozen=True)
class TripleNorms:
    norm_A: float
    norm_L2: float
    norm_hat: float
    W: float

    def chain_holds(self, rtol: float = 1e-12) -> bool:
        """``norm_A <= W norm_L2 <= W^2 norm_hat`` up to ``rtol``."""
        W = self.W
        return (self.norm_A <= W * self.norm_L2 * (1 + rtol)
                and W * self.norm_L2 <= W * W * self.norm_hat * (1 + rtol))


def triple_norms(f: FockElement) -> TripleNorms:
    return TripleNorms(norm_A(f), norm_L2(f), norm_hat(f), f.ctx.W)


# evaluation and products ----------------------------------------------------------
def evaluate(f: FockElement, xi: HVector) -> complex:
    """``f(xi) = sum_I a_I alpha^I`` on the closed Cameron-Martin ball."""
    require_closed_ball(xi, f.ctx.spectrum)
    if not f.terms:
        return 0j
    B = f.ctx.basis
    pos = np.fromiter((B.position[I] for I in f.terms), dtype=np.int64, count=len(f.terms))
    coeffs = np.fromiter(f.terms.values(), dtype=complex, count=len(f.terms))
    z = np.prod(xi.alpha[None, :] ** B.exponents[pos], axis=1)
    return _fsum_complex(coeffs * z)


def multiply(f: FockElement, g: FockElement) -> FockElement:
    """Pointwise product, i.e. coefficient convolution ``z^I z^J = z^{I+J}``.

    Terms above the degree cap are dropped and flag the result as truncated.
    """
    if f.ctx != g.ctx:
        raise ContextMismatch("elements belong to different contexts")
    ctx = f.ctx
    B = ctx.basis
    if not f.terms or not g.terms:
        return FockElement({}, ctx, f.truncated or g.truncated)
    pf = np.array([B.position[I] for I in f.terms])
    pg = np.array([B.position[I] for I in g.terms])
    af = np.fromiter(f.terms.values(), dtype=complex, count=pf.size)
    ag = np.fromiter(g.terms.values(), dtype=complex, count=pg.size)
    E = B.exponents[pf][:, None, :] + B.exponents[pg][None, :, :]
    target = B.lookup(E).ravel()
    prod = (af[:, None] * ag[None, :]).ravel()
    keep = target >= 0
    dropped = bool(np.any(prod[~keep] != 0))
    out = np.zeros(B.size, dtype=complex)
    np.add.at(out, target[keep], prod[keep])
    return FockElement.from_dense(out, ctx, dropped or f.truncated or g.truncated)


# kernel ---------------------------------------------------------------------------
def kernel_section(xi: HVector, ctx: Context) -> FockElement:
    """``K_xi = sum_I conj(z^I(xi)) / ||z^I||_A^2 z^I``, the representer of evaluation at xi."""
    require_closed_ball(xi, ctx.spectrum)
    z = ctx.basis.monomials(xi.alpha)
    return FockElement.from_dense(z.conj() / ctx.a_sq, ctx)


def kernel_eval_closed(xi: HVector, eta: HVector, ctx: Context) -> complex:
    """``Lambda(<xi, K^{-1} eta>)`` with the truncated cone series."""
    S = ctx.spectrum
    require_closed_ball(xi, S)
    require_closed_ball(eta, S)
    return complex(wiener.eval_series(ctx.cone, pairing(xi, eta, S)))


def kernel_series_shells(xi: HVector, eta: HVector, ctx: Context) -> np.ndarray:
    """Degree-``n`` shells of ``sum_I conj(z^I(xi)) z^I(eta) / (w(|I|)^2 I! k^(2I))``."""
    S = ctx.spectrum
    require_closed_ball(xi, S)
    require_closed_ball(eta, S)
    B = ctx.basis
    terms = B.monomials(xi.alpha).conj() * B.monomials(eta.alpha) / ctx.a_sq
    st = B.shell_start
    return np.array([_fsum_complex(terms[st[n]:st[n + 1]]) for n in range(ctx.cap + 1)])


def kernel_eval_series(xi: HVector, eta: HVector, ctx: Context) -> complex:
    """Kernel as a sum over the monomial basis, independent of the closed form."""
    return _fsum_complex(kernel_series_shells(xi, eta, ctx))


def kernel_truncation_bound(xi: HVector, eta: HVector, ctx: Context) -> float:
    """Bound on the kernel terms beyond the cap for this pair of points."""
    S = ctx.spectrum
    r = max(cm_norm(xi, S), cm_norm(eta, S))
    return wiener.tail_bound(ctx.cone, min(r, 1.0), ctx.cap)


@dataclass(frozen=True)
class GramCheck:
    min_eigenvalue: float
    norm: float
    psd: bool


def gram_matrix(points, ctx: Context) -> np.ndarray:
    n = len(points)
    G = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(a, n):
            G[a, b] = kernel_eval_closed(points[a], points[b], ctx)
            G[b, a] = G[a, b].conjugate()
    return G


def gram_psd_check(points, ctx: Context, rtol: float = PSD_RTOL) -> GramCheck:
    """Smallest eigenvalue of the kernel Gram matrix on up to 64 points."""
    if len(points) > 64:
        raise ValueError("at most 64 points")
    G = gram_matrix(points, ctx)
    eig = np.linalg.eigvalsh(G)
    norm = float(np.max(np.abs(eig))) if eig.size else 0.0
    mn = float(eig.min()) if eig.size else 0.0
    return GramCheck(mn, norm, mn >= -rtol * norm)


# random test elements ---------------------------------------------------------------
def random_element(ctx: Context, rng, max_degree: int | None = None,
                   density: float = 1.0, normalize: str | None = "A",
                   positive: bool = False) -> FockElement:
    """Random element with i.i.d. coefficients in a chosen orthonormal frame.

    ``normalize`` picks the frame: ``"A"``, ``"L2"`` or ``"hat"`` divide the raw
    draws by the corresponding monomial norm, ``None`` keeps them raw.
    ``positive`` draws uniform (0, 1) reals instead of complex normals.
    """
    rng = np.random.default_rng(rng)
    B = ctx.basis
    top = ctx.cap if max_degree is None else max_degree
    mask = B.degrees <= top
    if density < 1.0:
        mask &= rng.random(B.size) < density
    if positive:
        raw = rng.random(B.size) + 0j
    else:
        raw = rng.standard_normal(B.size) + 1j * rng.standard_normal(B.size)
    scale = {"A": ctx.a_sq, "L2": ctx.l2_sq, "hat": ctx.hat_sq, None: None}[normalize]
    if scale is not None:
        raw = raw / np.sqrt(scale)
    return FockElement.from_dense(np.where(mask, raw, 0), ctx)

"""
Truncated Hilbert space with a Gaussian covariance.

The covariance operator is diagonal in the basis ``xi_1..xi_d`` with
eigenvalues ``k_j**2``.  A point is stored through its coordinates
``alpha_j = <xi, xi_j>``, and the Cameron-Martin geometry is the weighted
inner product ``sum_j conj(a_j) b_j / k_j**2`` (conjugate-linear in the
first slot).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ContextMismatch, DomainError

BALL_TOL = 1e-12
UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Standard deviations ``k_1..k_d > 0`` of the Gaussian coordinates."""

    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        if k.ndim != 1 or k.size == 0:
            raise ValueError("spectrum must be a nonempty 1-d sequence")
        if not np.all(k > 0) or not np.all(np.isfinite(k)):
            raise DomainError("covariance eigenvalues must be strictly positive")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @property
    def dims(self) -> int:
        return self.k.size

    @property
    def trace(self) -> float:
        """Trace of the truncated covariance, ``sum_j k_j**2``."""
        return float(np.sum(self.k**2))

    def __eq__(self, other):
        return isinstance(other, Spectrum) and np.array_equal(self.k, other.k)

    def __hash__(self):
        return hash(self.k.tobytes())

    def to_dict(self) -> dict:
        return {"k": [float(x) for x in self.k]}

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        return cls(np.asarray(d["k"], dtype=float))


@dataclass(frozen=True, eq=False)
class HVector:
    """A point of the truncated Hilbert space in eigen-coordinates."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex)
        if a.ndim != 1:
            raise ValueError("coordinates must be 1-d")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def dims(self) -> int:
        return self.alpha.size

    @classmethod
    def zero(cls, d: int) -> "HVector":
        return cls(np.zeros(d, dtype=complex))

    def __eq__(self, other):
        return isinstance(other, HVector) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self):
        return hash(self.alpha.tobytes())

    def to_dict(self) -> dict:
        return {"re": [float(x) for x in self.alpha.real],
                "im": [float(x) for x in self.alpha.imag]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "HVector":
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError("re and im parts differ in length")
        return cls(re + 1j * im)

    @classmethod
    def from_json(cls, text: str) -> "HVector":
        return cls.from_dict(json.loads(text))


def _check(xi: HVector, S: Spectrum):
    if xi.dims != S.dims:
        raise ContextMismatch(f"vector has {xi.dims} coordinates, spectrum {S.dims}")


def h_norm(xi: HVector) -> float:
    return float(np.linalg.norm(xi.alpha))


def cm_coordinates(xi: HVector, S: Spectrum) -> np.ndarray:
    """Coordinates ``alpha_j / k_j`` in an orthonormal Cameron-Martin frame."""
    _check(xi, S)
    return xi.alpha / S.k


def cm_norm(xi: HVector, S: Spectrum) -> float:
    return float(np.linalg.norm(cm_coordinates(xi, S)))


@dataclass(frozen=True)
class BallStatus:
    status: str  # "inside" | "boundary" | "outside"
    margin: float

    @property
    def closed(self) -> bool:
        return self.status != "outside"


def in_ball(xi: HVector, S: Spectrum, tol: float = BALL_TOL) -> BallStatus:
    """Classify ``xi`` against the unit Cameron-Martin ball."""
    r = cm_norm(xi, S)
    if abs(r - 1.0) <= tol:
        status = "boundary"
    elif r < 1.0:
        status = "inside"
    else:
        status = "outside"
    return BallStatus(status, 1.0 - r)


def require_closed_ball(xi: HVector, S: Spectrum):
    b = in_ball(xi, S)
    if not b.closed:
        raise DomainError(f"point lies outside the closed ball (cm norm {1 - b.margin:.6g})")


def pairing(xi: HVector, eta: HVector, S: Spectrum) -> complex:
    """``<xi, K^{-1} eta> = sum_j conj(alpha_j(xi)) alpha_j(eta) / k_j**2``."""
    _check(xi, S)
    _check(eta, S)
    return complex(np.vdot(xi.alpha / S.k, eta.alpha / S.k))


def random_in_ball(S: Spectrum, r: float, seed) -> HVector:
    """Deterministic point with ``cm_norm == r`` and uniformly random direction."""
    if not 0 < r < 1:
        raise DomainError("radius must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(S.dims) + 1j * rng.standard_normal(S.dims)
    c *= r / np.linalg.norm(c)
    return HVector(S.k * c)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed ``d x d`` unitary matrix."""
    from scipy.stats import unitary_group

    return unitary_group.rvs(d, random_state=np.random.default_rng(seed)) if d > 1 \
        else np.exp(2j * np.pi * np.random.default_rng(seed).random()).reshape(1, 1)


def unitary_cm(xi: HVector, S: Spectrum, U) -> HVector:
    """Act with a unitary of the Cameron-Martin space: ``alpha -> k * (U (alpha / k))``."""
    U = np.asarray(U, dtype=complex)
    d = S.dims
    if U.shape != (d, d):
        raise ContextMismatch(f"unitary must be {d}x{d}")
    if np.linalg.norm(U.conj().T @ U - np.eye(d), ord=2) > UNITARY_TOL:
        raise DomainError("matrix is not unitary")
    return HVector(S.k * (U @ cm_coordinates(xi, S)))

"""
Truncated elements of the positive cone of the Wiener algebra.

A :class:`ConeSeries` holds Taylor coefficients ``lambda_0..lambda_N >= 0`` of
``Lambda(z) = sum_n lambda_n z^n``.  Every function space in the package is
built from one of these, through the weights ``w(n)`` defined by
``1 / lambda_n = n! w(n)^2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

EVAL_TOL = 1e-12
# relative growth of the running max tolerated inside the plateau window
PLATEAU_RTOL = 2e-2


@dataclass(frozen=True, eq=False)
class ConeSeries:
    """Truncated coefficient sequence of a cone element.

    Parameters
    ----------
    coeffs
        ``(lambda_0, ..., lambda_N)``, all nonnegative.
    family
        ``"geometric"``, ``"tau_p"`` or ``"custom"``.
    params
        Family parameters (``rho`` or ``tau`` and ``p``).
    """

    coeffs: np.ndarray
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if np.any(c < 0) or not np.all(np.isfinite(c)):
            raise DomainError("cone coefficients must be finite and nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def cap(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __call__(self, t):
        return eval_series(self, t)

    def is_positive(self) -> bool:
        return bool(np.all(self.coeffs > 0))

    def weight(self, n: int) -> float:
        return weight(self, n)

    def weights_squared(self) -> np.ndarray:
        """``w(n)^2`` for every ``n <= N``."""
        self._require_positive()
        return 1.0 / (_factorials(self.cap) * self.coeffs)

    def truncate(self, N: int) -> "ConeSeries":
        """The same family with a smaller cap ``N``."""
        if N > self.cap:
            raise ValueError(f"cannot extend cap {self.cap} to {N}")
        return ConeSeries(self.coeffs[: N + 1], self.family, dict(self.params))

    def _require_positive(self):
        if not self.is_positive():
            raise DomainError("weights need lambda_n > 0 for every n <= N")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "cap": self.cap,
            "coeffs": [float(c) for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ConeSeries":
        family = d.get("family", "custom")
        params = d.get("params", {}) or {}
        if "coeffs" in d and d["coeffs"] is not None:
            out = cls(np.asarray(d["coeffs"], dtype=float), family, dict(params))
            if "cap" in d and int(d["cap"]) != out.cap:
                raise ValueError("cap does not match the number of coefficients")
            return out
        N = int(d["cap"])
        if family == "tau_p":
            return make_tau_p(params["tau"], params["p"], N)
        if family == "geometric":
            return make_geometric(params.get("rho", 1.0), N)
        if family == "delta":
            return make_delta(N)
        if family == "exponential":
            return make_exponential(N)
        raise ValueError(f"family {family!r} needs explicit coefficients")

    @classmethod
    def from_json(cls, text: str) -> "ConeSeries":
        return cls.from_dict(json.loads(text))


def _factorials(N: int) -> np.ndarray:
    # correctly rounded n! as floats; OverflowError past 170!
    return np.array([float(math.factorial(n)) for n in range(N + 1)])


def make_tau_p(tau: float, p: float, N: int) -> ConeSeries:
    """``lambda_n = exp(-tau n^p)``, the subexponential family."""
    if not tau > 0:
        raise DomainError("tau must be positive")
    if not 0 < p <= 1:
        raise DomainError("p must lie in (0, 1]")
    n = np.arange(N + 1, dtype=float)
    return ConeSeries(np.exp(-tau * n**p), "tau_p", {"tau": float(tau), "p": float(p)})


def make_geometric(rho: float, N: int) -> ConeSeries:
    """``lambda_n = rho^n``, i.e. ``Lambda(z) = 1 / (1 - rho z)``."""
    if not 0 < rho <= 1:
        raise DomainError("rho must lie in (0, 1]")
    return ConeSeries(float(rho) ** np.arange(N + 1, dtype=float), "geometric",
                      {"rho": float(rho)})


def make_delta(N: int) -> ConeSeries:
    """The unit ``(1, 0, 0, ...)`` of the convolution algebra."""
    c = np.zeros(N + 1)
    c[0] = 1.0
    return ConeSeries(c, "delta", {})


def make_exponential(N: int) -> ConeSeries:
    """Taylor coefficients ``1/n!`` of ``exp``."""
    return ConeSeries(1.0 / _factorials(N), "exponential", {})


def eval_series(lam: ConeSeries, t: complex) -> complex:
    """Horner evaluation of the truncated series at ``|t| <= 1``."""
    if abs(t) > 1 + EVAL_TOL:
        raise DomainError(f"|t| = {abs(t)} exceeds 1")
    acc = 0j
    for c in lam.coeffs[::-1]:
        acc = acc * t + c
    return acc


def convolve(a: ConeSeries, b: ConeSeries) -> ConeSeries:
    """Truncated Cauchy product ``(a*b)_n = sum_m a_m b_{n-m}``, ``n <= N``."""
    if a.cap != b.cap:
        raise ValueError(f"cap mismatch: {a.cap} vs {b.cap}")
    N = a.cap
    out = np.empty(N + 1)
    for n in range(N + 1):
        out[n] = math.fsum(a.coeffs[: n + 1] * b.coeffs[n::-1])
    return ConeSeries(out, "custom", {})


@dataclass(frozen=True)
class SubconvCertificate:
    C_N: float
    ratios: np.ndarray
    plateau: bool


def subconv_certificate(lam: ConeSeries, rtol: float = PLATEAU_RTOL) -> SubconvCertificate:
    """Numerical evidence that ``lambda * lambda <= C lambda``.

    ``ratios[n] = (lambda*lambda)_n / lambda_n`` and ``C_N`` is their maximum.
    Entries with ``0/0`` impose no constraint and are recorded as 0.
    ``plateau`` is True when the running maximum grew by at most ``rtol``
    (relative) over the last ``ceil(N/4)`` entries.
    """
    conv = convolve(lam, lam).coeffs
    zero = lam.coeffs == 0
    if np.any(zero & (conv > 0)):
        raise ZeroDivisionError("lambda_n = 0 where the self-convolution is positive")
    ratios = np.divide(conv, lam.coeffs, out=np.zeros_like(conv), where=~zero)
    ratios.setflags(write=False)
    running = np.maximum.accumulate(ratios)
    N = lam.cap
    q = -(-N // 4)
    start = running[max(N - q, 0)]
    plateau = bool(running[-1] <= start * (1 + rtol))
    return SubconvCertificate(float(running[-1]), ratios, plateau)


def weight(lam: ConeSeries, n: int) -> float:
    """``w(n) = sqrt(1 / (n! lambda_n))``."""
    if n < 0 or n > lam.cap:
        raise DomainError(f"degree {n} outside 0..{lam.cap}")
    if lam.coeffs[n] == 0:
        raise DomainError(f"lambda_{n} = 0 has no weight")
    return math.sqrt(1.0 / (float(math.factorial(n)) * lam.coeffs[n]))


def tail_bound(lam, r: float, N: int | None = None) -> float:
    """Bound on the neglected tail ``sum_{n > N} lambda_n r^(2n)``.

    ``lam`` is a :class:`ConeSeries` of family ``geometric`` or ``tau_p``
    (only its parameters are used) or a ``(family, params)`` pair.  ``r`` is a
    Cameron-Martin radius, so the series is evaluated at ``r**2``.  Returns
    ``inf`` for a divergent tail.
    """
    if isinstance(lam, ConeSeries):
        family, params = lam.family, lam.params
        N = lam.cap if N is None else N
    else:
        family, params = lam
    if N is None:
        raise ValueError("cap N is required")
    if not 0 <= r <= 1:
        raise DomainError("r must lie in [0, 1]")
    x = r * r
    if x == 0:
        return 0.0
    if family == "geometric":
        q = params.get("rho", 1.0) * x
        if q >= 1:
            return math.inf
        return q ** (N + 1) / (1 - q)
    if family == "tau_p":
        tau, p = params["tau"], params["p"]
        log_x = math.log(x)
        terms = []
        partial = 0.0
        n = N + 1
        while True:
            t = math.exp(-tau * n**p + n * log_x)
            terms.append(t)
            partial += t
            if t < 1e-18 * partial or t == 0.0:
                break
            n += 1
        return math.fsum(terms)
    if family == "delta":
        return 0.0
    raise ValueError(f"no tail bound available for family {family!r}")

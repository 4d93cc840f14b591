"""
Monte Carlo oracle for the Gaussian measure.

Coordinates are independent circular complex normals with ``E|z_j|^2 = k_j^2``.
Samples come from Philox streams keyed by ``(seed, chunk)`` with a fixed
chunk length, so any chunk can be produced independently (and in parallel)
while the assembled batch stays identical.  Estimators only use sample means;
they never call the analytic norm formulas they are meant to check.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .fock import Basis, FockElement
from .multiindex import MultiIndex
from .space import HVector, Spectrum, require_closed_ball
from .wiener import ConeSeries

CHUNK = 1 << 16
EVAL_BLOCK = 1 << 13
CSV_COLUMNS = ("quantity", "analytic", "estimate", "std_error", "M", "seed", "pass")


def max_threads() -> int:
    try:
        return max(1, int(os.environ.get("FOCKALG_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """``M`` i.i.d. draws of the first ``d`` coordinates, shape ``(M, d)``."""

    points: np.ndarray
    seed: int
    spectrum: Spectrum

    @property
    def M(self) -> int:
        return self.points.shape[0]

    @property
    def dims(self) -> int:
        return self.points.shape[1]

    def __getitem__(self, m) -> HVector:
        return HVector(self.points[m])


def _chunk(seed: int, c: int, n: int, k: np.ndarray) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), c]))
    g = rng.standard_normal((n, 2 * k.size))
    return (g[:, : k.size] + 1j * g[:, k.size:]) * (k / np.sqrt(2.0))


def sample(S: Spectrum, M: int, seed: int, threads: int | None = None) -> SampleBatch:
    if M < 1:
        raise ValueError("need at least one sample")
    k = S.k
    sizes = [min(CHUNK, M - s) for s in range(0, M, CHUNK)]
    threads = max_threads() if threads is None else threads
    jobs = [(seed, c, n, k) for c, n in enumerate(sizes)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda a: _chunk(*a), jobs))
    else:
        parts = [_chunk(*a) for a in jobs]
    pts = np.concatenate(parts, axis=0)
    pts.setflags(write=False)
    return SampleBatch(pts, int(seed), S)


@dataclass(frozen=True)
class Estimate:
    estimate: complex
    std_error: float

    def within(self, analytic: complex, sigmas: float = 4.0) -> bool:
        return abs(self.estimate - analytic) <= sigmas * self.std_error

    def zscore(self, analytic: complex) -> float:
        err = abs(self.estimate - analytic)
        if self.std_error == 0:
            return 0.0 if err == 0 else float("inf")
        return err / self.std_error


def _sample_sums(x: np.ndarray) -> np.ndarray:
    # fixed-size block partial sums added in block order: deterministic reduction
    n = x.shape[-1]
    parts = [x[..., s:s + CHUNK].sum(axis=-1) for s in range(0, n, CHUNK)]
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def jackknife_means(x: np.ndarray):
    """Means over the last (sample) axis of ``x`` with delete-one jackknife errors.

    For the mean the jackknife variance has the closed form
    ``sum |x_i - mean|^2 / (M (M - 1))``, used here instead of materializing
    the ``M`` leave-one-out replicates.  Complex columns combine real and
    imaginary parts, ``sqrt(se_re^2 + se_im^2)``.
    """
    x = np.asarray(x)
    n = x.shape[-1]
    total = _sample_sums(x)
    mean = total / n
    if n < 2:
        return mean, np.zeros(np.shape(mean))
    ss = _sample_sums(x.real**2 + x.imag**2) - (total.real * mean.real + total.imag * mean.imag)
    return mean, np.sqrt(np.maximum(ss, 0.0) / (n * (n - 1.0)))


def jackknife_mean(x: np.ndarray) -> Estimate:
    mean, se = jackknife_means(np.ravel(x))
    return Estimate(complex(mean), float(se))


def _monomial_values(batch: SampleBatch, indices) -> np.ndarray:
    # shape (len(indices), M)
    cols = np.ascontiguousarray(batch.points.T)
    out = np.ones((len(indices), batch.M), dtype=complex)
    for c, I in enumerate(indices):
        I = MultiIndex(I)
        if len(I) > batch.dims:
            raise ValueError(f"{I} needs more than {batch.dims} sampled coordinates")
        for j, e in enumerate(I):
            if e:
                out[c] *= cols[j] ** e
    return out


def mc_moment(I, J, batch: SampleBatch) -> Estimate:
    """Estimate ``int conj(z^I) z^J dmu``."""
    z = _monomial_values(batch, [I, J])
    return jackknife_mean(z[0].conj() * z[1])


def mc_moment_matrix(indices, batch: SampleBatch):
    """All pairwise moments for a list of indices: (estimates, std_errors)."""
    z = _monomial_values(batch, indices)
    n = len(indices)
    est = np.empty((n, n), dtype=complex)
    se = np.empty((n, n))
    for a in range(n):
        est[a, a:], se[a, a:] = jackknife_means(z[a].conj() * z[a:])
        est[a + 1:, a] = est[a, a + 1:].conj()
        se[a + 1:, a] = se[a, a + 1:]
    return est, se


def _eval_on_batch(fs, batch: SampleBatch) -> np.ndarray:
    ctx = fs[0].ctx
    B: Basis = ctx.basis
    if batch.dims != ctx.dims:
        raise ValueError("batch and element dimensions differ")
    C = np.stack([f.to_dense() for f in fs], axis=0)
    out = np.empty((len(fs), batch.M), dtype=complex)
    for s in range(0, batch.M, EVAL_BLOCK):
        out[:, s:s + EVAL_BLOCK] = C @ B.monomials(batch.points[s:s + EVAL_BLOCK]).T
    return out


def mc_l2_norm(f: FockElement, batch: SampleBatch) -> Estimate:
    """Estimate ``int |f|^2 dmu``, the squared Gaussian L2 norm."""
    return mc_l2_norms([f], batch)[0]


def mc_l2_norms(fs, batch: SampleBatch) -> list:
    vals = _eval_on_batch(list(fs), batch)
    mean, se = jackknife_means(np.abs(vals) ** 2)
    return [Estimate(complex(m), float(e)) for m, e in zip(mean, se)]


def _kernel_column(lam_N: ConeSeries, eta: HVector, batch: SampleBatch) -> np.ndarray:
    # K(xi_m, eta) = Lambda_N(sum_j conj(alpha_j(xi_m)) alpha_j(eta) / k_j^2)
    S = batch.spectrum
    require_closed_ball(eta, S)
    p = batch.points.conj() @ (eta.alpha / S.k**2)
    acc = np.zeros_like(p)
    for c in lam_N.coeffs[::-1]:
        acc = acc * p + c
    return acc


def mc_T_apply(lam_N: ConeSeries, J, eta: HVector, batch: SampleBatch) -> Estimate:
    """Estimate ``(T_N z^J)(eta) = int K_N(xi, eta) z^J(xi) dmu(xi)``."""
    J = MultiIndex(J)
    if sum(J) > lam_N.cap:
        raise ValueError("|J| exceeds the kernel truncation")
    kern = _kernel_column(lam_N, eta, batch)
    zJ = _monomial_values(batch, [J])[0]
    return jackknife_mean(kern * zJ)


def mc_T_apply_many(lam_N: ConeSeries, indices, eta: HVector, batch: SampleBatch) -> list:
    kern = _kernel_column(lam_N, eta, batch)
    z = _monomial_values(batch, indices)
    mean, se = jackknife_means(kern[None, :] * z)
    return [Estimate(complex(m), float(e)) for m, e in zip(mean, se)]


def csv_rows(rows) -> str:
    """Render ``(quantity, analytic, estimate, std_error, M, seed, pass)`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+.17g}j"
    if isinstance(v, float):
        return repr(v)
    return str(v)

"""Completeness experiments in weighted L2: project targets onto truncated
exponential systems and track the residual as the frequency cutoff grows.

The Gram matrix of exponentials is Toeplitz in the Fourier coefficients of
the weight; deep-zero weights make the system nearly dependent, so the
solve carries an explicit eigenvalue floor and a condition estimate.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .deep_zero import eval_H_series, membership_check
from .frequency_sets import complement_in_range
from .quadrature import integrate_finite, oscillatory_integral

__all__ = [
    "weight_fourier_coeff",
    "gram_matrix",
    "TrigPolyTarget",
    "AnnihilatorTarget",
    "SampledTarget",
    "weighted_residual",
    "ProbeConfig",
    "ResidualCurve",
    "residual_curve",
    "annihilator_test",
    "convolution_stability_check",
]


def weight_fourier_coeff(w, k, tol=1e-12):
    """Fourier coefficient of the weight, conjugate-symmetric by construction."""
    k = int(k)
    if k < 0:
        return np.conj(weight_fourier_coeff(w, -k, tol))
    key = (k, tol)
    if key in w._fourier_cache:
        return w._fourier_cache[key]
    if w.kind == "constant":
        val = complex(w.v) if k == 0 else 0.0j
    else:
        res = oscillatory_integral(
            lambda t: w(t) * np.exp(-2j * np.pi * k * t), k, 0.0, 1.0, tol)
        if not res.converged:
            raise ArithmeticError(
                f"weight coefficient k={k} reached only {res.abs_error_estimate:.2e}")
        val = res.value
    w._fourier_cache[key] = val
    return val


def gram_matrix(freqs, w, tol=1e-12):
    """G[m][n] = <e_n, e_m>_w = w-hat(freqs[m] - freqs[n]); Hermitian Toeplitz
    in the coefficient index."""
    freqs = list(freqs)
    if len(set(freqs)) != len(freqs):
        raise ValueError("frequencies must be distinct")
    n = len(freqs)
    G = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            G[i, j] = weight_fourier_coeff(w, freqs[i] - freqs[j], tol)
    return G


class TrigPolyTarget:
    """Target given by explicit exponential coefficients {freq: amplitude};
    all weighted inner products reduce to weight Fourier coefficients."""

    def __init__(self, coeffs):
        self.coeffs = {int(k): complex(v) for k, v in coeffs.items()}

    def inner(self, m, w, tol=1e-12):
        return sum(a * weight_fourier_coeff(w, m - n, tol)
                   for n, a in self.coeffs.items())

    def norm_sq(self, w, tol=1e-12):
        total = 0.0j
        for n, a in self.coeffs.items():
            for l, b in self.coeffs.items():
                total += a * np.conj(b) * weight_fourier_coeff(w, l - n, tol)
        return float(total.real)

    def fourier_coeff(self, n):
        return self.coeffs.get(int(n), 0.0j)

    def digest_data(self):
        return {"kind": "trigpoly",
                "coeffs": {str(k): [v.real, v.imag]
                           for k, v in sorted(self.coeffs.items())}}


class AnnihilatorTarget:
    """Phi = H/w for a deep-zero series H; the weight cancels in every
    inner product against exponentials, which become plain coefficients
    of H: the series coefficient on +-(odd square), zero elsewhere."""

    def __init__(self, series):
        self.series = series
        self._spectrum = {int(f): complex(c)
                          for f, c in zip(series.freqs, series.coeffs)}

    def inner(self, m, w, tol=1e-10):
        m = int(m)
        if m > 0:
            return self._spectrum.get(m, 0.0j)
        if m < 0:
            return -self._spectrum.get(-m, 0.0j)
        return 0.0j

    def inner_quadrature(self, m, tol=1e-10):
        """Same inner product by direct oscillatory quadrature of H."""
        top = float(max(np.max(self.series.freqs), abs(m)))
        res = oscillatory_integral(
            lambda t: eval_H_series(self.series, t)
            * np.exp(-2j * np.pi * m * t), top, 0.0, 1.0, tol)
        return res.value

    def norm_sq(self, w, tol=1e-8):
        value, _ = membership_check(self.series, w, tol)
        return value

    def digest_data(self):
        return {"kind": "annihilator", "k_min": self.series.k_min,
                "M": self.series.M}


class SampledTarget:
    """Target given by a vectorized callable on (0,1)."""

    def __init__(self, f, label="sampled"):
        self.f = f
        self.label = label

    def inner(self, m, w, tol=1e-10):
        res = oscillatory_integral(
            lambda t: np.asarray(self.f(t), dtype=np.complex128)
            * np.exp(-2j * np.pi * m * t) * w(t), m, 0.0, 1.0, tol)
        return res.value

    def norm_sq(self, w, tol=1e-10):
        res = integrate_finite(
            lambda t: np.abs(np.asarray(self.f(t), dtype=np.complex128)) ** 2
            * w(t) + 0j, 0.0, 1.0, tol)
        return res.value.real

    def digest_data(self):
        return {"kind": "sampled", "label": self.label}


def _chol_solve(A, b):
    L = np.linalg.cholesky(A)
    y = np.linalg.solve(L, b)
    return np.linalg.solve(L.conj().T, y)


@dataclass
class ResidualRecord:
    N: int
    residual: float
    target_norm: float
    cond_estimate: float
    coefficients: np.ndarray = field(repr=False, default=None)

    @property
    def ratio(self):
        return self.residual / self.target_norm if self.target_norm else 0.0


def weighted_residual(target, freqs, w, floor=None, tol=1e-12):
    """Distance from the target to the span of the given exponentials.

    residual^2 = ||f||_w^2 - b^H (G + floor I)^(-1) b, clamped to
    [0, ||f||_w^2]; Cholesky is the (deterministic) factorization, and a
    failure even with the floor raises with the condition estimate.
    """
    freqs = list(freqs)
    G = gram_matrix(freqs, w, tol)
    b = np.array([target.inner(m, w, tol) for m in freqs], dtype=np.complex128)
    norm_sq = target.norm_sq(w, tol)
    if floor is None:
        floor = 1e-10 * weight_fourier_coeff(w, 0, tol).real
    A = G + floor * np.eye(len(freqs))
    cond = float(np.linalg.cond(A)) if len(freqs) else 1.0
    try:
        coeffs = _chol_solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(
            f"Gram factorization failed at floor={floor:.3e}, "
            f"cond estimate {cond:.3e}") from exc
    proj = float(np.real(np.vdot(b, coeffs)))
    res_sq = min(max(norm_sq - proj, 0.0), norm_sq)
    return math.sqrt(res_sq), coeffs, math.sqrt(max(norm_sq, 0.0)), cond


@dataclass
class ProbeConfig:
    weight: object
    gamma: object          # FrequencySet of removed frequencies
    target: object
    floor: float | None = None
    tol: float = 1e-12

    def digest(self):
        data = {"weight": self.weight.descriptor(),
                "gamma": list(self.gamma.elements),
                "target": self.target.digest_data(),
                "floor": self.floor, "tol": self.tol}
        return hashlib.sha256(
            json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class ResidualCurve:
    records: list
    config_digest: str


def residual_curve(config, N_list):
    """weighted_residual over nested complements (N increasing)."""
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be increasing")
    records = []
    for N in N_list:
        freqs = complement_in_range(config.gamma, N)
        res, coeffs, norm, cond = weighted_residual(
            config.target, freqs, config.weight, config.floor, config.tol)
        records.append(ResidualRecord(N, res, norm, cond, coeffs))
    return ResidualCurve(records, config.digest())


@dataclass
class AnnihilatorReport:
    entries: list          # (n, value, expected, ok)
    passed: bool


def annihilator_test(series, w, n_range, tol=1e-10, zero_tol=1e-8):
    """Check that the weighted inner products of Phi = H/w against e_n
    reduce to coefficients of H: zero off the odd-square spectrum, the
    series coefficient on it."""
    target = AnnihilatorTarget(series)
    spectrum = {int(f): c for f, c in zip(series.freqs, series.coeffs)}
    entries = []
    passed = True
    for n in n_range:
        n = int(n)
        val = target.inner_quadrature(n, tol)
        expected = complex(spectrum.get(abs(n), 0.0))
        if n < 0:
            expected = -expected
        ok = abs(val - expected) < zero_tol
        passed = passed and ok
        entries.append((n, val, expected, ok))
    return AnnihilatorReport(entries, passed)


def convolution_stability_check(F, psi, w, tol=1e-6):
    """Finiteness of the weighted energy of F * psi with the product bound
    ||psi||^2 * double integral of |F|^2/w as the ceiling.

    F and psi are vectorized callables supported in [0, infinity) and
    (0,1) respectively; all functions are used on (0,1) only.
    Returns (value, ceiling, within_ceiling).
    """
    psi_norm_sq = integrate_finite(
        lambda s: np.abs(np.asarray(psi(s), dtype=np.complex128)) ** 2 + 0j,
        0.0, 1.0, tol).value.real

    def inner_energy(t_arr):
        out = np.empty(t_arr.shape, dtype=np.complex128)
        for i, t in enumerate(t_arr):
            if t <= 0:
                out[i] = 0.0
                continue
            r = integrate_finite(
                lambda s: np.abs(np.asarray(F(s), dtype=np.complex128)) ** 2
                / w(s) + 0j, 1e-12, t, tol)
            out[i] = r.value
        return out

    ceiling = psi_norm_sq * integrate_finite(
        inner_energy, 0.0, 1.0, max(tol, 1e-4)).value.real

    def conv_sq_over_w(t_arr):
        out = np.empty(t_arr.shape, dtype=np.complex128)
        for i, t in enumerate(t_arr):
            if t <= 1e-12:
                out[i] = 0.0
                continue
            conv = integrate_finite(
                lambda s: np.asarray(psi(t - s), dtype=np.complex128)
                * np.asarray(F(s), dtype=np.complex128) + 0j,
                0.0, t, tol).value
            out[i] = abs(conv) ** 2 / float(w(np.array([t]))[0])
        return out

    value = integrate_finite(conv_sq_over_w, 0.0, 1.0, max(tol, 1e-4)).value.real
    return value, ceiling, value <= ceiling * (1.0 + 1e-6)

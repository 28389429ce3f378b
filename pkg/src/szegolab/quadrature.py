"""Deterministic adaptive quadrature on Gauss-Kronrod 7/15 panel pairs.

Integrands are complex-valued and vectorized: they receive a 1-d numpy
array of abscissae and return an array of the same shape.  All panel
bookkeeping is deterministic (ties broken by position, final summation in
left-to-right order), so repeated runs are bit-identical.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureResult",
    "integrate_finite",
    "integrate_left_halfline",
    "oscillatory_integral",
]

# 15-point Kronrod extension of 7-point Gauss, on [-1, 1].
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
])

_MAX_ROUNDS = 80


@dataclass
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other):
        return QuadratureResult(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )


def _eval_panels(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _XK[None, :]
    y = np.asarray(f(x.ravel()), dtype=np.complex128).reshape(x.shape)
    vk = (y * _WK).sum(axis=1) * half
    vg = (y[:, 1::2] * _WG).sum(axis=1) * half
    raw = np.abs(vk - vg)
    # rescale as in QUADPACK: raw |K-G| is optimistic on unresolved panels
    mean = vk / (hi - lo)
    resasc = (np.abs(y - mean[:, None]) * _WK).sum(axis=1) * half
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0,
                          resasc * np.minimum(1.0, (200.0 * raw
                                                    / np.maximum(resasc, 1e-300))
                                              ** 1.5),
                          raw)
    return vk, scaled, x.size


def _adaptive(f, breakpoints, tol, max_evals):
    lo = np.asarray(breakpoints[:-1], dtype=np.float64)
    hi = np.asarray(breakpoints[1:], dtype=np.float64)
    val, err, n = _eval_panels(f, lo, hi)
    evals = n
    span = float(hi[-1] - lo[0])
    min_width = 1e-14 * max(span, abs(hi[-1]), abs(lo[0]))

    for _ in range(_MAX_ROUNDS):
        total = err.sum()
        if total <= tol or evals >= max_evals:
            break
        splittable = (hi - lo) > min_width
        if not splittable.any():
            break
        thresh = max(tol / (2.0 * len(lo)), 0.0)
        pick = splittable & (err > thresh)
        if not pick.any():
            worst = np.where(splittable)[0][np.argmax(err[splittable])]
            pick = np.zeros(len(lo), dtype=bool)
            pick[worst] = True
        keep = ~pick
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[keep], lo[pick], mid])
        new_hi = np.concatenate([hi[keep], mid, hi[pick]])
        new_val, new_err, n = _eval_panels(f, new_lo[len(lo[keep]):],
                                           new_hi[len(lo[keep]):])
        evals += n
        lo = new_lo
        hi = new_hi
        val = np.concatenate([val[keep], new_val])
        err = np.concatenate([err[keep], new_err])

    order = np.argsort(lo, kind="stable")
    total_err = float(err.sum())
    return QuadratureResult(complex(val[order].sum()), total_err, evals,
                            total_err <= tol)


def integrate_finite(f, a, b, tol, max_evals=2_000_000, singular_ends=()):
    """Adaptive integral of f over [a, b] to absolute tolerance tol.

    ``singular_ends`` names endpoints ('a' and/or 'b') with an integrable
    singularity; those get a geometric seed mesh refined toward the
    endpoint before adaptivity takes over.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    pts = [a, b]
    width = b - a
    if "a" in singular_ends:
        pts += [a + width * 10.0 ** (-k) for k in range(1, 9)]
    if "b" in singular_ends:
        pts += [b - width * 10.0 ** (-k) for k in range(1, 9)]
    breakpoints = np.unique(np.asarray(pts, dtype=np.float64))
    return _adaptive(f, breakpoints, tol, max_evals)


def integrate_left_halfline(f, decay_exponent, tol, max_evals=2_000_000):
    """Integral of f over (-inf, 0] for f with |f(u)| <= M/(1+|u|)^p, p > 1.

    Uses u = -s/(1-s) to map onto [0, 1); the sliver beyond the map's
    resolution is covered by the declared algebraic tail bound, which is
    added to the error estimate.
    """
    p = float(decay_exponent)
    if p <= 1:
        raise ValueError("decay_exponent must exceed 1")
    s_max = 1.0 - 1e-12
    cap = s_max / (1.0 - s_max)

    def transformed(s):
        u = -s / (1.0 - s)
        return np.asarray(f(u), dtype=np.complex128) / (1.0 - s) ** 2

    probes = np.array([-cap, -0.5 * cap, -0.1 * cap, -1e-2 * cap])
    m_est = float(np.max(np.abs(np.asarray(f(probes), dtype=np.complex128))
                         * (1.0 + np.abs(probes)) ** p))
    tail = 2.0 * m_est / ((p - 1.0) * (1.0 + cap) ** (p - 1.0))

    res = integrate_finite(transformed, 0.0, s_max, tol, max_evals=max_evals)
    return QuadratureResult(res.value, res.abs_error_estimate + tail,
                            res.evaluations + probes.size, res.converged)


def oscillatory_integral(f, omega, a, b, tol, max_evals=2_000_000):
    """As integrate_finite, seeding panels no wider than a quarter period.

    ``f`` is the full integrand (envelope times oscillation); ``omega`` is
    the dominant cycles-per-unit frequency used only for the panel cap.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    n_panels = 1
    if omega:
        n_panels = int(np.ceil((b - a) * 4.0 * abs(omega)))
        n_panels = min(max(n_panels, 1), max_evals // 15)
    breakpoints = np.linspace(a, b, n_panels + 1)
    return _adaptive(f, breakpoints, tol, max_evals)

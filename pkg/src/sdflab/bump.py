"""The smooth cutoff and its Fourier transform.

The concrete choice is w(x) = exp(1 - 1/(1 - x^2)) on (-1, 1), zero
outside.  It takes values in [0, 1], equals 1 at the origin, and
w(1/2) = exp(-1/3) > 1/2, so the plateau requirement holds on
[-1/2, 1/2].  The transform decays roughly like exp(-2.6 sqrt(t)); the
constant is measured, not assumed.

Two evaluation routes for the transform:

* adaptive oscillatory quadrature (scipy QAWO), absolute error ~1e-12,
  fine while the value is far above that floor;
* a high-precision sampled cosine sum (trapezoid over the support plus
  Poisson summation), which resolves values down past 1e-120 and is what
  the decay fit uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np
from scipy.integrate import quad

QUAD_FLOOR = 1e-11  # below this, the float quadrature is noise


def bump(x):
    """The cutoff w, vectorized."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    xi = x[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi * xi))
    if out.ndim == 0:
        return float(out)
    return out


def bump_scalar(x: float) -> float:
    if abs(x) >= 1:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - x * x))


def bump_fourier_quad(t: float) -> float:
    """Transform integral w^(t) = int w(x) e(-tx) dx by adaptive quadrature."""
    t = float(t)
    val, _err = quad(bump_scalar, 0.0, 1.0, weight="cos", wvar=2.0 * math.pi * abs(t),
                     limit=500, epsabs=1e-13, epsrel=1e-13)
    return 2.0 * val


def bump_fourier_sampled(ts: Sequence[float], dps: int = 150, half_samples: int = 24000) -> list:
    """High-precision transform values at the given frequencies.

    Trapezoid sum over the support at spacing 1/half_samples; by Poisson
    summation the aliasing error is of the size of the transform at
    frequency ~half_samples, negligible for |t| well below that.  Returns
    mpmath floats.
    """
    tmax = max(abs(float(t)) for t in ts) if ts else 0.0
    if tmax > 0.6 * half_samples:
        raise ValueError("half_samples too small for the requested frequencies")
    with mp.workdps(dps):
        m = 2 * half_samples
        h = mp.mpf(2) / m
        xs = [mp.mpf(2 * j) / m for j in range(1, half_samples)]
        wvals = [mp.e ** (1 - 1 / (1 - x * x)) for x in xs]
        out = []
        for t in ts:
            phi = 4 * mp.pi * mp.mpf(abs(float(t))) / m
            twoc = 2 * mp.cos(phi)
            cprev = mp.mpf(1)
            ccur = mp.cos(phi)
            acc = mp.mpf(0)
            for wv in wvals:
                acc += wv * ccur
                cprev, ccur = ccur, twoc * ccur - cprev
            out.append(h * (1 + 2 * acc))  # w(0) = 1
        return out


def bump_fourier(t: float) -> float:
    """Float transform value; delegates to the sampled route when tiny."""
    val = bump_fourier_quad(t)
    if abs(val) >= QUAD_FLOOR:
        return val
    return float(bump_fourier_sampled([t])[0])


@dataclass
class DecayFit:
    slope: float        # fitted b in ln|w^(t)| ~ a + b sqrt(t)
    intercept: float
    points: list[tuple[float, float]]   # (t, ln |w^(t)|)
    ok: bool            # slope <= -0.5


def decay_fit(t_min: float = 1.0, t_max: float = 1e4, n_points: int = 13,
              dps: int = 150, half_samples: int = 24000) -> DecayFit:
    """Least-squares fit of ln|w^| against sqrt(t) on a log-spaced grid."""
    ts = list(np.geomspace(t_min, t_max, n_points))
    vals = bump_fourier_sampled(ts, dps=dps, half_samples=half_samples)
    pts = []
    for t, v in zip(ts, vals):
        av = abs(v)
        if av == 0:
            continue
        pts.append((float(t), float(mp.log(av))))
    roots = np.array([math.sqrt(t) for t, _ in pts])
    logs = np.array([l for _, l in pts])
    slope, intercept = np.polyfit(roots, logs, 1)
    return DecayFit(float(slope), float(intercept), pts, slope <= -0.5)

"""Gaussian random-field parametrizations of the (smoothed) Brownian bridge.

Two expansion families of the same field: the Karhunen-Loeve sinusoids and
the Levy-Ciesielski hat functions, plus the smoothed-covariance images of
the Haar wavelets and the blow-up diagnostic sum for the unsmoothed bridge.

sigma multiplies the unit bridge, so the pointwise variance of log a is
sigma^2 (x - x^2) with maximum sigma^2 / 4 at x = 1/2 for every kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

KL = "kl"
LC = "lc"
HAAR_CHALF = "haar-chalf"


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("spatial location outside [0, 1]")
    return x


def _lc_level_shift(m: int):
    level = int(math.floor(math.log2(m)))
    return level, m - 2 ** level


def _hat(t):
    return np.maximum(0.0, 1.0 - np.abs(2.0 * t - 1.0))


@dataclass(frozen=True)
class FieldExpansion:
    """Mean-zero log-diffusion field log a = sum phi_m(x) xi_m, m <= M."""

    kind: str
    sigma: float = 1.0
    q: float = 1.0
    M: int = 1000

    def __post_init__(self):
        if self.kind not in (KL, LC, HAAR_CHALF):
            raise ValueError(f"unknown expansion kind {self.kind!r}")
        if self.kind == LC and self.q != 1.0:
            raise ValueError("the hat-function expansion is the q=1 bridge")
        if self.q < 1.0 or self.M < 1:
            raise ValueError("need q >= 1 and M >= 1")

    def phi(self, m: int, x):
        """m-th basis function (m >= 1) at x, including the sigma scale."""
        if m < 1:
            raise ValueError("basis index starts at 1")
        x = _check_x(x)
        if self.kind == KL:
            return self.sigma * math.sqrt(2.0) / (math.pi * m) ** self.q \
                * np.sin(math.pi * m * x)
        if self.kind == LC:
            level, shift = _lc_level_shift(m)
            return self.sigma * 2.0 ** (-level / 2.0) * _hat(2 ** level * x - shift)
        return self.sigma * chalf_haar(self.q, m, x)

    def phi_sup_norm(self, m: int) -> float:
        """L-infinity norm of phi_m (exact for KL and LC)."""
        if self.kind == KL:
            return self.sigma * math.sqrt(2.0) / (math.pi * m) ** self.q
        if self.kind == LC:
            level, _ = _lc_level_shift(m)
            return self.sigma * 2.0 ** (-level / 2.0)
        grid = np.linspace(0.0, 1.0, 2049)
        return float(np.max(np.abs(self.phi(m, grid))))

    def log_a(self, xi, x):
        """phi_0(x) + sum_{m<=M} phi_m(x) xi_m; phi_0 = 0 here."""
        xi = np.asarray(xi, dtype=float)
        if xi.ndim != 1 or len(xi) < self.M:
            raise ValueError(f"parameter vector shorter than truncation {self.M}")
        x = _check_x(np.atleast_1d(x))
        total = np.zeros_like(x)
        for m in range(1, self.M + 1):
            if xi[m - 1] != 0.0:
                total += self.phi(m, x) * xi[m - 1]
        return total

    def log_a_truncated(self, xi, x):
        """Like log_a but using only the leading len(xi) terms."""
        xi = np.asarray(xi, dtype=float)
        x = _check_x(np.atleast_1d(x))
        total = np.zeros_like(x)
        for m in range(1, min(len(xi), self.M) + 1):
            if xi[m - 1] != 0.0:
                total += self.phi(m, x) * xi[m - 1]
        return total

    def a(self, xi, x):
        return np.exp(self.log_a(xi, x))


def variance_coverage(q: float, M: int) -> float:
    """Retained fraction of total variance of the smoothed bridge at x fixed.

    Eigenvalue proportions (pi m)^{-2q}; the tail is summed analytically via
    the zeta function.
    """
    if q < 1.0 or M < 1:
        raise ValueError("need q >= 1 and M >= 1")
    partial = float(np.sum(np.arange(1, M + 1, dtype=float) ** (-2.0 * q)))
    return partial / float(zeta(2.0 * q))


def kappa_tau(p: float, M: int, x, chunk: int = 2 ** 20):
    """Partial sum sum_{m<=M} m^{1/p} sqrt(2)/(pi m) sin(m pi x).

    Chunked compensated accumulation; M up to 10^7 is summed directly.
    """
    if p <= 2.0 or M < 1:
        raise ValueError("need p > 2 and M >= 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise ValueError("x must lie in (0, 1)")
    total = np.zeros_like(x)
    comp = np.zeros_like(x)  # Kahan compensation carried across chunks
    for start in range(1, M + 1, chunk):
        m = np.arange(start, min(start + chunk, M + 1), dtype=float)
        coeff = m ** (1.0 / p) * (math.sqrt(2.0) / (math.pi * m))
        part = np.sin(np.outer(x, m * math.pi)) @ coeff
        y = part - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total if total.size > 1 else float(total[0])


def chalf_haar(q: float, m: int, x, M_series: int = 512):
    """Image of the m-th Haar wavelet under the smoothed-covariance root.

    The sine-coefficient inner products of the Haar wavelet are evaluated in
    closed form; the sine series is truncated at M_series terms.
    """
    if q <= 1.0:
        raise ValueError("need q > 1")
    if m < 1:
        raise ValueError("wavelet index starts at 1")
    x = _check_x(np.atleast_1d(x))
    level, shift = _lc_level_shift(m)
    a = shift / 2.0 ** level
    mid = (shift + 0.5) / 2.0 ** level
    b = (shift + 1.0) / 2.0 ** level
    n = np.arange(1, M_series + 1, dtype=float)
    # int_a^b sin(pi n y) psi_m(y) dy with psi_m = +-2^{level/2} on half-cells
    inner = 2.0 ** (level / 2.0) * (
        np.cos(math.pi * n * a) - 2.0 * np.cos(math.pi * n * mid)
        + np.cos(math.pi * n * b)) / (math.pi * n)
    coeff = 2.0 * (math.pi * n) ** (-q) * inner
    return np.sin(math.pi * np.outer(x, n)) @ coeff


def sample_paths(expansion: FieldExpansion, x, n_samples: int, seed: int):
    """Realizations of a(x) on a given grid; one RNG stream per sample."""
    x = _check_x(np.atleast_1d(x))
    Phi = np.stack([expansion.phi(m, x) for m in range(1, expansion.M + 1)])
    master = np.random.SeedSequence(seed)
    out = np.empty((n_samples, len(x)))
    for i, child in enumerate(master.spawn(n_samples)):
        xi = np.random.default_rng(child).standard_normal(expansion.M)
        out[i] = np.exp(xi @ Phi)
    return out

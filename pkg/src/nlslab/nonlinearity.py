"""Admissible nonlinearities f(u) = g(|u|^2) u and numeric checks of their growth bounds.

Three built-in families:

* ``double_power(alpha, beta)``: f(u) = |u|^alpha u - |u|^beta u, focusing at small
  amplitude and defocusing at large amplitude (0 < alpha < beta).
* ``pure_power(alpha)``:  f(u) = |u|^alpha u, the beta-coefficient-zero limit of the
  double power; its Hoelder envelope is declared with alpha1 = alpha2 = alpha.
* ``sine_example()``: f(s) = s - sin(s) on the reals, extended gauge-covariantly;
  behaves like |u|^2 u / 3 near zero and supports a half-kink with plateau 2*pi.

Everything is evaluated through g(|u|^2) (never through |u| directly) so that the
gauge covariance f(e^{i theta} z) = e^{i theta} f(z) holds bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Sweep used by the assumption checker: covers both asymptotic regimes of the
# envelope C0 (s^{a1/2} + s^{a2/2}).
DEFAULT_SWEEP = (1e-8, 1e8, 200)

# Below this |u|^2 the sine family switches to series to avoid cancellation.
_SINE_SERIES_CUT = 0.25


def _sine_g(s):
    sigma = np.sqrt(s)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = 1.0 - np.sin(sigma) / sigma
    series = s / 6.0 - s**2 / 120.0 + s**3 / 5040.0 - s**4 / 362880.0
    return np.where(s < _SINE_SERIES_CUT, series, direct)


def _sine_gp(s):
    sigma = np.sqrt(s)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = (np.sin(sigma) - sigma * np.cos(sigma)) / (2.0 * sigma**3)
    series = 1.0 / 6.0 - s / 60.0 + s**2 / 1680.0 - s**3 / 90720.0
    return np.where(s < _SINE_SERIES_CUT, series, direct)


def _sine_gpp(s):
    sigma = np.sqrt(s)
    with np.errstate(invalid="ignore", divide="ignore"):
        num = 2.0 * s * np.sin(sigma) - 6.0 * np.sin(sigma) + 6.0 * sigma * np.cos(sigma)
        direct = num / (8.0 * sigma**5)
    series = -1.0 / 60.0 + s / 840.0 - s**2 / 30240.0 + s**3 / 1330560.0
    return np.where(s < _SINE_SERIES_CUT, series, direct)


def _sine_f_real(s):
    return s - np.sin(s)


def _sine_big_f(s):
    direct = 0.5 * s**2 + np.cos(s) - 1.0
    series = s**4 / 24.0 - s**6 / 720.0 + s**8 / 40320.0
    return np.where(np.abs(s) < 0.1, series, direct)


@dataclass(frozen=True)
class Nonlinearity:
    """One admissible nonlinearity with its declared Hoelder exponents.

    ``alpha1 <= alpha2`` are the declared exponents of the envelope
    |s g'(s)| + |s^2 g''(s)| <= C0 (s^{alpha1/2} + s^{alpha2/2}); ``c0`` is the
    declared constant (None means "estimate me numerically").
    """

    kind: str
    alpha: float = float("nan")
    beta: float = float("nan")
    alpha1: float = float("nan")
    alpha2: float = float("nan")
    c0: float | None = None

    def __post_init__(self):
        if self.kind not in ("double_power", "pure_power", "sine_example"):
            raise ConfigError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "double_power" and not 0 < self.alpha < self.beta:
            raise ConfigError("double_power requires 0 < alpha < beta")
        if self.kind == "pure_power" and not self.alpha > 0:
            raise ConfigError("pure_power requires alpha > 0")
        if not 0 < self.alpha1 <= self.alpha2:
            raise ConfigError("need 0 < alpha1 <= alpha2")

    # -- pointwise maps ------------------------------------------------------

    def g(self, s):
        if self.kind == "double_power":
            return s ** (self.alpha / 2.0) - s ** (self.beta / 2.0)
        if self.kind == "pure_power":
            return s ** (self.alpha / 2.0)
        return _sine_g(s)

    def g_prime(self, s):
        a, b = self.alpha, self.beta
        if self.kind == "double_power":
            return 0.5 * a * s ** (a / 2.0 - 1.0) - 0.5 * b * s ** (b / 2.0 - 1.0)
        if self.kind == "pure_power":
            return 0.5 * a * s ** (a / 2.0 - 1.0)
        return _sine_gp(s)

    def g_second(self, s):
        a, b = self.alpha, self.beta
        if self.kind == "double_power":
            return (0.5 * a * (0.5 * a - 1.0) * s ** (a / 2.0 - 2.0)
                    - 0.5 * b * (0.5 * b - 1.0) * s ** (b / 2.0 - 2.0))
        if self.kind == "pure_power":
            return 0.5 * a * (0.5 * a - 1.0) * s ** (a / 2.0 - 2.0)
        return _sine_gpp(s)

    def f(self, u):
        """f(u) = g(|u|^2) u for complex scalars or arrays; f(0) = 0."""
        u = np.asarray(u)
        s = (u * np.conj(u)).real
        return self.g(s) * u

    def f_prime_real(self, s):
        """d/ds f(s) for real s > 0 (used for h'(b) and Lipschitz constants)."""
        a, b = self.alpha, self.beta
        if self.kind == "double_power":
            return (1.0 + a) * s**a - (1.0 + b) * s**b
        if self.kind == "pure_power":
            return (1.0 + a) * s**a
        return 1.0 - np.cos(s)

    def f_second_real(self, s):
        """d^2/ds^2 f(s) for real s > 0."""
        a, b = self.alpha, self.beta
        if self.kind == "double_power":
            return (1.0 + a) * a * s ** (a - 1.0) - (1.0 + b) * b * s ** (b - 1.0)
        if self.kind == "pure_power":
            return (1.0 + a) * a * s ** (a - 1.0)
        return np.sin(s)

    def big_f(self, s):
        """Antiderivative F(s) = int_0^s f(sigma) d sigma for real s >= 0."""
        a, b = self.alpha, self.beta
        if self.kind == "double_power":
            return s ** (a + 2.0) / (a + 2.0) - s ** (b + 2.0) / (b + 2.0)
        if self.kind == "pure_power":
            return s ** (a + 2.0) / (a + 2.0)
        return _sine_big_f(s)

    def big_g(self, s):
        """G(s) = int_0^s g(sigma) d sigma = 2 F(sqrt(s)); enters the energy density."""
        return 2.0 * self.big_f(np.sqrt(s))

    def wirtinger(self, u):
        """(f_z, f_zbar) at u: f_z = g + g' |u|^2, f_zbar = g' u^2.

        The limits at u = 0 vanish for every admissible exponent, so the
        singular g'(0) never leaks out.
        """
        u = np.asarray(u)
        s = (u * np.conj(u)).real
        pos = s > 0.0
        gp = np.zeros_like(s)
        sgp = np.zeros_like(s)
        if np.any(pos):
            gp_pos = self.g_prime(s[pos])
            gp[pos] = gp_pos
            sgp[pos] = gp_pos * s[pos]
        fz = self.g(s) + sgp
        fzbar = gp * u * u
        return fz, fzbar

    # -- serialization -------------------------------------------------------

    def to_config(self):
        if self.kind == "double_power":
            return {"kind": "double_power", "alpha": self.alpha, "beta": self.beta}
        if self.kind == "pure_power":
            return {"kind": "pure_power", "alpha": self.alpha}
        return {"kind": "sine_example"}

    def label(self):
        if self.kind == "double_power":
            return f"double_power({self.alpha:g},{self.beta:g})"
        if self.kind == "pure_power":
            return f"pure_power({self.alpha:g})"
        return "sine_example"


def double_power(alpha, beta, c0=2.0):
    return Nonlinearity(kind="double_power", alpha=float(alpha), beta=float(beta),
                        alpha1=float(alpha), alpha2=float(beta), c0=c0)


def pure_power(alpha, c0=1.0):
    return Nonlinearity(kind="pure_power", alpha=float(alpha),
                        alpha1=float(alpha), alpha2=float(alpha), c0=c0)


def sine_example():
    # Splits as |s|^2 s / 3 plus an O(s^5) remainder, hence the (2, 4) envelope;
    # C0 is estimated by check_assumption_f0, never assumed.
    return Nonlinearity(kind="sine_example", alpha1=2.0, alpha2=4.0, c0=None)


def nonlinearity_from_config(cfg):
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("nonlinearity config must be a dict with a 'kind' key")
    kind = cfg["kind"]
    keys = set(cfg) - {"kind"}
    if kind == "double_power":
        if keys != {"alpha", "beta"}:
            raise ConfigError("double_power takes exactly 'alpha' and 'beta'")
        return double_power(cfg["alpha"], cfg["beta"])
    if kind == "pure_power":
        if keys != {"alpha"}:
            raise ConfigError("pure_power takes exactly 'alpha'")
        return pure_power(cfg["alpha"])
    if kind == "sine_example":
        if keys:
            raise ConfigError("sine_example takes no parameters")
        return sine_example()
    raise ConfigError(f"unknown nonlinearity kind {kind!r}")


# -- assumption checks --------------------------------------------------------


@dataclass
class EnvelopeReport:
    """Outcome of the derivative-envelope check on a log-spaced sweep."""

    passed: bool
    worst_ratio: float
    minimal_c0: float
    declared_c0: float | None
    unbounded: bool
    worst_s: float


def check_assumption_f0(nl, samples=None):
    """Verify |s g'| + |s^2 g''| <= C0 (s^{a1/2} + s^{a2/2}) over a log sweep.

    Reports the minimal feasible C0 (the worst ratio).  The check fails when the
    ratio is still climbing at either end of the sweep, which signals a
    misdeclared exponent pair rather than a large constant.
    """
    if samples is None:
        lo, hi, n = DEFAULT_SWEEP
        samples = np.geomspace(lo, hi, n)
    s = np.asarray(samples, dtype=float)
    lhs = np.abs(s * nl.g_prime(s)) + np.abs(s**2 * nl.g_second(s))
    envelope = s ** (nl.alpha1 / 2.0) + s ** (nl.alpha2 / 2.0)
    ratio = lhs / envelope
    worst = int(np.argmax(ratio))

    # Unbounded = the ratio keeps growing by a solid factor per decade of s at
    # a sweep end; a misdeclared exponent gives power-law growth there, while a
    # correct envelope approaches a finite limit.
    decades = math.log10(s[-1] / s[0])
    ppd = max(1, int(round((len(s) - 1) / decades)))
    unbounded = False
    if len(s) > ppd:
        if ratio[0] > 1.5 * ratio[ppd]:
            unbounded = True
        if ratio[-1] > 1.5 * ratio[-1 - ppd]:
            unbounded = True

    minimal_c0 = float(ratio[worst])
    declared = nl.c0
    passed = (not unbounded) and (declared is None or minimal_c0 <= declared * (1 + 1e-12))
    return EnvelopeReport(passed=passed, worst_ratio=minimal_c0, minimal_c0=minimal_c0,
                          declared_c0=declared, unbounded=unbounded, worst_s=float(s[worst]))


@dataclass
class DifferenceBoundReport:
    """Smallest C with |f(W+eta)-f(W)| <= C [ |eta|(|W|^a1+|W|^a2) + |eta|^{1+a1} + |eta|^{1+a2} ]."""

    fitted_c: float
    stable: bool
    by_scale: dict


def _difference_bound_c(nl, w, eta):
    wg, eg = np.meshgrid(np.asarray(w).ravel(), np.asarray(eta).ravel(), indexing="ij")
    lhs = np.abs(nl.f(wg + eg) - nl.f(wg))
    aw = np.abs(wg)
    ae = np.abs(eg)
    rhs = ae * (aw**nl.alpha1 + aw**nl.alpha2) + ae ** (1.0 + nl.alpha1) + ae ** (1.0 + nl.alpha2)
    mask = rhs > 0.0
    if not np.any(mask):
        return 0.0
    return float(np.max(lhs[mask] / rhs[mask]))


def check_lemma2_bound(nl, w_values, eta_values, scales=(0.25, 0.5, 1.0, 2.0, 4.0)):
    """Fit the constant of the pointwise difference bound over sampled pairs.

    The fitted constant must be stable (within a factor of two) when every
    sample magnitude is rescaled through [1/4, 4]; otherwise the declared
    exponents do not actually control f near the sampled range.
    """
    base = _difference_bound_c(nl, w_values, eta_values)
    by_scale = {}
    stable = True
    for c in scales:
        val = _difference_bound_c(nl, np.asarray(w_values) * c, np.asarray(eta_values) * c)
        by_scale[c] = val
        if base > 0 and not (0.5 * base <= val <= 2.0 * base):
            stable = False
        if base == 0.0 and val > 0.0:
            stable = val < 1e-12
    return DifferenceBoundReport(fitted_c=base, stable=stable, by_scale=by_scale)

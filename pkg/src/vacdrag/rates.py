"""Detector excitation rates above the moving half-space.

A stationary dipole detector in free space at zero temperature never clicks:
rate_free_space returns the exact zero with zero error bar. Above a moving
absorptive half-space the anomalous-Doppler window opens and rate_surface
integrates the evanescent-sector rate density

    d Gamma = omega^2 F_lambda(k, ky) Im r_lambda(-k, ky, -omega)
              e^(-2 xi z0) / (xi (2 pi)^2) dk dky

over k in (omega/|V|, k_max), ky folded over both signs. Only modes with
k > omega/|V| see a negative comoving frequency and contribute; the domain
is therefore entirely evanescent (xi real) and the k_max truncation is the
caller's resolution knob, not an error source tracked here.

finite_time_probability replaces the golden-rule delta with the finite-time
sinc kernel: the rate function is sampled on a frequency window, splined,
and convolved with 4 sin^2(x T / 2) / x^2. P(T)/T approaches the stationary
rate like 1/T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .greens import _fresnel_amplitudes, _xi_medium
from .kinematics import MotionFrame
from .medium import SusceptibilityModel, chi
from .quadrature import NonConvergenceError, QuadratureSpec, integrate_adaptive

__all__ = [
    "DetectorSpec",
    "RateResult",
    "finite_time_probability",
    "rate_free_space",
    "rate_surface",
    "rate_vs_distance",
]


@dataclass(frozen=True)
class DetectorSpec:
    """Dipole detector: coupling vector kappa, gap omega, height z0."""

    kappa: tuple
    omega: float
    z0: float | None = None

    def __post_init__(self):
        kappa = tuple(float(c) for c in self.kappa)
        if len(kappa) != 3:
            raise ValueError("kappa must have three components")
        object.__setattr__(self, "kappa", kappa)
        if not self.omega > 0.0:
            raise ValueError("omega must be > 0")
        if not any(c != 0.0 for c in kappa):
            raise ValueError("kappa must be nonzero")
        if self.z0 is not None and not self.z0 > 0.0:
            raise ValueError("z0 must be > 0 when given")


@dataclass(frozen=True)
class RateResult:
    gamma: float
    error_estimate: float
    converged: bool
    k_lower: float
    k_max: float
    breakdown: dict
    exact: bool = False


def _k_lower(omega: float, beta: float) -> float:
    speed = abs(beta)
    return omega / speed if speed > 0.0 else math.inf


def rate_free_space(det: DetectorSpec, frame: MotionFrame,
                    quad: QuadratureSpec) -> RateResult:
    """Excitation rate with no surface: exactly zero at zero temperature."""
    k_max = quad.k_max if quad.k_max is not None else math.inf
    return RateResult(gamma=0.0, error_estimate=0.0, converged=True,
                      k_lower=_k_lower(det.omega, frame.beta), k_max=k_max,
                      breakdown={"s": 0.0, "p": 0.0}, exact=True)


def _channel_rate(det, frame, model, quad, channel):
    """One polarization channel of the surface rate (without the omega^2)."""
    omega = det.omega
    z0 = det.z0
    kx_c, ky_c, kz_c = det.kappa
    speed = abs(frame.beta)
    gamma_v = frame.gamma
    k_lo = omega / speed
    ky_cut = max(25.0 / z0, 2.0 * omega, 5.0)
    inner_quad = replace(quad, rel_tol=max(0.1 * quad.rel_tol, 1e-13),
                         abs_tol=0.1 * quad.abs_tol)

    def inner(k):
        cap = gamma_v * (speed * k - omega)
        eps = 1.0 + chi(model, "electric", cap)
        mu = 1.0 + chi(model, "magnetic", cap)

        def density(ky):
            kpar2 = k * k + ky * ky
            xi = np.sqrt(kpar2 - omega * omega)
            xim = _xi_medium(kpar2, eps, mu, omega)
            rs, rp = _fresnel_amplitudes(eps, mu, xi, xim)
            if channel == "s":
                fold = ((kx_c * ky + ky_c * k) ** 2
                        + (-kx_c * ky + ky_c * k) ** 2) / kpar2
                im_r = np.imag(rs)
            else:
                fold = (xi * xi * ((kx_c * k - ky_c * ky) ** 2
                                   + (kx_c * k + ky_c * ky) ** 2)
                        + 2.0 * kz_c ** 2 * kpar2 ** 2) / (kpar2 * omega ** 2)
                im_r = np.imag(rp)
            weight = np.exp(-2.0 * xi * z0) / xi / (2.0 * math.pi) ** 2
            return weight * fold * im_r

        res = integrate_adaptive(density, 0.0, ky_cut, inner_quad)
        if not res.converged:
            raise NonConvergenceError(
                f"ky integral for the {channel} channel failed at k = {k:.6g}",
                residual=res.error_estimate)
        return res.value

    def outer(karr):
        return np.array([inner(float(k)) for k in np.atleast_1d(karr)])

    res = integrate_adaptive(outer, k_lo, quad.k_max, quad)
    return omega ** 2 * res.value, omega ** 2 * res.error_estimate, res.converged


def rate_surface(det: DetectorSpec, frame: MotionFrame,
                 model: SusceptibilityModel, quad: QuadratureSpec) -> RateResult:
    """Stationary-detector excitation rate above the moving half-space."""
    if frame.beta == 0.0:
        return RateResult(gamma=0.0, error_estimate=0.0, converged=True,
                          k_lower=math.inf,
                          k_max=quad.k_max if quad.k_max is not None else math.inf,
                          breakdown={"s": 0.0, "p": 0.0}, exact=True)
    if det.z0 is None:
        raise ValueError("detector height z0 is required for the surface rate")
    if quad.k_max is None:
        raise ValueError("quad.k_max must be set for the surface rate")
    k_lo = _k_lower(det.omega, frame.beta)
    if quad.k_max <= k_lo:
        raise ValueError("quad.k_max must exceed omega / |beta|")
    if not model.electric_terms and not model.magnetic_terms:
        return RateResult(gamma=0.0, error_estimate=0.0, converged=True,
                          k_lower=k_lo, k_max=quad.k_max,
                          breakdown={"s": 0.0, "p": 0.0}, exact=True)
    g_s, e_s, conv_s = _channel_rate(det, frame, model, quad, "s")
    g_p, e_p, conv_p = _channel_rate(det, frame, model, quad, "p")
    return RateResult(gamma=g_s + g_p, error_estimate=e_s + e_p,
                      converged=conv_s and conv_p, k_lower=k_lo,
                      k_max=quad.k_max, breakdown={"s": g_s, "p": g_p})


def rate_vs_distance(det: DetectorSpec, frame: MotionFrame,
                     model: SusceptibilityModel, quad: QuadratureSpec,
                     z0_ladder) -> list:
    """Surface rate at each height of a ladder, detector otherwise fixed."""
    return [rate_surface(replace(det, z0=float(z)), frame, model, quad)
            for z in z0_ladder]


@lru_cache(maxsize=32)
def _rate_spline(model, frame, det, quad):
    """Cubic spline of the rate as a function of the detector gap over the
    window [0.2 omega, 1.8 omega] used by the finite-time kernel."""
    omega = det.omega
    grid = np.linspace(0.2 * omega, 1.8 * omega, 65)
    values = [rate_surface(replace(det, omega=float(w)), frame, model, quad).gamma
              for w in grid]
    return CubicSpline(grid, np.asarray(values))


def finite_time_probability(det: DetectorSpec, frame: MotionFrame,
                            model: SusceptibilityModel, quad: QuadratureSpec,
                            T: float) -> float:
    """Excitation probability after a finite interaction time T.

    The golden-rule delta is broadened to W_T(x) = 4 sin^2(x T / 2) / x^2 and
    convolved with the rate function over a window of width 0.8 omega around
    the detector gap; P(T)/T approaches the stationary rate as T grows.
    """
    if not T > 0.0:
        raise ValueError("T must be > 0")
    if not model.electric_terms and not model.magnetic_terms:
        return 0.0
    if frame.beta == 0.0:
        return 0.0
    omega = det.omega
    half_width = 0.8 * omega
    needed = 1.8 * omega / abs(frame.beta)
    if quad.k_max is None or quad.k_max <= needed:
        raise ValueError("quad.k_max must exceed 1.8 omega / |beta| for the "
                         "finite-time window")
    spline = _rate_spline(model, frame, det, quad)
    cycles = 2.0 * half_width * T / (2.0 * math.pi)
    n = max(513, int(16 * cycles) + 1)
    if n % 2 == 0:
        n += 1
    u = np.linspace(-half_width, half_width, n)
    kernel = T * T * np.sinc(u * T / (2.0 * math.pi)) ** 2
    rate_vals = spline(omega - u)
    return float(simpson(0.5 * rate_vals * kernel, x=u) / math.pi)

"""Refractive indices, phase matching and dispersion for uniaxial BBO.

Wavelengths at the API surface are vacuum wavelengths (nm in configs, um in
the Sellmeier formulas); angles are degrees.  Internally everything is turned
into angular frequency (rad/s) exactly once, here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .constants import C_LIGHT
from .errors import ConfigError, ConvergenceError

ENERGY_CONSERVATION_RTOL = 5e-4


@dataclass(frozen=True)
class SellmeierCoefficients:
    """n(lam)^2 = a + b/(lam^2 - c) - d*lam^2 with lam in micrometres."""

    a: float
    b_um2: float
    c_um2: float
    d_per_um2: float

    def __post_init__(self):
        if self.b_um2 <= 0 or self.c_um2 <= 0 or self.d_per_um2 <= 0:
            raise ConfigError("Sellmeier coefficients b, c, d must be positive")


# Kato (1986) coefficients for beta-BBO at room temperature.
BBO_ORDINARY = SellmeierCoefficients(2.7359, 0.018782, 0.01822, 0.01354)
BBO_EXTRAORDINARY = SellmeierCoefficients(2.3753, 0.01224, 0.01667, 0.01516)


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal geometry, carrier wavelengths and nonlinearity."""

    length_m: float
    cut_angle_deg: float
    lambda_p_nm: float
    lambda_s_nm: float
    lambda_i_nm: float
    ordinary: SellmeierCoefficients = BBO_ORDINARY
    extraordinary: SellmeierCoefficients = BBO_EXTRAORDINARY
    chi2_m_per_v: float = 3.91e-12

    def __post_init__(self):
        if self.length_m <= 0:
            raise ConfigError("crystal length must be positive")
        if not 0.0 < self.cut_angle_deg < 90.0:
            raise ConfigError("cut angle must lie in (0, 90) degrees")
        residual = abs(1.0 / self.lambda_p_nm - 1.0 / self.lambda_s_nm
                       - 1.0 / self.lambda_i_nm) * self.lambda_p_nm
        if residual > ENERGY_CONSERVATION_RTOL:
            raise ConfigError(
                f"1/lambda_p = 1/lambda_s + 1/lambda_i violated by {residual:.2e} "
                f"relative (tolerance {ENERGY_CONSERVATION_RTOL:.0e})")

    @classmethod
    def with_derived_idler(cls, length_m, cut_angle_deg, lambda_p_nm,
                           lambda_s_nm, **kwargs) -> "CrystalConfig":
        """Build a config with the idler wavelength fixed by energy conservation."""
        lambda_i = 1.0 / (1.0 / lambda_p_nm - 1.0 / lambda_s_nm)
        return cls(length_m, cut_angle_deg, lambda_p_nm, lambda_s_nm,
                   lambda_i, **kwargs)

    @property
    def omega_p(self) -> float:
        return 2.0 * np.pi * C_LIGHT / (self.lambda_p_nm * 1e-9)

    @property
    def omega_s(self) -> float:
        return 2.0 * np.pi * C_LIGHT / (self.lambda_s_nm * 1e-9)

    @property
    def omega_i(self) -> float:
        return 2.0 * np.pi * C_LIGHT / (self.lambda_i_nm * 1e-9)

    def at_angle(self, theta_deg: float) -> "CrystalConfig":
        return replace(self, cut_angle_deg=theta_deg)


@dataclass(frozen=True)
class DispersionParams:
    """Wave vectors and their first/second frequency derivatives.

    k in 1/m, k1 = dk/domega in s/m, k2 = d2k/domega2 in s^2/m, for the pump,
    signal and idler carriers.
    """

    k_p: float
    k_s: float
    k_i: float
    k1_p: float
    k1_s: float
    k1_i: float
    k2_p: float
    k2_s: float
    k2_i: float

    def with_zeroed_second_order(self) -> "DispersionParams":
        return replace(self, k2_p=0.0, k2_s=0.0, k2_i=0.0)


def ordinary_index(lambda_um, coeffs: SellmeierCoefficients):
    """Sellmeier index n(lam) = sqrt(a + b/(lam^2 - c) - d lam^2)."""
    lam2 = np.asarray(lambda_um, dtype=float) ** 2
    if np.any(lam2 <= coeffs.c_um2):
        raise ValueError("wavelength inside the Sellmeier pole (lambda^2 <= c)")
    radicand = coeffs.a + coeffs.b_um2 / (lam2 - coeffs.c_um2) - coeffs.d_per_um2 * lam2
    if np.any(radicand <= 0.0):
        raise ValueError("Sellmeier radicand is non-positive")
    n = np.sqrt(radicand)
    return n if n.ndim else float(n)


def extraordinary_index_at_angle(lambda_um, theta_deg, config: CrystalConfig):
    """Index seen by an extraordinary wave propagating at theta to the optic axis."""
    theta = np.radians(theta_deg)
    n_e = ordinary_index(lambda_um, config.extraordinary)
    n_o = ordinary_index(lambda_um, config.ordinary)
    return (np.sin(theta) ** 2 / n_e ** 2 + np.cos(theta) ** 2 / n_o ** 2) ** -0.5


def wavevector(omega, config: CrystalConfig, axis: str = "o",
               theta_deg: float | None = None):
    """k(omega) = n(omega) * omega / c for the ordinary or angled-pump axis."""
    lambda_um = 2.0 * np.pi * C_LIGHT / np.asarray(omega, dtype=float) * 1e6
    if axis == "o":
        n = ordinary_index(lambda_um, config.ordinary)
    elif axis == "e":
        if theta_deg is None:
            theta_deg = config.cut_angle_deg
        n = extraordinary_index_at_angle(lambda_um, theta_deg, config)
    else:
        raise ValueError(f"unknown axis {axis!r}")
    return n * np.asarray(omega, dtype=float) / C_LIGHT


def phase_mismatch_at_angle(config: CrystalConfig, theta_deg: float) -> float:
    """Carrier mismatch k_p(theta) - k_s - k_i in 1/m."""
    k_p = wavevector(config.omega_p, config, axis="e", theta_deg=theta_deg)
    k_s = wavevector(config.omega_s, config, axis="o")
    k_i = wavevector(config.omega_i, config, axis="o")
    return float(k_p - k_s - k_i)


def solve_phase_matching_angle(config: CrystalConfig,
                               theta_lo: float = 0.5,
                               theta_hi: float = 89.5) -> float:
    """Angle (deg) at which the carriers are phase matched.

    Bracketed root finding on k_p(theta) - k_s - k_i; raises if the mismatch
    does not change sign on the bracket.
    """
    f_lo = phase_mismatch_at_angle(config, theta_lo)
    f_hi = phase_mismatch_at_angle(config, theta_hi)
    if f_lo * f_hi > 0.0:
        raise ConvergenceError(
            "carrier phase mismatch has constant sign between "
            f"{theta_lo} and {theta_hi} degrees; no phase-matching angle")
    theta = brentq(lambda t: phase_mismatch_at_angle(config, t),
                   theta_lo, theta_hi, xtol=1e-6)
    residual = abs(phase_mismatch_at_angle(config, theta)) * config.length_m
    if residual >= 1e-3:
        raise ConvergenceError(
            f"phase-matching residual |dk|*lc = {residual:.2e} exceeds 1e-3")
    return float(theta)


def _derivatives(omega0: float, k_of_omega, rel_step: float = 5e-4,
                 rtol: float = 1e-6, max_halvings: int = 6):
    """k, dk/domega, d2k/domega2 by five-point central differences.

    The step is accepted once halving it moves both derivatives by less than
    rtol relative (Richardson check).  Steps are kept well above the
    cancellation floor of the second difference.
    """

    def stencil(h):
        km2, km1, k0, k1, k2 = (k_of_omega(omega0 + j * h) for j in (-2, -1, 0, 1, 2))
        d1 = (km2 - 8.0 * km1 + 8.0 * k1 - k2) / (12.0 * h)
        d2 = (-km2 + 16.0 * km1 - 30.0 * k0 + 16.0 * k1 - k2) / (12.0 * h ** 2)
        return k0, d1, d2

    h = omega0 * rel_step
    prev = stencil(h)
    for _ in range(max_halvings):
        h *= 0.5
        cur = stencil(h)
        err = max(abs(cur[1] - prev[1]) / abs(cur[1]),
                  abs(cur[2] - prev[2]) / abs(cur[2]))
        if err < rtol:
            return cur
        prev = cur
    raise ConvergenceError(
        "finite-difference dispersion derivatives did not stabilise "
        f"(last relative change {err:.1e})")


def dispersion_params(config: CrystalConfig,
                      theta_deg: float | None = None) -> DispersionParams:
    """Carrier wave vectors with group and second-order dispersion.

    The pump uses the angle-dependent extraordinary index; signal and idler
    the ordinary one.
    """
    if theta_deg is None:
        theta_deg = config.cut_angle_deg
    kp = _derivatives(config.omega_p,
                      lambda w: wavevector(w, config, "e", theta_deg))
    ks = _derivatives(config.omega_s, lambda w: wavevector(w, config, "o"))
    ki = _derivatives(config.omega_i, lambda w: wavevector(w, config, "o"))
    return DispersionParams(k_p=kp[0], k_s=ks[0], k_i=ki[0],
                            k1_p=kp[1], k1_s=ks[1], k1_i=ki[1],
                            k2_p=kp[2], k2_s=ks[2], k2_i=ki[2])

"""Pump spectrum, phase mismatch and the joint spectral amplitude.

The JSA couples idler sidebands Omega_i (rows) to signal sidebands Omega_s
(columns); both axes share one uniform grid symmetric about zero.  With the
pump spectral phase neglected the kernel is real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .dispersion import CrystalConfig, DispersionParams, dispersion_params
from .errors import ConfigError, SupportTruncationError

FOUR_LN2 = 4.0 * np.log(2.0)
# Boundary level (relative to the peak) below which the Gaussian envelope of
# the kernel must have fallen for the grid to count as enclosing the support.
ENCLOSURE_TOL = 1e-6


@dataclass(frozen=True)
class PumpSpectrum:
    """Gaussian pump spectral amplitude, normalised to unit peak."""

    fwhm_rads: float                 # spectral FWHM of the amplitude, rad/s
    peak_amplitude: float = 1.0      # dimensionless scale A0 (enters the gain)
    duration_s: float | None = None  # amplitude-envelope FWHM of the pulse

    def __post_init__(self):
        if self.fwhm_rads <= 0:
            raise ConfigError("pump spectral FWHM must be positive")


def pump_amplitude(omega_sum, pump: PumpSpectrum):
    """Unit-peak spectral amplitude at pump sideband Omega_i + Omega_s."""
    x = np.asarray(omega_sum, dtype=float)
    return np.exp(-FOUR_LN2 * x ** 2 / pump.fwhm_rads ** 2)


def pump_from_autocorrelation(autocorr_fwhm_s: float,
                              fwhm_rads: float) -> PumpSpectrum:
    """Pump model from an autocorrelation width and a measured spectral FWHM.

    Gaussian deconvolution (factor 0.707), the sqrt(2) shortening under
    frequency doubling and the sqrt(2) field-vs-intensity widening cancel to
    duration = 0.707 * autocorrelation FWHM.  The spectral width is taken from
    the measurement, not from the Fourier limit.
    """
    if autocorr_fwhm_s <= 0:
        raise ConfigError("autocorrelation FWHM must be positive")
    return PumpSpectrum(fwhm_rads=fwhm_rads,
                        duration_s=0.707 * autocorr_fwhm_s)


def doubled_intensity_fwhm(autocorr_fwhm_s: float) -> float:
    """Intensity FWHM of the frequency-doubled pulse: 0.707 * input / sqrt(2)."""
    return 0.707 * autocorr_fwhm_s / np.sqrt(2.0)


def fourier_limit_fwhm(duration_s: float) -> float:
    """Transform-limited spectral FWHM 0.44 * 2 pi / duration, in rad/s."""
    return 0.44 * 2.0 * np.pi / duration_s


def phase_mismatch(omega_i, omega_s, disp: DispersionParams):
    """Taylor-expanded mismatch around a phase-matched carrier, in 1/m.

    First order in group velocities plus second-order dispersion; the
    zeroth-order term vanishes at the phase-matched angle and is omitted.
    """
    oi = np.asarray(omega_i, dtype=float)
    os_ = np.asarray(omega_s, dtype=float)
    lin = disp.k1_p * (oi + os_) - disp.k1_s * os_ - disp.k1_i * oi
    quad = 0.5 * (disp.k2_p * (oi + os_) ** 2
                  - disp.k2_s * os_ ** 2 - disp.k2_i * oi ** 2)
    return lin + quad


def sinc(x):
    """sin(x)/x with a series branch near zero to avoid cancellation."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    out = np.empty_like(x)
    xs = x[small]
    out[small] = 1.0 - xs ** 2 / 6.0 + xs ** 4 / 120.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GaussianJsaParams:
    """Widths of the bivariate-Gaussian JSA approximation (rad/s)."""

    delta1: float       # along Omega_i + Omega_s
    delta2: float       # along Omega_i - Omega_s
    delta_pm: float     # phase-matching contribution folded into delta1

    def __post_init__(self):
        if not 0 < self.delta1 < self.delta2:
            raise ConfigError("expected 0 < delta1 < delta2")

    @property
    def tau(self) -> float:
        """Spectral scale 1/sqrt(delta1*delta2) of the mode family, in s."""
        return 1.0 / np.sqrt(self.delta1 * self.delta2)


def gaussian_approx_params(config: CrystalConfig, pump: PumpSpectrum,
                           disp: DispersionParams | None = None) -> GaussianJsaParams:
    """Bivariate widths from sinc(x) ~ exp(-x^2/5) matched at the FWHM."""
    if disp is None:
        disp = dispersion_params(config)
    lc = config.length_m
    delta_pm = np.sqrt(40.0) / (abs(2.0 * disp.k1_p - disp.k1_s - disp.k1_i) * lc)
    delta1 = (2.0 * FOUR_LN2 / pump.fwhm_rads ** 2 + delta_pm ** -2) ** -0.5
    delta2 = np.sqrt(40.0) / (abs(disp.k1_i - disp.k1_s) * lc)
    return GaussianJsaParams(delta1=delta1, delta2=delta2, delta_pm=delta_pm)


@dataclass(frozen=True)
class JsaGrid:
    """Discretised JSA on a shared sideband axis.

    values[i, j] = M1(omega[i] idler sideband, omega[j] signal sideband).
    """

    omega: np.ndarray
    values: np.ndarray
    d_omega: float
    pump: PumpSpectrum
    omega_i_carrier: float
    omega_s_carrier: float
    gauss: GaussianJsaParams

    def __post_init__(self):
        n = self.omega.size
        if n < 256:
            raise ConfigError("JSA grid needs at least 256 points per axis")
        if not np.allclose(self.omega, -self.omega[::-1], rtol=0, atol=1e-6 * self.d_omega):
            raise ConfigError("JSA grid must be symmetric about zero")
        if np.max(np.abs(self.values)) > 1.0 + 1e-9:
            raise ConfigError("|M1| must not exceed 1")

    @property
    def boundary_ratio(self) -> float:
        """max |M1| on the outermost grid frame relative to the global max.

        Diagnostic only: the sinc tail decays algebraically along the
        anti-diagonal, so this never reaches the enclosure tolerance used for
        the Gaussian envelope.
        """
        v = np.abs(self.values)
        frame = max(v[0, :].max(), v[-1, :].max(), v[:, 0].max(), v[:, -1].max())
        return float(frame / v.max())


def default_grid(gauss: GaussianJsaParams, n_points: int = 1024,
                 span_scale: float = 2.7, max_mode: int = 40) -> np.ndarray:
    """Symmetric sideband axis sized to enclose modes up to max_mode.

    Mode m extends to ~sqrt(2m+1)*sqrt(delta1*delta2/2); span_scale sets the
    safety margin.  Oversized spans are harmful here: the quadratic mismatch
    model grows a spurious second phase-matching branch at large sidebands
    that contaminates the singular spectrum.
    """
    half_span = span_scale * np.sqrt(2.0 * max_mode + 1.0) \
        * np.sqrt(gauss.delta1 * gauss.delta2 / 2.0)
    return np.linspace(-half_span, half_span, n_points)


def build_jsa(config: CrystalConfig, pump: PumpSpectrum,
              omega: np.ndarray | None = None,
              disp: DispersionParams | None = None,
              phase_matching: str = "sinc",
              n_points: int = 1024, span_scale: float = 2.7,
              max_mode: int = 40) -> JsaGrid:
    """JSA matrix M1 = pump amplitude x phase-matching factor.

    phase_matching selects the exact "sinc" kernel or its "gaussian"
    surrogate exp(-x^2/5) (the form behind the analytic mode family).
    """
    if disp is None:
        disp = dispersion_params(config)
    gauss = gaussian_approx_params(config, pump, disp)
    if omega is None:
        omega = default_grid(gauss, n_points, span_scale, max_mode)
    omega = np.asarray(omega, dtype=float)
    d_omega = float(omega[1] - omega[0])

    oi = omega[:, None]
    os_ = omega[None, :]
    x = phase_mismatch(oi, os_, disp) * config.length_m / 2.0
    if phase_matching == "sinc":
        pm = sinc(x)
    elif phase_matching == "gaussian":
        pm = np.exp(-x ** 2 / 5.0)
    else:
        raise ConfigError(f"unknown phase_matching {phase_matching!r}")
    values = pump_amplitude(oi + os_, pump) * pm

    _check_enclosure(omega, gauss, max_mode)
    return JsaGrid(omega=omega, values=values, d_omega=d_omega, pump=pump,
                   omega_i_carrier=config.omega_i,
                   omega_s_carrier=config.omega_s, gauss=gauss)


def _check_enclosure(omega: np.ndarray, gauss: GaussianJsaParams,
                     max_mode: int) -> None:
    """Fail when the grid truncates what the mode decomposition relies on.

    Two hard requirements: the pump envelope (the narrow s-direction of the
    kernel) must have decayed below ENCLOSURE_TOL at the axis end, and the
    axis must reach past the classical turning point of the highest requested
    mode.  The sinc tail along the wide direction decays only algebraically
    and is a documented modelling choice, reported via boundary_ratio rather
    than enforced.
    """
    half_span = omega[-1]
    pump_level = np.exp(-half_span ** 2 / (2.0 * gauss.delta1 ** 2))
    if pump_level > ENCLOSURE_TOL:
        raise SupportTruncationError(
            f"pump envelope still at {pump_level:.2e} of peak at the grid "
            f"boundary (tolerance {ENCLOSURE_TOL:.0e}); enlarge the grid")
    mode_extent = np.sqrt(2.0 * max_mode + 1.0) \
        * np.sqrt(gauss.delta1 * gauss.delta2 / 2.0)
    if half_span < 1.2 * mode_extent:
        raise SupportTruncationError(
            f"grid half-span {half_span:.3e} rad/s does not enclose mode "
            f"{max_mode} (extent {mode_extent:.3e} rad/s)")


def export_magnitude_csv(jsa: JsaGrid, path) -> None:
    """|M1| as CSV, one row per idler-sideband grid index."""
    np.savetxt(path, np.abs(jsa.values), delimiter=",")

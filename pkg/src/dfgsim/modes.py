"""Temporal-mode decomposition of the JSA and per-mode amplifier gains.

The discrete SVD is taken of M1 * dOmega so the singular values carry the
continuous-kernel normalisation (units 1/s); mode samples are rescaled by
1/sqrt(dOmega) so that sum |psi|^2 dOmega = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .constants import C_LIGHT, GAIN_LENGTH_UNIT
from .dispersion import (CrystalConfig, DispersionParams, dispersion_params,
                         ordinary_index)
from .errors import ConvergenceError
from .jsa import (GaussianJsaParams, JsaGrid, PumpSpectrum, pump_amplitude,
                  phase_mismatch)


@dataclass(frozen=True)
class ModeBasis:
    """Singular values and sampled mode functions of the JSA.

    idler_modes[:, m] samples psi_m on the omega axis (detected arm),
    signal_modes[:, m] samples phi_m (input arm); both orthonormal under the
    dOmega quadrature weight.
    """

    singular_values: np.ndarray      # (M+1,), descending, 1/s
    idler_modes: np.ndarray          # (N, M+1)
    signal_modes: np.ndarray         # (N, M+1)
    omega: np.ndarray                # (N,) sideband axis, rad/s
    d_omega: float
    omega_i_carrier: float | None = None
    omega_s_carrier: float | None = None

    @property
    def max_mode(self) -> int:
        return self.singular_values.size - 1

    def modes_for_arm(self, arm: str) -> np.ndarray:
        if arm == "idler":
            return self.idler_modes
        if arm == "signal":
            return self.signal_modes
        raise ValueError(f"unknown arm {arm!r}")


@dataclass(frozen=True)
class GainProfile:
    """Per-mode Bogoliubov parameters of the amplifier."""

    g: float                     # coupling coefficient, s/mm
    length_m: float
    gains: np.ndarray            # G_m = cosh^2(g lambda_m L_mm) >= 1
    u: np.ndarray                # sqrt(G_m)
    v: np.ndarray                # sqrt(G_m - 1)
    x: np.ndarray                # v_m / u_m in [0, 1)

    @property
    def mean_photons(self) -> np.ndarray:
        """Vacuum-input (fluorescence) mean photon number per mode."""
        return self.gains - 1.0


def _fix_sign(modes: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude sample of each column positive."""
    idx = np.argmax(np.abs(modes), axis=0)
    signs = np.sign(modes[idx, np.arange(modes.shape[1])])
    signs[signs == 0] = 1.0
    return modes * signs


def svd_modes(jsa: JsaGrid, max_mode: int = 40) -> ModeBasis:
    """Numerical SVD of the JSA, truncated to modes 0..max_mode."""
    u, s, vt = np.linalg.svd(jsa.values * jsa.d_omega)
    if s[max_mode] / s[0] > 0.999:
        raise ConvergenceError(
            f"singular values barely decay up to mode {max_mode} "
            f"(ratio {s[max_mode]/s[0]:.4f}); decomposition not converged")
    lam = s[:max_mode + 1]
    psi = u[:, :max_mode + 1] / np.sqrt(jsa.d_omega)
    phi = vt[:max_mode + 1, :].T / np.sqrt(jsa.d_omega)
    # tie the arbitrary SVD sign pairs to a fixed convention, keeping
    # psi_m phi_m products unchanged
    idx = np.argmax(np.abs(psi), axis=0)
    signs = np.sign(psi[idx, np.arange(psi.shape[1])])
    signs[signs == 0] = 1.0
    psi = psi * signs
    phi = phi * signs
    return ModeBasis(singular_values=lam, idler_modes=psi, signal_modes=phi,
                     omega=jsa.omega.copy(), d_omega=jsa.d_omega,
                     omega_i_carrier=jsa.omega_i_carrier,
                     omega_s_carrier=jsa.omega_s_carrier)


def hermite_gauss_modes(tau: float, max_mode: int, omega: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite-Gauss functions 2^(1/4) sqrt(tau) h_m(sqrt2 tau w).

    Uses the normalised three-term recurrence, so no factorials overflow.
    """
    x = np.sqrt(2.0) * tau * np.asarray(omega, dtype=float)
    h = np.empty((x.size, max_mode + 1))
    h[:, 0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2.0)
    if max_mode >= 1:
        h[:, 1] = np.sqrt(2.0) * x * h[:, 0]
    for m in range(2, max_mode + 1):
        h[:, m] = (np.sqrt(2.0 / m) * x * h[:, m - 1]
                   - np.sqrt((m - 1.0) / m) * h[:, m - 2])
    return 2 ** 0.25 * np.sqrt(tau) * h


def analytic_singular_values(params: GaussianJsaParams, max_mode: int) -> np.ndarray:
    """Geometric singular-value ladder of the bivariate-Gaussian kernel."""
    d1, d2 = params.delta1, params.delta2
    lam0 = np.sqrt(2.0 * np.pi) * d1 * d2 / (d1 + d2)
    ratio = abs(d1 - d2) / (d1 + d2)
    return lam0 * ratio ** np.arange(max_mode + 1)


def analytic_modes(params: GaussianJsaParams, max_mode: int,
                   omega: np.ndarray,
                   omega_i_carrier: float | None = None,
                   omega_s_carrier: float | None = None) -> ModeBasis:
    """Closed-form mode basis of the bivariate-Gaussian JSA."""
    omega = np.asarray(omega, dtype=float)
    modes = _fix_sign(hermite_gauss_modes(params.tau, max_mode, omega))
    return ModeBasis(singular_values=analytic_singular_values(params, max_mode),
                     idler_modes=modes, signal_modes=modes.copy(),
                     omega=omega, d_omega=float(omega[1] - omega[0]),
                     omega_i_carrier=omega_i_carrier,
                     omega_s_carrier=omega_s_carrier)


def mode_gains(basis: ModeBasis, g: float, length_m: float) -> GainProfile:
    """Per-mode gains G_m = cosh^2(g lambda_m L) with g in s/mm, L in mm."""
    if g < 0:
        raise ValueError("coupling coefficient must be non-negative")
    r = g * basis.singular_values * (length_m / GAIN_LENGTH_UNIT)
    u = np.cosh(r)
    v = np.sinh(r)
    return GainProfile(g=g, length_m=length_m, gains=u ** 2, u=u, v=v,
                       x=v / u)


def gain_coefficient(config: CrystalConfig, peak_amplitude: float) -> float:
    """Coupling from the nonlinearity: |A0| chi2/2 sqrt(ws wi / (c^2 ns ni)).

    The absolute scale of the dimensionless pump amplitude A0 is not fixed by
    the model; in practice g is fitted to vacuum statistics and this function
    serves to relate the fit back to chi2 (see implied_peak_amplitude).
    """
    n_s = ordinary_index(config.lambda_s_nm * 1e-3, config.ordinary)
    n_i = ordinary_index(config.lambda_i_nm * 1e-3, config.ordinary)
    root = np.sqrt(config.omega_s * config.omega_i / (C_LIGHT ** 2 * n_s * n_i))
    return abs(peak_amplitude) * config.chi2_m_per_v / 2.0 * root


def implied_peak_amplitude(config: CrystalConfig, g: float) -> float:
    """Pump amplitude A0 that would give coupling g. Diagnostic."""
    return g / gain_coefficient(config, 1.0)


# ---------------------------------------------------------------------------
# Validation of the single-exponential (first-order Magnus) solution against
# direct z-ordered propagation.  Not on the statistics path.

@dataclass(frozen=True)
class TransferMatrix:
    """Linear input-output map on the stacked (a_s, a_i^dag) sideband vector."""

    matrix: np.ndarray        # (2N, 2N) complex
    omega: np.ndarray
    d_omega: float
    g: float
    steps: int = 0


def _interaction_blocks(config: CrystalConfig, pump: PumpSpectrum,
                        disp: DispersionParams, omega: np.ndarray):
    oi = omega[None, :]
    os_ = omega[:, None]
    # rows: signal sideband, cols: idler sideband
    delta = phase_mismatch(oi, os_, disp)
    amp = pump_amplitude(oi + os_, pump)
    return delta, amp


def magnus_transfer_matrix(config: CrystalConfig, pump: PumpSpectrum, g: float,
                           omega: np.ndarray,
                           disp: DispersionParams | None = None) -> TransferMatrix:
    """exp(g L integral-kernel) map: the Bloch-Messiah-decomposable solution."""
    if disp is None:
        disp = dispersion_params(config)
    omega = np.asarray(omega, dtype=float)
    d_omega = float(omega[1] - omega[0])
    delta, amp = _interaction_blocks(config, pump, disp, omega)
    m1 = amp * np.sinc(delta * config.length_m / 2.0 / np.pi)
    n = omega.size
    scale = g * (config.length_m / GAIN_LENGTH_UNIT) * d_omega
    block = np.zeros((2 * n, 2 * n))
    block[:n, n:] = m1
    block[n:, :n] = m1.T
    return TransferMatrix(matrix=expm(scale * block), omega=omega,
                          d_omega=d_omega, g=g)


def propagate_transfer_matrix(config: CrystalConfig, pump: PumpSpectrum,
                              g: float, omega: np.ndarray,
                              disp: DispersionParams | None = None,
                              steps: int = 128, step_rtol: float = 1e-6,
                              max_doublings: int = 4) -> TransferMatrix:
    """z-ordered integration of the coupled sideband equations.

    Midpoint slicing with a fourth-order exponential per slice; the step
    count is doubled until the map moves by less than step_rtol in operator
    norm.
    """
    if disp is None:
        disp = dispersion_params(config)
    omega = np.asarray(omega, dtype=float)
    d_omega = float(omega[1] - omega[0])
    delta, amp = _interaction_blocks(config, pump, disp, omega)
    n = omega.size
    lc = config.length_m
    coupling = g * d_omega / GAIN_LENGTH_UNIT   # per metre of crystal

    def run(nsteps: int) -> np.ndarray:
        u = np.eye(2 * n, dtype=complex)
        dz = lc / nsteps
        for k in range(nsteps):
            z = -lc / 2.0 + (k + 0.5) * dz
            kz = amp * np.exp(1j * delta * z)
            a = np.zeros((2 * n, 2 * n), dtype=complex)
            a[:n, n:] = kz
            a[n:, :n] = kz.conj().T
            x = (coupling * dz) * a
            xu = x @ u
            xxu = x @ xu
            xxxu = x @ xxu
            u = u + xu + xxu / 2.0 + xxxu / 6.0 + (x @ xxxu) / 24.0
        return u

    u_prev = run(steps)
    for _ in range(max_doublings):
        steps *= 2
        u_cur = run(steps)
        change = np.linalg.norm(u_cur - u_prev, 2) / np.linalg.norm(u_cur, 2)
        if change < step_rtol:
            return TransferMatrix(matrix=u_cur, omega=omega, d_omega=d_omega,
                                  g=g, steps=steps)
        u_prev = u_cur
    raise ConvergenceError(
        f"direct propagation not converged: step-halving still moves the map "
        f"by {change:.2e} at {steps} steps")


def map_distance(a: TransferMatrix, b: TransferMatrix) -> float:
    """Relative operator-norm distance between two transfer matrices."""
    return float(np.linalg.norm(a.matrix - b.matrix, 2)
                 / np.linalg.norm(b.matrix, 2))

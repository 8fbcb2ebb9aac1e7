"""Physical constants, cesium line data, and unit helpers.

All internal physics is strict SI with angular frequencies in rad/s.
User-facing documents and reports use the lab conventions instead
(cyclic Hz, mW/cm^2, W/cm^2, Gauss); the converters live here so the
core formulas never see a non-SI number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def hz_to_angular(f_hz: float) -> float:
    """Cyclic frequency in Hz to angular frequency in rad/s."""
    return TWO_PI * f_hz


def angular_to_hz(omega: float) -> float:
    """Angular frequency in rad/s to cyclic frequency in Hz."""
    return omega / TWO_PI


def w_m2_to_mw_cm2(intensity: float) -> float:
    return intensity * 0.1


def mw_cm2_to_w_m2(intensity: float) -> float:
    return intensity * 10.0


def w_m2_to_w_cm2(intensity: float) -> float:
    return intensity * 1e-4


def w_cm2_to_w_m2(intensity: float) -> float:
    return intensity * 1e4


def tesla_to_gauss(b: float) -> float:
    return b * 1e4


def gauss_to_tesla(b: float) -> float:
    return b * 1e-4


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values, frozen at build time."""

    hbar: float = 1.054571817e-34        # J s (exact in the 2019 SI)
    c: float = 299792458.0               # m/s (exact)
    epsilon0: float = 8.8541878128e-12   # F/m
    mu_bohr: float = 9.2740100783e-24    # J/T


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class SpeciesData:
    """Line data for the alkali species filling the cell.

    Only the handful of cesium numbers the memory formulas need; pass a
    modified instance (or the ``species`` block of a scenario file) to
    override any of them.

    Attributes
    ----------
    lambda_d1, lambda_d2 : m
        D1 and D2 transition wavelengths.
    gamma_d1, gamma_d2 : rad/s
        Natural linewidths of the two lines.
    delta_hf : rad/s
        Ground-state hyperfine splitting.
    delta2 : rad/s
        Hyperfine splitting of the D1 excited state.
    doppler_halfwidth : rad/s
        Half width (HWHM) of the Doppler profile at operating temperature.
    mean_speed : m/s
        Mean relative thermal speed entering the collision rate.
    spin_exchange_cross_section : m^2
    f_ground : total angular momentum of the populated ground manifold
    g_f : ground-state Lande factor (1/4 for cesium F = 4)
    """

    lambda_d1: float = 894.6e-9
    lambda_d2: float = 852.3e-9
    gamma_d1: float = hz_to_angular(4.56e6)
    gamma_d2: float = hz_to_angular(5.22e6)
    delta_hf: float = hz_to_angular(9.19e9)
    delta2: float = hz_to_angular(1.168e9)
    doppler_halfwidth: float = hz_to_angular(1.90e8)
    mean_speed: float = 130.0
    spin_exchange_cross_section: float = 2.0e-18
    f_ground: int = 4
    g_f: float = 0.25


CESIUM = SpeciesData()


def vacuum_field_squared(area: float, duration: float, wavelength: float,
                         constants: PhysicalConstants = CODATA) -> float:
    """Squared field amplitude per photon of a pulse mode, in V^2/m^2.

    A single photon at the carrier wavelength, spread over beam area
    ``area`` (m^2) and pulse duration ``duration`` (s), carries the mean
    squared field hbar*omega0 / (2 eps0 A c T).
    """
    if area <= 0.0:
        raise ValueError(f"beam area must be positive, got {area}")
    if duration <= 0.0:
        raise ValueError(f"pulse duration must be positive, got {duration}")
    if wavelength <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    omega0 = TWO_PI * constants.c / wavelength
    return constants.hbar * omega0 / (2.0 * constants.epsilon0 * area * constants.c * duration)


def dipole_moment_squared(gamma: float, wavelength: float,
                          constants: PhysicalConstants = CODATA) -> float:
    """Reduced squared dipole moment of a D line, in (C m)^2.

    Inverts the spontaneous-decay relation for a transition with natural
    linewidth ``gamma`` (rad/s) at ``wavelength`` (m):
    mu0^2 = 3 eps0 hbar lambda^3 gamma / (2 pi^2).
    """
    if gamma <= 0.0:
        raise ValueError(f"linewidth must be positive, got {gamma}")
    if wavelength <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    return 3.0 * constants.epsilon0 * constants.hbar * wavelength**3 * gamma / (2.0 * math.pi**2)


def saturation_intensity(gamma: float, wavelength: float,
                         constants: PhysicalConstants = CODATA) -> float:
    """Two-level saturation intensity 2 pi^2 hbar c gamma / (3 lambda^3), W/m^2."""
    if gamma <= 0.0:
        raise ValueError(f"linewidth must be positive, got {gamma}")
    if wavelength <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    return 2.0 * math.pi**2 * constants.hbar * constants.c * gamma / (3.0 * wavelength**3)

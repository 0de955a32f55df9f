"""Unit conversions at the CLI/file boundary.

Internally every frequency is an angular frequency in rad/s and every time is
in seconds. Files and the command line use ordinary frequency in kHz and
times in ms.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi

# One harmonic period at Omega_tg = 2pi x 1 kHz (rounded as in the source).
T0 = 1.41e-3

GAUSS_PER_TESLA = 1.0e4


def khz_to_rad(value):
    """kHz (ordinary) -> rad/s. Accepts scalars or arrays."""
    return np.multiply(value, TWO_PI * 1.0e3)


def rad_to_khz(value):
    """rad/s -> kHz (ordinary). Accepts scalars or arrays."""
    return np.divide(value, TWO_PI * 1.0e3)


def ms_to_s(value):
    return np.multiply(value, 1.0e-3)


def s_to_ms(value):
    return np.multiply(value, 1.0e3)


def mt_to_tesla(value):
    return np.multiply(value, 1.0e-3)


def per_gauss_to_per_tesla(value):
    """Gyromagnetic ratio per gauss -> per tesla."""
    return np.multiply(value, GAUSS_PER_TESLA)

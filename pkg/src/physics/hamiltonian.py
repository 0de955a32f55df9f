"""Dressed-state Hamiltonian of the driven 171Yb+ sensor.

H(t) is held as a static part plus five rotating terms, each with its
Hermitian partner:

    H(t) = H0 + sum_k [ S_k e^{i w_k t} + S_k^dagger e^{-i w_k t} ]

with S_k = Omega * P_k + Omega_tg * Q_k and w_k = base_k + sign_k * xi.
The coefficient matrices P_k, Q_k depend only on the basis and are built once
per SensorConfig; per time step only the scalar phases change.

Terms, in order (basis u, d, D, 0'):
    0  [c_ud (|u><0'| + |d><0'|) - Omega_tg/(2 sqrt2) |D><0'|] e^{-i xi t}
    1  -[Omega/(2 sqrt2)(|u><u| - |d><d|) + Omega/4 (|u><D| + |D><d|)
         - Omega/4 (|D><u| + |d><D|)] e^{i gB t}
    2  Omega_tg/2 (|u><0'|/2 + |d><0'|/2 - |D><0'|/sqrt2) e^{i(gB - g^2B^2/2A + xi) t}
    3  Omega_tg/2 (|0'><u|/2 + |0'><d|/2 + |0'><D|/sqrt2) e^{i(gB + xi) t}
    4  Omega_tg/2 (|0'><u|/2 + |0'><d|/2 + |0'><D|/sqrt2) e^{i(g^2B^2/2A - xi) t}

c_ud is Omega_tg/4 ("target" coupling) or the printed Omega/4 ("printed").
Terms 1-3 rotate at about gamma_e B_z and are dropped in secular mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..models.sensor import Level, SensorConfig, TargetParams

SQRT2 = math.sqrt(2.0)

FAST_TERMS = (1, 2, 3)


def ket_bra(row: Level, col: Level) -> np.ndarray:
    """|row><col| as a 4x4 complex matrix."""
    out = np.zeros((4, 4), dtype=complex)
    out[row, col] = 1.0
    return out


U, DN, DK, P = Level.UP, Level.DOWN, Level.DARK, Level.PRIME


@dataclass(frozen=True)
class HamiltonianTerms:
    """Constant pieces of H(t) for one SensorConfig."""

    static: np.ndarray  # (4, 4)
    omega: float  # drive amplitude multiplying `drive`
    drive: np.ndarray  # (K, 4, 4), multiplies Omega
    target: np.ndarray  # (K, 4, 4), multiplies Omega_tg
    base_rates: np.ndarray  # (K,) rad/s
    detuning_signs: np.ndarray  # (K,)

    @property
    def n_terms(self) -> int:
        return self.base_rates.size

    def coefficients(self, rabi: np.ndarray) -> np.ndarray:
        """S_k for each target amplitude: shape (K, B, 4, 4)."""
        rabi = np.atleast_1d(np.asarray(rabi, dtype=float))
        return self.omega * self.drive[:, None] + rabi[None, :, None, None] * self.target[:, None]

    def rates(self, detuning: np.ndarray) -> np.ndarray:
        """w_k per target detuning: shape (K, B)."""
        detuning = np.atleast_1d(np.asarray(detuning, dtype=float))
        return self.base_rates[:, None] + self.detuning_signs[:, None] * detuning[None, :]


@lru_cache(maxsize=32)
def hamiltonian_terms(cfg: SensorConfig) -> HamiltonianTerms:
    """Precompute the coefficient matrices and phase rates for cfg."""
    zero = np.zeros((4, 4), dtype=complex)

    up_prime = ket_bra(U, P) + ket_bra(DN, P)
    prime_out = 0.5 * (ket_bra(P, U) + ket_bra(P, DN)) + ket_bra(P, DK) / SQRT2

    drive = [zero.copy() for _ in range(5)]
    target = [zero.copy() for _ in range(5)]

    # first line, rotating with e^{-i xi t}
    target[0] += -ket_bra(DK, P) / (2.0 * SQRT2)
    if cfg.ud_coupling == "printed":
        drive[0] += up_prime / 4.0
    else:
        target[0] += up_prime / 4.0

    # second line, e^{i gB t}
    drive[1] = -(
        (ket_bra(U, U) - ket_bra(DN, DN)) / (2.0 * SQRT2)
        + (ket_bra(U, DK) + ket_bra(DK, DN)) / 4.0
        - (ket_bra(DK, U) + ket_bra(DN, DK)) / 4.0
    )

    target[2] = 0.5 * (0.5 * up_prime - ket_bra(DK, P) / SQRT2)
    target[3] = 0.5 * prime_out
    target[4] = 0.5 * prime_out

    larmor = cfg.larmor
    shift = cfg.hyperfine_shift
    base_rates = np.array([0.0, larmor, larmor - shift, larmor, shift])
    signs = np.array([-1.0, 0.0, 1.0, 1.0, -1.0])

    keep = [k for k in range(5) if not (cfg.secular and k in FAST_TERMS)]
    static = (cfg.drive_amplitude / SQRT2) * (ket_bra(U, U) - ket_bra(DN, DN))

    return HamiltonianTerms(
        static=static,
        omega=cfg.drive_amplitude,
        drive=np.stack([drive[k] for k in keep]),
        target=np.stack([target[k] for k in keep]),
        base_rates=base_rates[keep],
        detuning_signs=signs[keep],
    )


def assemble(
    terms: HamiltonianTerms,
    coefficients: np.ndarray,
    rates: np.ndarray,
    times: np.ndarray,
) -> np.ndarray:
    """Evaluate H for B targets at n times: shape (B, n, 4, 4).

    coefficients is (K, B, 4, 4) and rates is (K, B) as returned by
    HamiltonianTerms.coefficients / .rates.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(1j * rates[:, :, None] * times[None, None, :])  # (K, B, n)
    rotating = np.einsum("kbn,kbij->bnij", phases, coefficients)
    return terms.static + rotating + np.conj(np.swapaxes(rotating, -1, -2))


def build_hamiltonian(t: float, cfg: SensorConfig, tgt: TargetParams) -> np.ndarray:
    """The 4x4 Hermitian H(t) in the (u, d, D, 0') basis."""
    terms = hamiltonian_terms(cfg)
    coefficients = terms.coefficients(np.array([tgt.rabi]))
    rates = terms.rates(np.array([tgt.detuning]))
    return assemble(terms, coefficients, rates, np.array([t]))[0, 0]


def fastest_rate(cfg: SensorConfig) -> float:
    """Largest angular frequency the integrator step has to resolve.

    In secular mode the bound covers the slow hyperfine-shift phase plus the
    dressed splitting and any target amplitude up to twice the drive.
    """
    if not cfg.secular:
        return cfg.larmor
    return cfg.hyperfine_shift + 2.0 * cfg.drive_amplitude

"""Tests for the dressed-state Hamiltonian."""

import math

import numpy as np
import pytest

from src.errors import PhysicsInputError
from src.models import Level, SensorConfig, TargetParams
from src.physics import build_hamiltonian, fastest_rate, hamiltonian_terms
from src.units import T0

SQRT2 = math.sqrt(2.0)


def reference_hamiltonian(t: float, cfg: SensorConfig, tgt: TargetParams) -> np.ndarray:
    """Element-by-element transcription of H(t), independent of the term tables."""
    om, otg, xi = cfg.drive_amplitude, tgt.rabi, tgt.detuning
    gb = cfg.larmor
    shift = cfg.hyperfine_shift
    c_ud = otg / 4.0 if cfg.ud_coupling == "target" else om / 4.0
    u, d, dk, p = Level.UP, Level.DOWN, Level.DARK, Level.PRIME

    h = np.zeros((4, 4), dtype=complex)
    h[u, u] += om / SQRT2
    h[d, d] -= om / SQRT2

    def add(row, col, value):
        h[row, col] += value
        h[col, row] += np.conj(value)

    e0 = np.exp(-1j * xi * t)
    add(u, p, c_ud * e0)
    add(d, p, c_ud * e0)
    add(dk, p, -otg / (2 * SQRT2) * e0)

    if not cfg.secular:
        e1 = np.exp(1j * gb * t)
        h[u, u] += 2 * (-om / (2 * SQRT2) * e1).real
        h[d, d] += 2 * (om / (2 * SQRT2) * e1).real
        add(u, dk, -om / 4 * e1)
        add(dk, d, -om / 4 * e1)
        add(dk, u, om / 4 * e1)
        add(d, dk, om / 4 * e1)

        e2 = np.exp(1j * (gb - shift + xi) * t)
        add(u, p, otg / 4 * e2)
        add(d, p, otg / 4 * e2)
        add(dk, p, -otg / (2 * SQRT2) * e2)

        e3 = np.exp(1j * (gb + xi) * t)
        add(p, u, otg / 4 * e3)
        add(p, d, otg / 4 * e3)
        add(p, dk, otg / (2 * SQRT2) * e3)

    e4 = np.exp(1j * (shift - xi) * t)
    add(p, u, otg / 4 * e4)
    add(p, d, otg / 4 * e4)
    add(p, dk, otg / (2 * SQRT2) * e4)
    return h


def random_draws(seed: int, n: int):
    """Seeded (t, cfg, tgt) triples spanning the operating range."""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        cfg = SensorConfig.default(
            float(rng.uniform(0.1, 2.0)),
            ud_coupling=str(rng.choice(["target", "printed"])),
            secular=bool(rng.integers(2)),
        )
        tgt = TargetParams.from_khz(float(rng.uniform(0.0, 25.0)), float(rng.uniform(-0.3, 0.3)))
        yield float(rng.uniform(0.0, 20.0 * T0)), cfg, tgt


class TestHermiticity:
    @pytest.mark.parametrize("seed", range(10))
    def test_hermitian(self, seed):
        for t, cfg, tgt in random_draws(seed, 100):
            h = build_hamiltonian(t, cfg, tgt)
            scale = np.max(np.abs(h))
            assert np.max(np.abs(h - h.conj().T)) <= 1e-12 * scale, (t, cfg, tgt)

    def test_zero_target_keeps_only_drive(self, full_cfg):
        h = build_hamiltonian(0.0, full_cfg, TargetParams(0.0, 0.0))
        assert np.all(h[Level.PRIME] == 0)
        assert np.all(h[:, Level.PRIME] == 0)


class TestMatrixElements:
    @pytest.mark.parametrize("coupling", ["target", "printed"])
    @pytest.mark.parametrize("secular", [False, True])
    @pytest.mark.parametrize("t", [0.0, 1.3e-8, 5.0e-4])
    def test_matches_transcription(self, coupling, secular, t):
        cfg = SensorConfig.default(1.0, ud_coupling=coupling, secular=secular)
        tgt = TargetParams.from_khz(12.5, 0.17)
        np.testing.assert_allclose(
            build_hamiltonian(t, cfg, tgt),
            reference_hamiltonian(t, cfg, tgt),
            rtol=1e-12,
            atol=1e-4,
        )

    def test_static_diagonal(self, secular_cfg):
        h = build_hamiltonian(0.0, secular_cfg, TargetParams(0.0))
        om = secular_cfg.drive_amplitude
        assert h[Level.UP, Level.UP].real == pytest.approx(om / SQRT2)
        assert h[Level.DOWN, Level.DOWN].real == pytest.approx(-om / SQRT2)

    def test_secular_drops_fast_terms(self):
        terms = hamiltonian_terms(SensorConfig.default(1.0, secular=True))
        assert terms.n_terms == 2
        assert hamiltonian_terms(SensorConfig.default(1.0)).n_terms == 5


class TestConfig:
    def test_larmor_at_one_millitesla(self, full_cfg):
        assert full_cfg.larmor / (2 * math.pi) == pytest.approx(28.024e6, rel=1e-9)

    def test_fastest_rate(self, full_cfg, secular_cfg):
        assert fastest_rate(full_cfg) == pytest.approx(full_cfg.larmor)
        assert fastest_rate(secular_cfg) < fastest_rate(full_cfg) / 100

    @pytest.mark.parametrize("field", ["drive_amplitude", "static_field", "hyperfine_a"])
    def test_rejects_nonpositive_constants(self, full_cfg, field):
        values = {
            "drive_amplitude": full_cfg.drive_amplitude,
            "static_field": full_cfg.static_field,
            "gyro_e": full_cfg.gyro_e,
            "gyro_n": full_cfg.gyro_n,
            "hyperfine_a": full_cfg.hyperfine_a,
        }
        values[field] = -1.0
        with pytest.raises(PhysicsInputError):
            SensorConfig(**values)

    def test_rejects_negative_rabi(self):
        with pytest.raises(PhysicsInputError):
            TargetParams(-1.0, 0.0)

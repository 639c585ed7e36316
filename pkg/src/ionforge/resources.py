"""Scaling estimates for longer ion chains."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArgumentError

LINEAR_CRYSTAL_COEFF = 0.6
LINEAR_CRYSTAL_EXP = 0.86
GATE_TIME_EXP = 1.7


@dataclass(frozen=True)
class TrapConfig:
    """Reference trap: frequencies in MHz, XX duration in microseconds."""

    nu_x: float = 3.07
    nu_z: float = 0.27
    n: int = 5
    tau_ref: float = 235.0
    n_ref: int = 5

    def __post_init__(self):
        if not self.nu_x > self.nu_z > 0:
            raise ArgumentError(f"need nu_x > nu_z > 0, got nu_x={self.nu_x}, nu_z={self.nu_z}")
        if self.n < 1 or self.n_ref < 1:
            raise ArgumentError("ion counts must be at least 1")
        if self.tau_ref <= 0:
            raise ArgumentError("reference gate time must be positive")


def max_axial_frequency(n, nu_x):
    """Largest axial frequency that keeps ``n`` ions in a linear chain."""
    if n < 2:
        raise ArgumentError(f"linear-crystal bound needs n >= 2, got {n}")
    return LINEAR_CRYSTAL_COEFF * n ** (-LINEAR_CRYSTAL_EXP) * nu_x


def is_linear(n, nu_x, nu_z):
    return nu_z < max_axial_frequency(n, nu_x)


def gate_duration(n, cfg=None):
    """XX gate duration (us) for ``n`` ions, scaled as ``n**1.7`` from the reference."""
    cfg = cfg or TrapConfig()
    if n < 1:
        raise ArgumentError(f"ion count must be positive, got {n}")
    if n == cfg.n_ref:
        return float(cfg.tau_ref)
    return cfg.tau_ref * (n / cfg.n_ref) ** GATE_TIME_EXP


def calibration_counts(n):
    """One pulse solution per ion pair and one Rabi calibration per ion."""
    if n < 1:
        raise ArgumentError(f"ion count must be positive, got {n}")
    return {"xx_pulse_solutions": n * (n - 1) // 2, "r_calibrations": n}


def axial_frequency(n, cfg=None):
    """Axial frequency for ``n`` ions, shrunk with the linear-crystal bound.

    Scaling ``nu_z`` as ``n**-0.86`` keeps the reference margin below the
    bound, and ``nu_x / nu_z**2`` then grows as ``n**1.72``.
    """
    cfg = cfg or TrapConfig()
    return cfg.nu_z * (n / cfg.n_ref) ** (-LINEAR_CRYSTAL_EXP)


def plan(n, cfg=None):
    """Resource summary for an ``n``-ion register."""
    cfg = cfg or TrapConfig()
    nu_z_max = max_axial_frequency(n, cfg.nu_x)
    nu_z = axial_frequency(n, cfg)
    return {
        "n": n,
        "nu_x": cfg.nu_x,
        "nu_z": nu_z,
        "nu_z_max": nu_z_max,
        "linear_crystal": nu_z < nu_z_max,
        "tau_g": gate_duration(n, cfg),
        "calibrations": calibration_counts(n),
    }

"""Cylindrical vector eigenmodes of the free Maxwell field at fixed frequency.

A mode is labelled by the wavenumber ``k``, the transverse wavenumber
``k_t`` (with ``k_z = sqrt(k**2 - k_t**2) >= 0``), the total angular
momentum index ``m`` and the helicity ``s = +/-1``. Vector components are
stored in the circular basis ``(e_minus, e_plus, z)`` where
``e_pm = (x +/- i y) / sqrt(2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import MAX_BESSEL_ORDER, bessel_j

SQRT2 = np.sqrt(2.0)

# Cartesian representation of the circular unit vectors.
E_PLUS = np.array([1.0, 1.0j, 0.0]) / SQRT2
E_MINUS = np.array([1.0, -1.0j, 0.0]) / SQRT2
Z_HAT = np.array([0.0, 0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class ModeIndex:
    """Quantum numbers of one transverse eigenmode (forward branch only)."""

    k: float
    k_t: float
    m: int
    s: int

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be positive")
        if not 0 <= self.k_t <= self.k:
            raise ValueError("k_t must lie in [0, k]")
        if self.s not in (-1, 1):
            raise ValueError("helicity s must be +1 or -1")
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")

    @property
    def k_z(self):
        return np.sqrt(max(self.k**2 - self.k_t**2, 0.0))


@dataclass(frozen=True)
class CylPoint:
    rho: float
    phi: float
    z: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be non-negative")

    @classmethod
    def from_cartesian(cls, x, y, z):
        return cls(float(np.hypot(x, y)), float(np.arctan2(y, x)), float(z))

    def cartesian(self):
        return np.array([self.rho * np.cos(self.phi),
                         self.rho * np.sin(self.phi), self.z])


def kernel_G(idx: ModeIndex, m_eff: int, p: CylPoint) -> complex:
    """Scalar kernel ``J_m(k_t rho) exp(i k_z z) exp(i m phi)``."""
    if abs(m_eff) > MAX_BESSEL_ORDER:
        raise ValueError(f"|m_eff| must be <= {MAX_BESSEL_ORDER}")
    return complex(bessel_j(m_eff, idx.k_t * p.rho)
                   * np.exp(1j * idx.k_z * p.z) * np.exp(1j * m_eff * p.phi))


def mode_field(idx: ModeIndex, p: CylPoint) -> np.ndarray:
    """Dimensionless mode function as ``[F_minus, F_plus, F_z]``."""
    k, kz, kt, s, m = idx.k, idx.k_z, idx.k_t, idx.s, idx.m
    f_minus = (s * k - kz) / k * kernel_G(idx, m + 1, p) / (4 * np.pi)
    f_plus = (s * k + kz) / k * kernel_G(idx, m - 1, p) / (4 * np.pi)
    f_z = -1j * SQRT2 / (4 * np.pi) * kt / k * kernel_G(idx, m, p)
    return np.array([f_minus, f_plus, f_z])


def circular_to_cartesian(components):
    """Map ``[E_minus, E_plus, E_z]`` (last axis) to ``[E_x, E_y, E_z]``."""
    c = np.asarray(components, dtype=complex)
    e_minus, e_plus, e_z = c[..., 0], c[..., 1], c[..., 2]
    ex = (e_plus + e_minus) / SQRT2
    ey = 1j * (e_plus - e_minus) / SQRT2
    return np.stack([ex, ey, e_z], axis=-1)


def cartesian_to_circular(vec):
    """Inverse of :func:`circular_to_cartesian`."""
    v = np.asarray(vec, dtype=complex)
    ex, ey, ez = v[..., 0], v[..., 1], v[..., 2]
    e_plus = (ex - 1j * ey) / SQRT2
    e_minus = (ex + 1j * ey) / SQRT2
    return np.stack([e_minus, e_plus, ez], axis=-1)

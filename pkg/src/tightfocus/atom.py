"""A J=0 -> J=1 atom driven by a coherent field.

Internal units: lengths in wavelengths, ``hbar = eps0 = c = 1`` so the
optical angular frequency equals the wavenumber ``2 pi / lambda``. The
dipole moment is not an input; it follows from the decay rate,
``Gamma = d^2 omega^3 / (3 pi hbar eps0 c^3)``. Observables depend only on
the dimensionless drive ``|C| / Gamma`` and ``Delta / Gamma``.

Polarisation index ``i`` runs over ``(-1, 0, +1)`` and is stored at array
positions ``(0, 1, 2)``. The spherical unit vectors are
``u_{-1} = e_minus``, ``u_0 = z``, ``u_{+1} = -e_plus``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .modes import E_MINUS, E_PLUS, Z_HAT

POLARIZATIONS = (-1, 0, 1)

# rows: Cartesian components of u_{-1}, u_0, u_{+1}
SPHERICAL_BASIS = np.array([E_MINUS, Z_HAT, -E_PLUS])


@dataclass(frozen=True)
class AtomSpec:
    """Atom on the beam axis.

    ``decay_rate`` and ``detuning`` (laser minus atom) share a time unit;
    ``z`` is the axial position in length units of the beam.
    """

    wavelength: float = 1.0
    decay_rate: float = 1.0
    detuning: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not self.decay_rate > 0:
            raise ValueError("decay_rate must be positive")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")

    @property
    def omega(self):
        return 2 * np.pi / self.wavelength

    @property
    def dipole_moment(self):
        return float(np.sqrt(3 * np.pi * self.decay_rate / self.omega**3))

    def dipole_vectors(self):
        """``d_i = d u_i`` as rows, ordered ``i = -1, 0, +1``."""
        return self.dipole_moment * SPHERICAL_BASIS

    def with_position(self, z):
        return AtomSpec(self.wavelength, self.decay_rate, self.detuning, float(z))


@dataclass(frozen=True)
class DriveCoefficients:
    """Rabi-type couplings ``C_i = alpha d_i^* . F_out(r0) / hbar``."""

    C: np.ndarray

    @property
    def magnitude(self):
        return float(np.linalg.norm(self.C))


@dataclass(frozen=True)
class SteadyState:
    """Steady-state atomic expectation values in the laser rotating frame.

    ``sigma_ee[i, j] = <e_i| rho |e_j>`` and ``sigma_eg[i] = <sigma_i^->``
    without its ``exp(-i omega t)`` factor.
    """

    sigma_gg: float
    sigma_ee: np.ndarray
    sigma_eg: np.ndarray

    @property
    def excited_population(self):
        return float(np.real(np.trace(self.sigma_ee)))


def dipole_field(atom: AtomSpec, i: int, r) -> np.ndarray:
    """Far-field pattern ``psi_i(r)`` of the transition dipole ``d_i``.

    ``r`` is the Cartesian position relative to the atom. The retardation
    phase ``exp(i k |r|)`` is not included. Several points may be passed as
    an ``(n, 3)`` array.
    """
    r = np.asarray(r, dtype=float)
    dist = np.linalg.norm(r, axis=-1, keepdims=True)
    if np.any(dist < 10 * atom.wavelength):
        warnings.warn("dipole far-field pattern used closer than 10 wavelengths",
                      stacklevel=2)
    d = atom.dipole_vectors()[POLARIZATIONS.index(i)]
    d_dot_r = np.sum(d * r, axis=-1, keepdims=True)
    pref = atom.omega**2 / (4 * np.pi)
    return pref * (d / dist - d_dot_r * r / dist**3)


def dipole_fields(atom: AtomSpec, r) -> np.ndarray:
    """All three patterns stacked, shape ``(..., 3 polarisations, 3 xyz)``."""
    return np.stack([dipole_field(atom, i, r) for i in POLARIZATIONS], axis=-2)


def drive_coefficients(atom: AtomSpec, field_at_atom, alpha) -> DriveCoefficients:
    """Drive couplings from the beam field (circular components) at the atom.

    ``field_at_atom`` is a :class:`~tightfocus.beams.FieldSample` or an
    array ``[E_minus, E_plus, E_z]``.
    """
    circ = getattr(field_at_atom, "circular", field_at_atom)
    e_minus, e_plus, e_z = np.asarray(circ, dtype=complex)
    d = atom.dipole_moment
    # u_i^* . F picks the circular component: u_{-1} -> E_minus,
    # u_0 -> E_z, u_{+1} = -e_plus -> -E_plus
    c = alpha * d * np.array([e_minus, e_z, -e_plus])
    return DriveCoefficients(c)


def steady_state(drive, decay_rate, detuning=0.0) -> SteadyState:
    """Closed-form steady state of the driven, damped J=0 -> J=1 atom."""
    if not decay_rate > 0:
        raise ValueError("decay_rate must be positive")
    c = np.asarray(getattr(drive, "C", drive), dtype=complex)
    g, delta = decay_rate, detuning
    outer = np.outer(c, c.conj()) / g
    m1 = outer / (g / 2 + 1j * delta)
    m2 = outer / (g / 2 - 1j * delta)
    msum = m1 + m2
    denom = msum + np.eye(3)
    assert abs(np.linalg.det(denom)) > 0, "M1 + M2 + 1 is singular"
    mat = msum @ np.linalg.inv(denom)
    sigma_gg = 1.0 / (1.0 + np.trace(mat))
    sigma_ee = sigma_gg * mat
    sigma_eg = (1j * sigma_gg * c - 1j * sigma_ee @ c) / (g / 2 - 1j * delta)
    return SteadyState(float(np.real(sigma_gg)), sigma_ee, sigma_eg)

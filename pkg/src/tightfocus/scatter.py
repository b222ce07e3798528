"""Far-field observables of a beam scattered by one on-axis atom.

A :class:`Scattering` bundles the beam, the atom at its resolved position,
the coherent amplitude and the atomic steady state. Far-field points are
given by the distance ``R`` from the atom and the polar angle ``phi`` from
the beam axis, i.e. at ``r0 + R (sin phi, 0, cos phi)``.

The dipole contribution carries the retardation phase ``exp(i k R)``
relative to the laser rotating frame; the laser term carries its own phase
through the synthesised field. Their interference drives every angular
feature of the intensity and of ``g2(0)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .atom import AtomSpec, dipole_fields, drive_coefficients, steady_state
from .beams import BeamOrder, incoming_power, on_axis_profile
from .modes import circular_to_cartesian

DEFAULT_RADIUS = 50.0
DEFAULT_DRIVE = 1e-3
CROSS_SECTION_FACTOR = 3 / (2 * np.pi)
UNDEFINED_INTENSITY = 1e-30


class PositionPolicy(enum.Enum):
    ON_AXIS_MAX = "max"
    Z0 = "z0"


@dataclass(frozen=True)
class FarFieldPoint:
    R: float
    phi: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")

    def offset(self):
        return np.array([self.R * np.sin(self.phi), 0.0, self.R * np.cos(self.phi)])


@dataclass(frozen=True)
class IntensityBreakdown:
    I_L: float
    I_d: float
    I_int: float

    @property
    def I_total(self):
        return self.I_L + self.I_d + self.I_int


def golden_section_max(func, lo, hi, tol=1e-3):
    """Maximiser of a unimodal ``func`` on ``[lo, hi]`` to within ``tol``."""
    inv = (np.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = func(d)
    return 0.5 * (a + b)


def atom_position(beam, policy=PositionPolicy.ON_AXIS_MAX, *, before=20.0,
                  after=5.0, tol=1e-3, max_extend=8):
    """Axial atom position for a beam provider.

    ``policy`` is a :class:`PositionPolicy` or an explicit ``z``. For
    ``ON_AXIS_MAX`` the on-axis ``|E_plus|`` is scanned on a 0.25-wavelength
    grid over ``[z_0 - before, z_0 + after]`` (in wavelengths) and the best
    grid cell is refined by golden-section search to ``tol`` wavelengths.
    When the best sample sits on an edge of the window the window is pushed
    out by its own width on that side, at most ``max_extend`` times.
    """
    if isinstance(policy, str):
        policy = PositionPolicy(policy)
    if not isinstance(policy, PositionPolicy):
        return float(policy)
    lam = beam.spec.wavelength
    z_0 = beam.params.z_0
    if policy is PositionPolicy.Z0:
        return float(z_0)
    step = 0.25 * lam
    lo, hi = z_0 - before * lam, z_0 + after * lam
    grid = np.arange(lo, hi + 0.5 * step, step)
    prof = on_axis_profile(beam, grid)
    for _ in range(max_extend):
        i = int(np.argmax(prof))
        if 0 < i < grid.size - 1:
            break
        span = (before + after) * lam
        if i == 0:
            new = grid[0] - step * np.arange(int(span / step), 0, -1)
            grid = np.concatenate([new, grid])
            prof = np.concatenate([on_axis_profile(beam, new), prof])
        else:
            new = grid[-1] + step * np.arange(1, int(span / step) + 1)
            grid = np.concatenate([grid, new])
            prof = np.concatenate([prof, on_axis_profile(beam, new)])
    i = int(np.argmax(prof))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    return float(golden_section_max(
        lambda z: float(on_axis_profile(beam, [z])[0]), a, b, tol * lam))


@dataclass
class Scattering:
    """Beam + atom + steady state, ready for far-field evaluation."""

    beam: object
    atom: AtomSpec
    field_at_atom: np.ndarray
    alpha: complex
    drive: object
    state: object
    radius: float = DEFAULT_RADIUS
    coupled: bool = True

    @property
    def k(self):
        return self.beam.spec.k

    # -- field pieces -------------------------------------------------------

    def _points(self, phi, radius=None):
        radius = self.radius if radius is None else radius
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        rho = radius * np.sin(phi)
        z = self.atom.z + radius * np.cos(phi)
        offsets = np.stack([rho, np.zeros_like(rho), radius * np.cos(phi)], axis=-1)
        return phi, rho, z, offsets

    def laser_field(self, phi, radius=None):
        """Cartesian ``alpha F_out`` at the far-field points, shape (n, 3)."""
        _, rho, z, _ = self._points(phi, radius)
        circ = self.beam.components(np.abs(rho), np.where(rho < 0, np.pi, 0.0), z)
        return self.alpha * circular_to_cartesian(circ)

    def dipole_amplitudes(self, phi, radius=None):
        """``psi_i`` patterns at the points, shape (n, 3 pol, 3 xyz)."""
        _, _, _, offsets = self._points(phi, radius)
        return dipole_fields(self.atom, offsets)

    # -- observables --------------------------------------------------------

    def terms(self, phi, radius=None):
        """Arrays ``(I_L, I_d, I_int, G2)`` over the polar angles ``phi``."""
        radius = self.radius if radius is None else radius
        laser = self.laser_field(phi, radius)
        psi = self.dipole_amplitudes(phi, radius)
        s_ee = self.state.sigma_ee
        s_eg = self.state.sigma_eg * np.exp(1j * self.k * radius)
        if not self.coupled:
            s_ee = np.zeros_like(s_ee)
            s_eg = np.zeros_like(s_eg)
        i_l = np.sum(np.abs(laser) ** 2, axis=-1)
        # overlap[n, j, i] = psi_j^* . psi_i
        overlap = np.einsum("njx,nix->nji", psi.conj(), psi)
        i_d = np.real(np.einsum("nji,ij->n", overlap, s_ee))
        # laser-dipole projections per polarisation
        l_dot_psi = np.einsum("nx,nix->ni", laser.conj(), psi)      # L^* . psi_i
        i_int = 2 * np.real(np.einsum("ni,i->n", l_dot_psi, s_eg))
        lc_psi = np.einsum("nx,nix->ni", laser, psi.conj())         # L . psi_i^*
        # <sigma_i^+ sigma_j^-> = sigma_ee[j, i]
        t4 = 2 * np.real(np.einsum("ni,nj,ji->n", lc_psi, l_dot_psi, s_ee))
        g2_num = i_l**2 + 2 * i_l * i_d + 2 * i_l * i_int + t4
        return i_l, i_d, i_int, g2_num

    def intensity(self, p: FarFieldPoint) -> IntensityBreakdown:
        i_l, i_d, i_int, _ = self.terms(p.phi, p.R)
        return IntensityBreakdown(float(i_l[0]), float(i_d[0]), float(i_int[0]))

    def g2(self, phi, radius=None):
        """Zero-delay ``g2`` over angles; NaN where the intensity vanishes."""
        i_l, i_d, i_int, num = self.terms(phi, radius)
        total = i_l + i_d + i_int
        with np.errstate(divide="ignore", invalid="ignore"):
            out = num / total**2
        return np.where(total < UNDEFINED_INTENSITY, np.nan, out)

    def g2_zero_delay(self, p: FarFieldPoint) -> float:
        return float(self.g2(p.phi, p.R)[0])

    def k_ratio(self, radius=None) -> float:
        """Forward laser-to-dipole intensity ratio."""
        i_l, i_d, _, _ = self.terms(0.0, radius)
        return float(i_l[0] / i_d[0])

    def angular(self, phi, radius=None):
        """Dict of per-angle arrays: I_L, I_d, I_int, I_total, g2."""
        i_l, i_d, i_int, num = self.terms(phi, radius)
        total = i_l + i_d + i_int
        with np.errstate(divide="ignore", invalid="ignore"):
            g2 = np.where(total < UNDEFINED_INTENSITY, np.nan, num / total**2)
        return {"I_L": i_l, "I_d": i_d, "I_int": i_int, "I_total": total, "g2": g2}


def prepare(beam, atom=None, *, drive=DEFAULT_DRIVE,
            position=PositionPolicy.ON_AXIS_MAX, radius=DEFAULT_RADIUS,
            coupled=True) -> Scattering:
    """Place the atom, fix the drive level and solve for the steady state.

    ``drive`` is ``|C| / Gamma``; the magnitude of the coherent amplitude is
    chosen to produce it while its phase is taken from
    ``beam.spec.drive_amplitude``.
    """
    spec = beam.spec
    if atom is None:
        atom = AtomSpec(wavelength=spec.wavelength)
    z_atom = atom_position(beam, position)
    atom = atom.with_position(z_atom)
    circ = beam.components(0.0, 0.0, z_atom)[0]
    norm = float(np.linalg.norm(circ))
    amp = complex(spec.drive_amplitude)
    phase = amp / abs(amp) if amp != 0 else 1.0
    if norm > 0 and drive > 0 and amp != 0:
        alpha = phase * drive * atom.decay_rate / (atom.dipole_moment * norm)
    else:
        alpha = amp if drive > 0 else 0j
    coeffs = drive_coefficients(atom, circ, alpha)
    state = steady_state(coeffs, atom.decay_rate, atom.detuning)
    return Scattering(beam, atom, circ, alpha, coeffs, state, radius, coupled)


def intensity(setup: Scattering, p: FarFieldPoint) -> IntensityBreakdown:
    return setup.intensity(p)


def g2_zero_delay(setup: Scattering, p: FarFieldPoint) -> float:
    return setup.g2_zero_delay(p)


def k_ratio(setup: Scattering, radius=None) -> float:
    return setup.k_ratio(radius)


def scattering_numerator(field_at_atom, wavelength=1.0):
    """``sigma |d_hat . E(r0)|^2`` with ``sigma = 3 lambda^2 / 2 pi``."""
    return CROSS_SECTION_FACTOR * wavelength**2 * float(
        np.sum(np.abs(np.asarray(field_at_atom)) ** 2))


def scattering_ratio(beam, position=PositionPolicy.ON_AXIS_MAX):
    """Fraction of the incident power scattered by the atom.

    ``position`` is a :class:`PositionPolicy`, an explicit ``z`` or an
    :class:`AtomSpec` whose ``z`` is used. The driven dipole is aligned with
    the local field, so the numerator uses the full field magnitude at the
    atom (``|E_plus|^2`` on the axis for a Gaussian beam).
    """
    spec = beam.spec
    if spec.order is not BeamOrder.GAUSSIAN:
        raise ValueError("scattering ratio is defined for the Gaussian beam")
    z_atom = position.z if isinstance(position, AtomSpec) else atom_position(beam, position)
    circ = beam.components(0.0, 0.0, z_atom)[0] * spec.drive_amplitude
    return scattering_numerator(circ, spec.wavelength) / incoming_power(spec)


__all__ = [
    "FarFieldPoint", "IntensityBreakdown", "PositionPolicy",
    "Scattering", "atom_position", "prepare", "intensity", "g2_zero_delay",
    "k_ratio", "scattering_ratio", "scattering_numerator", "golden_section_max",
]

"""Focusing of Gaussian and first-order Laguerre-Gaussian beams by an ideal lens.

The incoming beam sits in the lens plane ``z = 0`` (its own focal plane
coincides with the lens). After multiplication by the thin-lens phase
``exp(-i k rho^2 / 2f)`` it is expanded over the forward cylindrical modes
of :mod:`tightfocus.modes`; the expansion coefficients have closed forms,
and the field anywhere behind the lens is a single integral over the
transverse wavenumber ``k_t`` in ``[0, k]``.

All three circular components are synthesised. For an expansion
coefficient of the form ``pi * P(k_t) * (k_z + s k) / k`` at fixed ``m``,
summing both helicities gives

    E_minus = e^{i(m+1)phi} int P (k_t^2 / 2k^2)        J_{m+1} e^{i k_z z}
    E_plus  = e^{i(m-1)phi} int P (2k^2 - k_t^2) / 2k^2  J_{m-1} e^{i k_z z}
    E_z     = e^{i m phi}   int P (-i k_t k_z / sqrt2 k^2) J_m  e^{i k_z z}

The integrals are evaluated after substituting ``k_t = k sin(theta)``,
which removes the square-root behaviour of ``k_z`` at ``k_t = k``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .modes import CylPoint, ModeIndex
from .numerics import (DEFAULT_QUADRATURE, QuadratureError, QuadratureSpec,
                       bessel_j_unchecked, integrate_complex)

SQRT2 = np.sqrt(2.0)
COMPONENTS = ("E_minus", "E_plus", "E_z")

# exp(-x) below this is treated as zero when truncating k_t > k integrals
_GAUSS_CUTOFF = 41.5


class BeamOrder(enum.Enum):
    GAUSSIAN = "gaussian"
    LG_PLUS = "lg_plus"
    LG_MINUS = "lg_minus"


@dataclass(frozen=True)
class BeamSpec:
    """Incoming beam and lens.

    Lengths share one unit (the CLI uses wavelengths). ``drive_amplitude``
    is the coherent-state amplitude ``alpha`` with ``<E+> = alpha F_out``.
    """

    wavelength: float = 1.0
    focal_length: float = 500.0
    z_in: float = 3e4
    order: BeamOrder = BeamOrder.GAUSSIAN
    drive_amplitude: complex = 1.0

    def __post_init__(self):
        for name in ("wavelength", "focal_length", "z_in"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive, got {val!r}")
        if not isinstance(self.order, BeamOrder):
            object.__setattr__(self, "order", BeamOrder(self.order))
        if self.k * self.z_in < 100:
            warnings.warn(f"k z_in = {self.k * self.z_in:.3g} < 100: incoming "
                          "beam is not paraxial", stacklevel=3)

    @property
    def k(self):
        return 2 * np.pi / self.wavelength


@dataclass(frozen=True)
class DerivedBeamParams:
    z_R: float
    z_0: float
    xi: complex
    w: float


@dataclass(frozen=True)
class FieldSample:
    """Circular components of the beam field at one point."""

    point: CylPoint
    E_plus: complex
    E_minus: complex
    E_z: complex
    error: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def circular(self):
        return np.array([self.E_minus, self.E_plus, self.E_z])

    @property
    def norm(self):
        return float(np.linalg.norm(self.circular))


def derive_params(spec: BeamSpec) -> DerivedBeamParams:
    """Rayleigh range, focal position, ``xi = z_R - i z_0`` and width ``w``."""
    f, zin = spec.focal_length, spec.z_in
    denom = zin**2 + f**2
    z_r = f**2 * zin / denom
    z_0 = f * zin**2 / denom
    w = np.sqrt(z_r / (np.pi * spec.wavelength))
    return DerivedBeamParams(z_r, z_0, complex(z_r, -z_0), float(w))


def z_in_for_rayleigh(z_r, focal_length):
    """Incoming Rayleigh range giving an outgoing ``z_R`` for lens ``f``.

    Of the two solutions the one with ``z_in >= f`` is returned, so that the
    focus lies near the focal plane (``z_0 >= f/2``).
    """
    f = focal_length
    if not 0 < z_r <= f / 2 * (1 + 1e-12):
        raise ValueError(f"z_R = {z_r} is not reachable with f = {f} "
                         "(need 0 < z_R <= f/2)")
    disc = max(f**4 - 4 * z_r**2 * f**2, 0.0)
    return (f**2 + np.sqrt(disc)) / (2 * z_r)


def beam_for_width(w, focal_length, wavelength=1.0, **kwargs):
    """BeamSpec whose outgoing width parameter ``sqrt(z_R / pi lambda)`` is ``w``."""
    z_r = np.pi * wavelength * w**2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return BeamSpec(wavelength=wavelength, focal_length=focal_length,
                        z_in=z_in_for_rayleigh(z_r, focal_length), **kwargs)


def max_width(focal_length, wavelength=1.0):
    """Largest width parameter reachable with a given lens (``z_R = f/2``)."""
    return float(np.sqrt(focal_length / (2 * np.pi * wavelength)))


# ---------------------------------------------------------------------------
# expansion coefficients

def kappa_gaussian(spec: BeamSpec, idx: ModeIndex) -> complex:
    """Mode coefficient of the focused circularly polarised Gaussian beam."""
    if spec.order is not BeamOrder.GAUSSIAN:
        raise ValueError("kappa_gaussian needs a Gaussian beam")
    if idx.m != 1:
        return 0j
    k, kt, kz = idx.k, idx.k_t, idx.k_z
    xi = derive_params(spec).xi
    return complex(np.pi * kt / k * (kz + idx.s * k) / k * xi
                   * np.exp(-kt**2 / (2 * k) * xi))


def lg_sign(order):
    """Overall sign of the LG coefficient (``J_{-1} = -J_1`` for LG-minus)."""
    return -1.0 if order is BeamOrder.LG_MINUS else 1.0


def lg_m(order):
    return {BeamOrder.LG_PLUS: 2, BeamOrder.LG_MINUS: 0}[order]


def kappa_lg(spec: BeamSpec, idx: ModeIndex) -> complex:
    """Mode coefficient of a focused first-order donut (LG) beam.

    Only ``m = 2`` (LG-plus) or ``m = 0`` (LG-minus) is populated. The
    LG-minus coefficient carries the sign of ``J_{-1}`` from the angular
    overlap, which is a global phase of the focused field.
    """
    if spec.order is BeamOrder.GAUSSIAN:
        raise ValueError("kappa_lg needs an LG beam")
    if idx.m != lg_m(spec.order):
        return 0j
    k, kt, kz = idx.k, idx.k_t, idx.k_z
    xi = derive_params(spec).xi
    return complex(lg_sign(spec.order) * np.pi * kt**2 / k**2
                   * (kz + idx.s * k) / k * xi**2 / spec.z_in
                   * np.exp(-kt**2 / (2 * k) * xi))


def _radial_weight(spec):
    """``(P(k_t), m)`` such that kappa = pi P(k_t) (k_z + s k)/k at that m."""
    k = spec.k
    xi = derive_params(spec).xi
    if spec.order is BeamOrder.GAUSSIAN:
        def weight(kt):
            return kt / k * xi * np.exp(-kt**2 / (2 * k) * xi)
        return weight, 1
    sign = lg_sign(spec.order)

    def weight(kt):
        return sign * kt**2 / k**2 * xi**2 / spec.z_in * np.exp(-kt**2 / (2 * k) * xi)
    return weight, lg_m(spec.order)


# ---------------------------------------------------------------------------
# field synthesis

def _panel_count(k, rho, z, z_0):
    """Initial panels so that each holds only a few oscillations."""
    phase = k * (np.max(np.abs(z)) + 0.5 * abs(z_0) + np.max(rho))
    return int(np.ceil(phase / (4 * np.pi))) + 8


def _spectral_integrand(spec, rho, z, substitute=True):
    """Vectorised integrand over nodes -> (nodes, points, 3) circular parts."""
    k = spec.k
    weight, m = _radial_weight(spec)
    rho = np.asarray(rho, dtype=float)[None, :]
    z = np.asarray(z, dtype=float)[None, :]

    def integrand(t):
        if substitute:
            kt = k * np.sin(t)
            kz = k * np.cos(t)
            jac = kz
        else:
            kt = t
            kz = np.sqrt(np.maximum(k**2 - t**2, 0.0))
            jac = np.ones_like(t)
        kt_c = kt[:, None]
        kz_c = kz[:, None]
        arg = kt_c * rho
        common = (weight(kt) * jac)[:, None] * np.exp(1j * kz_c * z)
        out = np.empty(arg.shape + (3,), dtype=complex)
        out[..., 0] = common * (kt_c**2 / (2 * k**2)) * bessel_j_unchecked(m + 1, arg)
        out[..., 1] = common * ((2 * k**2 - kt_c**2) / (2 * k**2)) * bessel_j_unchecked(m - 1, arg)
        out[..., 2] = common * (-1j * kt_c * kz_c / (SQRT2 * k**2)) * bessel_j_unchecked(m, arg)
        return out

    return integrand, m


def field_components(spec: BeamSpec, rho, phi, z, quad=DEFAULT_QUADRATURE,
                     substitute=True):
    """Exact focused field at a batch of points.

    Returns ``(values, errors)``, both of shape ``(n, 3)`` with columns
    ``[E_minus, E_plus, E_z]``. Points in a batch share one adaptive
    subdivision; the tolerance applies per point, relative to the largest
    component at that point.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    rho, phi, z = np.broadcast_arrays(rho, phi, z)
    integrand, m = _spectral_integrand(spec, rho, z, substitute)
    z_0 = derive_params(spec).z_0
    q = quad.with_panels(_panel_count(spec.k, rho, z, z_0))
    hi = np.pi / 2 if substitute else spec.k
    try:
        vals, errs = integrate_complex(integrand, 0.0, hi, q, vector_axis=True)
    except QuadratureError as exc:
        bad = np.argmax(np.max(exc.error, axis=-1)) if exc.error is not None else 0
        comp = COMPONENTS[int(np.argmax(exc.error[bad]))] if exc.error is not None else "?"
        raise QuadratureError(
            f"field quadrature failed for component {comp} at "
            f"rho={rho[bad]:.6g}, z={z[bad]:.6g}: {exc}",
            estimate=exc.estimate, error=exc.error) from exc
    phases = np.stack([np.exp(1j * (m + 1) * phi), np.exp(1j * (m - 1) * phi),
                       np.exp(1j * m * phi)], axis=-1)
    return vals * phases, errs


def field_exact(spec: BeamSpec, p: CylPoint, quad=DEFAULT_QUADRATURE) -> FieldSample:
    """Exact vector field of the focused beam at ``p`` (incoming peak = 1)."""
    vals, errs = field_components(spec, p.rho, p.phi, p.z, quad)
    e_minus, e_plus, e_z = vals[0]
    return FieldSample(p, complex(e_plus), complex(e_minus), complex(e_z),
                       float(np.max(errs[0])), {"model": "exact"})


def paraxial_components(spec: BeamSpec, rho, phi, z):
    """Paraxial Gaussian beam with the same ``z_R``, ``z_0`` (batched)."""
    if spec.order is not BeamOrder.GAUSSIAN:
        raise ValueError("the paraxial model is only defined for the Gaussian order")
    rho, phi, z = np.broadcast_arrays(*(np.atleast_1d(np.asarray(a, dtype=float))
                                        for a in (rho, phi, z)))
    par = derive_params(spec)
    k = spec.k
    z_w = par.z_R + 1j * (z - par.z_0)
    e_plus = par.xi * np.exp(1j * k * z) / z_w * np.exp(-k * rho**2 / (2 * z_w))
    out = np.zeros(rho.shape + (3,), dtype=complex)
    out[..., 1] = e_plus
    return out


def field_paraxial(spec: BeamSpec, p: CylPoint) -> FieldSample:
    e_minus, e_plus, e_z = paraxial_components(spec, p.rho, p.phi, p.z)[0]
    return FieldSample(p, complex(e_plus), complex(e_minus), complex(e_z),
                       0.0, {"model": "paraxial"})


class ExactBeam:
    """Field provider backed by the exact mode-sum synthesis."""

    name = "exact"

    def __init__(self, spec: BeamSpec, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                 chunk=16):
        self.spec = spec
        self.quad = quad
        self.chunk = chunk
        self.params = derive_params(spec)

    def components(self, rho, phi, z):
        rho, phi, z = np.broadcast_arrays(*(np.atleast_1d(np.asarray(a, dtype=float))
                                            for a in (rho, phi, z)))
        out = np.empty(rho.shape + (3,), dtype=complex)
        for lo in range(0, rho.size, self.chunk):
            sl = slice(lo, lo + self.chunk)
            out[sl] = field_components(self.spec, rho[sl], phi[sl], z[sl], self.quad)[0]
        return out

    def sample(self, p: CylPoint) -> FieldSample:
        return field_exact(self.spec, p, self.quad)


class ParaxialBeam:
    """Field provider backed by the paraxial Gaussian beam."""

    name = "paraxial"

    def __init__(self, spec: BeamSpec, quad: QuadratureSpec = DEFAULT_QUADRATURE):
        self.spec = spec
        self.quad = quad
        self.params = derive_params(spec)

    def components(self, rho, phi, z):
        return paraxial_components(self.spec, rho, phi, z)

    def sample(self, p: CylPoint) -> FieldSample:
        return field_paraxial(self.spec, p)


def make_beam(spec, model="exact", quad=DEFAULT_QUADRATURE):
    if model == "exact":
        return ExactBeam(spec, quad)
    if model == "paraxial":
        return ParaxialBeam(spec, quad)
    raise ValueError(f"unknown beam model {model!r}")


# ---------------------------------------------------------------------------
# corrections to the paraxial beam

def paraxial_decomposition(spec: BeamSpec, p: CylPoint, quad=DEFAULT_QUADRATURE):
    """Split the exact ``E_plus`` into ``(F1, F2, F3)``.

    ``E_plus = exp(ikz) xi/2 (F1 + F2 - F3)``: ``F1`` is the paraxial-like
    closed form, ``F2`` collects the non-paraxial phase of ``k_z`` and ``F3``
    removes the evanescent range ``k_t > k`` that the closed form includes.
    """
    if spec.order is not BeamOrder.GAUSSIAN:
        raise ValueError("the decomposition is defined for the Gaussian order")
    par = derive_params(spec)
    k, rho, z = spec.k, p.rho, p.z
    z_w = par.z_R + 1j * (z - par.z_0)
    gauss = np.exp(-k * rho**2 / (2 * z_w))
    f1 = (2 / z_w - 2 / (k * z_w**2) * (1 - k * rho**2 / (2 * z_w))) * gauss

    def radial(kt):
        return kt / k * (2 * k**2 - kt**2) / k**2 * bessel_j_unchecked(0, kt * rho) \
            * np.exp(-kt**2 * z_w / (2 * k))

    def f2_integrand(t):
        kt = k * np.sin(t)
        kz = k * np.cos(t)
        # exact k_z - k + k_t^2/2k without cancellation
        dphase = -kt**4 / (2 * k * (k + kz)**2)
        return radial(kt) * np.expm1(1j * dphase * z) * kz

    q = quad.with_panels(_panel_count(k, rho, z, par.z_0))
    if z == 0:
        f2 = 0j
    else:
        f2, _ = integrate_complex(f2_integrand, 0.0, np.pi / 2, q)
    kt_max = np.sqrt(k**2 + 2 * k * _GAUSS_CUTOFF / par.z_R)
    q3 = quad.with_panels(int(np.ceil((kt_max - k) * (rho + abs(z - par.z_0)
                                                       * kt_max / k) / (4 * np.pi))) + 8)
    f3, _ = integrate_complex(radial, k, kt_max, q3)
    return complex(f1), complex(f2), complex(f3)


def recombine_decomposition(spec, p, f1, f2, f3):
    xi = derive_params(spec).xi
    return complex(np.exp(1j * spec.k * p.z) * xi / 2 * (f1 + f2 - f3))


# ---------------------------------------------------------------------------
# incoming beam

def incoming_field(spec: BeamSpec, rho, phi=0.0):
    """Incoming field in the lens plane, ``E_plus`` component only."""
    rho = np.asarray(rho, dtype=float)
    gauss = np.exp(-spec.k * rho**2 / (2 * spec.z_in))
    if spec.order is BeamOrder.GAUSSIAN:
        return gauss + 0j
    sign = 1 if spec.order is BeamOrder.LG_PLUS else -1
    return gauss * np.exp(1j * sign * phi) * rho / spec.z_in


def incoming_power(spec: BeamSpec) -> float:
    """``int dS |alpha F_0|^2`` over the lens plane."""
    amp2 = abs(spec.drive_amplitude) ** 2
    if spec.order is BeamOrder.GAUSSIAN:
        return float(amp2 * np.pi * spec.z_in / spec.k)
    return float(amp2 * np.pi / spec.k**2)


def on_axis_profile(beam, z):
    """``|E_plus|`` on the axis for an array of ``z`` values."""
    z = np.asarray(z, dtype=float)
    return np.abs(beam.components(np.zeros_like(z), 0.0, z)[:, 1])

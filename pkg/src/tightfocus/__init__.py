"""Exact vector fields of strongly focused beams and their scattering by one atom."""

from .numerics import (QuadratureError, QuadratureSpec, DEFAULT_QUADRATURE,
                       bessel_j, integrate_complex)
from .modes import (CylPoint, ModeIndex, mode_field, kernel_G,
                    circular_to_cartesian, cartesian_to_circular)
from .beams import (BeamOrder, BeamSpec, DerivedBeamParams, FieldSample, ExactBeam,
                    ParaxialBeam, derive_params, make_beam, field_exact,
                    field_paraxial, kappa_gaussian, kappa_lg, paraxial_decomposition,
                    incoming_power, beam_for_width, z_in_for_rayleigh, max_width,
                    on_axis_profile)
from .atom import (AtomSpec, DriveCoefficients, SteadyState, dipole_field,
                   drive_coefficients, steady_state)
from .scatter import (FarFieldPoint, IntensityBreakdown, PositionPolicy, Scattering,
                      atom_position, prepare, intensity, g2_zero_delay, k_ratio,
                      scattering_ratio)

__version__ = "0.1.0"

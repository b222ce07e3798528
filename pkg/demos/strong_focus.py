"""
Focusing a Gaussian beam harder and harder
==========================================

A lens of focal length 100 wavelengths focuses Gaussian beams of growing
incoming Rayleigh range. The outgoing Rayleigh range z_R shrinks as
f**2 / z_in, and once it drops below about a wavelength the paraxial
picture stops working: the on-axis maximum moves towards the lens and the
focal spot stops shrinking.

Run:  python demos/strong_focus.py
"""
import warnings

import numpy as np

from tightfocus import BeamSpec, ExactBeam, ParaxialBeam, atom_position, derive_params
from tightfocus.sweeps import fwhm

warnings.simplefilter("ignore")

f = 100.0
print(f"{'z_in':>8} {'z_R':>8} {'peak z - z_0':>13} {'|E| exact':>10} "
      f"{'|E| paraxial':>12} {'FWHM':>6}")
for z_in in (1e3, 3e3, 1e4, 3e4, 1e5, 3e5):
    spec = BeamSpec(focal_length=f, z_in=z_in)
    par = derive_params(spec)
    exact = ExactBeam(spec)
    z_peak = atom_position(exact, before=20.0)
    # field magnitude at the on-axis maximum for both models
    e_peak = np.linalg.norm(exact.components(0.0, 0.0, z_peak)[0])
    p_peak = np.linalg.norm(ParaxialBeam(spec).components(0.0, 0.0, par.z_0)[0])
    # width of the intensity in the plane of the maximum
    rho = np.linspace(0, 4, 401)
    inten = np.sum(np.abs(exact.components(rho, 0.0, z_peak)) ** 2, axis=1)
    print(f"{z_in:8.0e} {par.z_R:8.3f} {z_peak - par.z_0:13.2f} {e_peak:10.1f} "
          f"{p_peak:12.1f} {fwhm(rho, inten):6.3f}")

# For the tightest beam the axial profile is no longer symmetric about its
# maximum, unlike the paraxial Lorentzian.
spec = BeamSpec(focal_length=f, z_in=3e5)
beam = ExactBeam(spec)
z_peak = atom_position(beam)
for d in (2.0, 4.0, 6.0):
    before, after = np.linalg.norm(beam.components([0.0, 0.0], 0.0,
                                                   [z_peak - d, z_peak + d]), axis=1)
    print(f"|E| at peak -/+ {d:.0f} lambda: {before:8.2f} {after:8.2f}")

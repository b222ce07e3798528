"""
Donut beams on the axis
=======================

Laguerre-Gaussian beams with one unit of orbital angular momentum have a
dark axis before the lens. After a strong lens the answer depends on
whether orbital and spin angular momentum add or cancel: when they cancel
the longitudinal field E_z survives on the axis, when they add the axis
stays completely dark.

Run:  python demos/donut_beams.py
"""
import warnings

import numpy as np

from tightfocus import BeamSpec, ExactBeam

warnings.simplefilter("ignore")

z = 497.0
for order in ("gaussian", "lg_minus", "lg_plus"):
    beam = ExactBeam(BeamSpec(focal_length=500, z_in=3e4, order=order))
    on_axis = beam.components(0.0, 0.0, z)[0]
    ring = beam.components(np.linspace(0, 2, 41), 0.0, z)
    rho_max = np.linspace(0, 2, 41)[np.argmax(np.linalg.norm(ring, axis=1))]
    print(f"{order:9s} |E_minus|={abs(on_axis[0]):.3e} |E_plus|={abs(on_axis[1]):.3e} "
          f"|E_z|={abs(on_axis[2]):.3e}  brightest at rho={rho_max:.2f}")

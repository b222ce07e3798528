"""
Where the photons go, and how they are correlated
=================================================

One atom sits at the focus of a beam focused by a lens with f = 500
wavelengths. Far from the atom (R = 50 wavelengths) the light is the sum
of the laser and the dipole field of the atom. Forward, the laser wins
and the light stays coherent (g2 close to 1); sideways only the atom
radiates and the light is antibunched (g2 near 0). In between, where the
two fields interfere destructively, g2 spikes.

Run:  python demos/angular_statistics.py
"""
import warnings

import numpy as np

from tightfocus import BeamSpec, ExactBeam, prepare

warnings.simplefilter("ignore")

phi = np.linspace(0, 0.5, 201) * np.pi
for z_in in (3e4, 6e4):
    setup = prepare(ExactBeam(BeamSpec(focal_length=500, z_in=z_in)))
    d = setup.angular(phi)
    j = int(np.nanargmax(d["g2"]))
    print(f"z_in = {z_in:.0e}, z_R = {setup.beam.params.z_R:.2f}, atom at z = {setup.atom.z:.2f}")
    print(f"  forward I_L/I_d        {d['I_L'][0] / d['I_d'][0]:10.1f}")
    print(f"  forward g2             {d['g2'][0]:10.4f}")
    print(f"  largest g2             {d['g2'][j]:10.1f} at phi = {phi[j] / np.pi:.3f} pi")
    print(f"  I_total/I_L there      {d['I_total'][j] / d['I_L'][j]:10.3f}")
    print(f"  g2 at phi = 0.49 pi    {setup.g2(0.49 * np.pi)[0]:10.4f}")
    for p in (0.0, 0.1, 0.2, 0.3, 0.4, 0.5):
        i = int(round(p / 0.5 * (phi.size - 1)))
        print(f"    phi={p:.1f}pi  I_L={d['I_L'][i]:.3e}  I_d={d['I_d'][i]:.3e}  "
              f"I_int={d['I_int'][i]:+.3e}  g2={d['g2'][i]:.4f}")

"""
How much of the beam can one atom scatter?
==========================================

The scattering ratio compares sigma |E|**2 at the atom, with the
resonant cross section sigma = 3 lambda**2 / (2 pi), to the power carried
by the incoming beam. For each lens the ratio peaks at some width w; the
peak falls as the focal length grows because the lens then cannot
concentrate the beam as tightly.

Run:  python demos/scattering_ratio.py   (about half a minute)
"""
import warnings

import numpy as np

from tightfocus.sweeps import rs_sweep

warnings.simplefilter("ignore")

focal_lengths = (2.5, 5, 10, 25, 50, 100, 250, 500, 1000)
table = rs_sweep(focal_lengths, points=25)
f_col, w_col, rs = table.column("f"), table.column("w"), table.column("R_s")
print(f"{'f':>7} {'best R_s':>9} {'at w':>6}")
for f in focal_lengths:
    sel = f_col == f
    j = int(np.argmax(rs[sel]))
    print(f"{f:7g} {rs[sel][j]:9.3f} {w_col[sel][j]:6.3f}")

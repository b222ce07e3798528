"""Parameter sweeps that produce the figure data sets.

Every sweep returns a :class:`Table`: named columns with units, one row
per grid point, plus the derived beam parameters of every beam involved.
Independent grid points are distributed with :func:`parallel_map`, which
keeps the output order fixed regardless of the number of workers.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .beams import (BeamSpec, beam_for_width, derive_params, make_beam,
                    max_width, on_axis_profile)
from .numerics import DEFAULT_QUADRATURE
from .scatter import (DEFAULT_DRIVE, DEFAULT_RADIUS, PositionPolicy,
                      atom_position, prepare, scattering_ratio)


@dataclass
class Table:
    columns: list
    units: list
    rows: list
    derived: list = field(default_factory=list)

    def column(self, name):
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def parallel_map(func, items, workers=1):
    """Ordered map, in a process pool when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _derived_record(spec, **extra):
    par = derive_params(spec)
    rec = {"focal_length": spec.focal_length, "z_in": spec.z_in,
           "z_R": par.z_R, "z_0": par.z_0, "w": par.w}
    rec.update(extra)
    return rec


ANGULAR_CHUNK = 64


def _fmt_key(x):
    return f"{x:g}"


# ---------------------------------------------------------------------------

def profile(focal_length, z_ins, z_range=(-20.0, 10.0), points=400,
            model="exact", order="gaussian", quad=DEFAULT_QUADRATURE, workers=1,
            wavelength=1.0):
    """On-axis ``|E_plus|`` against ``Z = (z - z_0)/lambda`` for several beams."""
    specs = [BeamSpec(wavelength=wavelength, focal_length=focal_length, z_in=z,
                      order=order) for z in z_ins]
    zgrid = np.linspace(z_range[0], z_range[1], points)
    cols = parallel_map(_profile_job, [(s, zgrid, model, quad) for s in specs], workers)
    rows = [[float(zgrid[i])] + [float(c[i]) for c in cols] for i in range(points)]
    return Table(["Z"] + [f"absF_plus_zin_{_fmt_key(z)}" for z in z_ins],
                 ["lambda"] + ["dimensionless"] * len(z_ins), rows,
                 [_derived_record(s) for s in specs])


def _profile_job(args):
    spec, zgrid, model, quad = args
    beam = make_beam(spec, model, quad)
    return on_axis_profile(beam, beam.params.z_0 + zgrid * spec.wavelength)


def focal_plane(focal_length, z_ins, rho_max=3.0, points=400, model="exact",
                position=PositionPolicy.ON_AXIS_MAX, quad=DEFAULT_QUADRATURE,
                workers=1, wavelength=1.0):
    """Transverse ``|E_plus|`` against ``rho/lambda`` in the focal plane.

    The focal plane is the plane of the on-axis maximum unless ``position``
    selects another policy.
    """
    specs = [BeamSpec(wavelength=wavelength, focal_length=focal_length, z_in=z)
             for z in z_ins]
    rgrid = np.linspace(0.0, rho_max, points)
    out = parallel_map(_focal_job, [(s, rgrid, model, position, quad) for s in specs],
                       workers)
    rows = [[float(rgrid[i])] + [float(c[i]) for c, _ in out] for i in range(points)]
    return Table(["rho"] + [f"absF_plus_zin_{_fmt_key(z)}" for z in z_ins],
                 ["lambda"] + ["dimensionless"] * len(z_ins), rows,
                 [_derived_record(s, focal_plane_z=zf) for s, (_, zf) in zip(specs, out)])


def _focal_job(args):
    spec, rgrid, model, position, quad = args
    beam = make_beam(spec, model, quad)
    z_f = atom_position(beam, position)
    vals = beam.components(rgrid * spec.wavelength, 0.0, z_f)
    return np.abs(vals[:, 1]), z_f


def fwhm(x, y):
    """Full width at half maximum of a profile sampled from its peak at x[0]."""
    y = np.asarray(y, dtype=float)
    half = y[0] / 2
    below = np.flatnonzero(y < half)
    if below.size == 0:
        return float("nan")
    j = below[0]
    # linear interpolation between the bracketing samples
    x0, x1, y0, y1 = x[j - 1], x[j], y[j - 1], y[j]
    return float(2 * (x0 + (half - y0) * (x1 - x0) / (y1 - y0)))


def angular(spec, points=400, model="exact", atom=None, drive=DEFAULT_DRIVE,
            position=PositionPolicy.ON_AXIS_MAX, radius=DEFAULT_RADIUS,
            phi_max=0.5, quad=DEFAULT_QUADRATURE, workers=1):
    """Intensities and ``g2(0)`` against the polar angle (in units of pi).

    Intensities are relative to the forward laser intensity.
    """
    setup = prepare(make_beam(spec, model, quad), atom, drive=drive,
                    position=position, radius=radius)
    phi = np.linspace(0.0, phi_max, points) * np.pi
    # fixed chunk size keeps the result independent of the worker count
    chunks = [phi[i:i + ANGULAR_CHUNK] for i in range(0, points, ANGULAR_CHUNK)]
    parts = parallel_map(_angular_job, [(setup, c) for c in chunks], workers)
    data = {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}
    ref = data["I_L"][0]
    rows = [[float(phi[i] / np.pi), float(data["I_L"][i] / ref),
             float(data["I_d"][i] / ref), float(data["I_total"][i] / ref),
             float(data["g2"][i])] for i in range(points)]
    return Table(["phi_over_pi", "I_L", "I_d", "I_total", "g2"],
                 ["dimensionless", "I_L(0)", "I_L(0)", "I_L(0)", "dimensionless"],
                 rows, [_derived_record(spec, atom_z=setup.atom.z, model=model)])


def _angular_job(args):
    setup, phi = args
    return setup.angular(phi)


def width_grid(w_min=0.1, w_max=6.0, points=25):
    return np.geomspace(w_min, w_max, points)


def _forward_job(args):
    w, f, model, atom, drive, position, radius, quad, lam = args
    spec = beam_for_width(w, f, lam)
    setup = prepare(make_beam(spec, model, quad), atom, drive=drive,
                    position=position, radius=radius)
    return setup.k_ratio(), float(setup.g2(0.0)[0]), _derived_record(spec, model=model)


def forward_statistics(widths, focal_length=500.0, models=("exact", "paraxial"),
                       atom=None, drive=DEFAULT_DRIVE,
                       position=PositionPolicy.ON_AXIS_MAX, radius=DEFAULT_RADIUS,
                       quad=DEFAULT_QUADRATURE, workers=1, wavelength=1.0):
    """Forward ``K`` and ``g2(0)`` per width for each beam model."""
    jobs = [(w, focal_length, m, atom, drive, position, radius, quad, wavelength)
            for m in models for w in widths]
    res = parallel_map(_forward_job, jobs, workers)
    n = len(widths)
    out = {}
    for j, m in enumerate(models):
        block = res[j * n:(j + 1) * n]
        out[m] = {"K": np.array([r[0] for r in block]),
                  "g2": np.array([r[1] for r in block]),
                  "derived": [r[2] for r in block]}
    return out


def g2_width(widths, focal_length=500.0, models=("exact", "paraxial"), **kw):
    stats = forward_statistics(widths, focal_length, models, **kw)
    rows = [[float(w)] + [float(stats[m]["g2"][i]) for m in models]
            for i, w in enumerate(widths)]
    return Table(["w"] + [f"g2_{m}" for m in models],
                 ["dimensionless"] * (1 + len(models)), rows,
                 [d for m in models for d in stats[m]["derived"]])


def k_ratio_width(widths, focal_length=500.0, models=("exact", "paraxial"), **kw):
    stats = forward_statistics(widths, focal_length, models, **kw)
    rows = [[float(w)] + [float(stats[m]["K"][i]) for m in models]
            for i, w in enumerate(widths)]
    return Table(["w"] + [f"K_{m}" for m in models],
                 ["dimensionless"] * (1 + len(models)), rows,
                 [d for m in models for d in stats[m]["derived"]])


def _rs_job(args):
    w, f, model, position, quad, lam = args
    spec = beam_for_width(w, f, lam)
    beam = make_beam(spec, model, quad)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        z_atom = atom_position(beam, position)
    return scattering_ratio(beam, z_atom), _derived_record(spec, atom_z=z_atom)


def rs_width_grid(focal_length, points=25, w_min=0.05, w_max=None, wavelength=1.0):
    """Width grid up to the largest width reachable with the lens."""
    top = max_width(focal_length, wavelength)
    return np.geomspace(w_min, top if w_max is None else min(w_max, top), points)


def rs_sweep(focal_lengths, points=25, w_min=0.05, model="exact",
             position=PositionPolicy.ON_AXIS_MAX, quad=DEFAULT_QUADRATURE, workers=1,
             w_max=None, wavelength=1.0):
    """Scattering ratio over width for each focal length (long format)."""
    jobs = [(float(w), float(f), model, position, quad, wavelength)
            for f in focal_lengths
            for w in rs_width_grid(f, points, w_min, w_max, wavelength)]
    res = parallel_map(_rs_job, jobs, workers)
    rows = []
    for (w, f, *_), (rs, rec) in zip(jobs, res):
        rows.append([f, w, rec["z_R"], rs])
    return Table(["f", "w", "z_R", "R_s"], ["lambda", "dimensionless", "lambda",
                                             "dimensionless"],
                 rows, [rec for _, rec in res])


__all__ = ["Table", "parallel_map", "profile", "focal_plane", "fwhm", "angular",
           "width_grid", "forward_statistics", "g2_width", "k_ratio_width",
           "rs_width_grid", "rs_sweep", "max_width"]

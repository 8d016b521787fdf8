"""Weak geodesics of Kähler potentials on the flat torus.

Thin re-export of the compiled ``_hcma`` extension plus two helpers for
building envelope problems.
"""

from ._hcma import *  # noqa: F401,F403
from ._hcma import (
    EnvelopeProblem,
    GridFunction,
    GridSpec,
    __version__,
    family_patch,
    sample_family,
)

import numpy as _np


def torus_problem(values, omega11=1.0, nt=None):
    """Envelope problem on the torus with t = 1 data given as an (n, n) array."""
    v = _np.asarray(values, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError("values must be a square (n, n) array")
    n = v.shape[0]
    g1 = GridSpec.torus(n, 1)
    f = GridFunction(g1, omega11)
    f.values = v[None, :, :]
    f.symmetric = bool(_np.array_equal(v, _np.roll(v[::-1, ::-1], 1, axis=(0, 1))))
    pb = EnvelopeProblem()
    pb.grid = GridSpec.torus(n, n + 1 if nt is None else nt)
    pb.omega11 = omega11
    pb.v = f
    return pb


def family_problem(n, epsilon=1.0):
    """Dirichlet problem whose exact solution is the degenerate sharp family."""
    pb = EnvelopeProblem()
    pb.grid = family_patch(n)
    exact = sample_family(epsilon, pb.grid)
    pb.boundary = exact
    pb.v = exact.slice(pb.grid.nt - 1)
    return pb

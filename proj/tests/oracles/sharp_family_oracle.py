"""Independent numpy replica of the reduced-Hessian stencils on the sharp family.

u(t, x, y) = -(2t / (eps + t)) x^2 does not depend on y, so every y difference
vanishes and only t and x stencils (one-sided at the faces) remain.
Values printed here are frozen into tests/test_sharp_family.cpp and
tests/acceptance.cpp.
Run: python3 tests/oracles/sharp_family_oracle.py
"""
import numpy as np


def d1(f, h, axis):
    f = np.moveaxis(f, axis, 0)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    g[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return np.moveaxis(g, 0, axis)


def d2(f, h, axis):
    f = np.moveaxis(f, axis, 0)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] + f[:-2] - 2 * f[1:-1]) / h**2
    g[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
    g[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    return np.moveaxis(g, 0, axis)


def family(n, eps=1.0):
    h = 1.0 / n
    t = np.linspace(0.0, 1.0, n + 1)
    x = (np.arange(n + 1) - n // 2) * h
    T, X = np.meshgrid(t, x, indexing="ij")
    u = -(2 * T / (eps + T)) * X**2
    a = d2(u, h, 0) / 4
    b = -1j * d1(d1(u, h, 0), h, 1) / 4
    c = 1 + d2(u, h, 1) / 4
    det = a * c - np.abs(b) ** 2
    return h, det, c


if __name__ == "__main__":
    prev = None
    for n in (32, 64, 128):
        h, det, c = family(n)
        m = np.abs(det).max()
        order = "" if prev is None else f" order={np.log2(prev / m):.4f}"
        print(f"n={n} max|det|={m:.12e} C=max|det|/h^2={m / h**2:.10f} min c={c.min():.15f}{order}")
        prev = m

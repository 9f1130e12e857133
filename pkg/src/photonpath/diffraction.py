"""Scalar and vector far-field diffraction from a sampled z = 0+ field.

The initial field is given on a uniform rectangular grid; its continuous
spatial Fourier transform is evaluated by midpoint quadrature at arbitrary
frequencies (far-field work needs off-grid frequencies k0*x/r, so no
grid-locked fast transform is used).  The far-field formula

    a(x, y, z0) = -(i / lambda0 r) sqrt(z0/r) a0~(k0 x/r, k0 y/r) e^{i k0 r}

is the stationary-phase limit of the angular-spectrum superposition, which
is also provided (as a direct quadrature over the unit disk of propagation
directions, evanescent components excluded) and serves as the oracle for
the far-field expressions at any z.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .foundations import WaveParams

#: Below this value of k0*r the far-field formula is dubious; warn.
FAR_FIELD_KR_GUARD = 1e3


@dataclass(frozen=True)
class FieldGrid:
    """Complex field samples on a uniform, centered rectangular grid.

    ``values`` has shape (nx, ny) for a scalar field or (nx, ny, 2) for a
    transverse vector field (Ex, Ey).  Sample i, j sits at
    x = (i - (nx-1)/2) dx, y = (j - (ny-1)/2) dy.  The grid must cover the
    aperture support; a pitch at or below lambda0/2 is needed if fidelity
    near the evanescent boundary matters.
    """

    values: np.ndarray
    dx: float
    dy: float

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.ndim not in (2, 3) or (v.ndim == 3 and v.shape[2] != 2):
            raise ValueError("values must have shape (nx, ny) or (nx, ny, 2)")
        if v.shape[0] == 0 or v.shape[1] == 0:
            raise ValueError("grid must contain at least one sample")
        if self.dx <= 0.0 or self.dy <= 0.0:
            raise ValueError("grid pitches must be positive")
        object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 3

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) - (self.nx - 1) / 2.0) * self.dx

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) - (self.ny - 1) / 2.0) * self.dy

    @classmethod
    def from_function(
        cls, f: Callable[[np.ndarray, np.ndarray], np.ndarray], nx: int, ny: int, dx: float, dy: float
    ) -> "FieldGrid":
        """Sample ``f(x, y)`` (broadcasting over meshgrid arrays)."""
        x = (np.arange(nx) - (nx - 1) / 2.0) * dx
        y = (np.arange(ny) - (ny - 1) / 2.0) * dy
        xx, yy = np.meshgrid(x, y, indexing="ij")
        return cls(values=np.asarray(f(xx, yy), dtype=complex), dx=dx, dy=dy)

    def component(self, index: int) -> "FieldGrid":
        if not self.is_vector:
            raise ValueError("component() requires a vector grid")
        return FieldGrid(values=self.values[:, :, index], dx=self.dx, dy=self.dy)


@dataclass(frozen=True)
class FarFieldPoint:
    """Observation point (x, y, z0) with z0 > 0 beyond the aperture plane."""

    x: float
    y: float
    z0: float

    def __post_init__(self) -> None:
        if self.z0 <= 0.0:
            raise ValueError("observation plane must lie at z0 > 0")

    @property
    def r(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z0**2)

    @property
    def sigma(self) -> np.ndarray:
        r = self.r
        return np.array([self.x / r, self.y / r, self.z0 / r])


class SpectrumEvaluator:
    """Continuous-frequency Fourier transform of a scalar FieldGrid.

    a0~(kx, ky) = integral of a0(x, y) e^{-i(kx x + ky y)} dx dy, evaluated
    by midpoint quadrature on the sample grid.  Callable at arbitrary
    scalar or array frequencies; ``on_grid`` evaluates on a tensor grid of
    frequencies efficiently.  Linear in the grid values.
    """

    def __init__(self, grid: FieldGrid) -> None:
        if grid.is_vector:
            raise ValueError("SpectrumEvaluator takes a scalar grid; use component()")
        self._values = grid.values
        self._x = grid.x
        self._y = grid.y
        self._cell = grid.dx * grid.dy

    def __call__(self, kx, ky):
        kx = np.asarray(kx, dtype=float)
        ky = np.asarray(ky, dtype=float)
        scalar = kx.ndim == 0 and ky.ndim == 0
        kxf, kyf = np.broadcast_arrays(kx, ky)
        shape = kxf.shape
        kxf, kyf = kxf.ravel(), kyf.ravel()
        px = np.exp(-1j * np.outer(kxf, self._x))          # (M, nx)
        py = np.exp(-1j * np.outer(kyf, self._y))          # (M, ny)
        out = self._cell * np.einsum("mi,ij,mj->m", px, self._values, py, optimize=True)
        return complex(out[0]) if scalar else out.reshape(shape)

    def on_grid(self, kx: np.ndarray, ky: np.ndarray) -> np.ndarray:
        """Evaluate on the tensor grid kx[i], ky[j]; returns shape (len(kx), len(ky))."""
        px = np.exp(-1j * np.outer(np.asarray(kx, float), self._x))   # (Mx, nx)
        py = np.exp(-1j * np.outer(self._y, np.asarray(ky, float)))  # (ny, My)
        return self._cell * (px @ self._values @ py)


def spectrum(g: FieldGrid) -> SpectrumEvaluator:
    """Continuous-frequency evaluator of the initial amplitude's transform."""
    return SpectrumEvaluator(g)


def far_field_scalar(
    g: FieldGrid, p: FarFieldPoint, wave: WaveParams, evaluator: SpectrumEvaluator | None = None
) -> complex:
    """Far-field diffracted amplitude at observation point p.

    Applies the stationary-phase form with the sqrt(z0/r) obliquity factor
    inherited from the sigma_z^{-1/2} energy-conservation scaling of the
    deflected plane waves.  Warns (without refusing) when k0*r is below
    the far-field guard.
    """
    r = p.r
    if wave.k0 * r < FAR_FIELD_KR_GUARD:
        warnings.warn(
            f"k0*r = {wave.k0 * r:.3g} is below the far-field guard {FAR_FIELD_KR_GUARD:g}",
            stacklevel=2,
        )
    ev = evaluator if evaluator is not None else spectrum(g)
    a0 = ev(wave.k0 * p.x / r, wave.k0 * p.y / r)
    sigma_z = p.z0 / r
    return -1j / (wave.lambda0 * r) * math.sqrt(sigma_z) * a0 * np.exp(1j * wave.k0 * r)


def far_field_vector(
    g: FieldGrid, p: FarFieldPoint, wave: WaveParams
) -> tuple[complex, complex]:
    """RCP and LCP far-field amplitudes from a transverse vector aperture field.

    The transforms of Ex and Ey are combined into circular components

        E(+/-) = [(sigma_z -/+ i sigma_x sigma_y) Ex~ -/+ i(1 - sigma_x^2) Ey~]
                 / [2 sigma_z sqrt(1 - sigma_x^2)]

    and scaled by the scalar far-field factor.  Observation directions with
    sigma_x^2 -> 1 hit a coordinate singularity of the circular basis and
    are rejected.
    """
    if not g.is_vector:
        raise ValueError("far_field_vector requires a vector FieldGrid")
    sx, sy, sz = p.sigma
    if sz <= 0.0:
        raise ValueError("observation direction must have sigma_z > 0")
    if 1.0 - sx * sx < 1e-12:
        raise ValueError(
            "observation along the x-axis (sigma_x^2 = 1) is a removable-basis "
            "singularity of the circular decomposition; displace the point"
        )
    r = p.r
    kx, ky = wave.k0 * p.x / r, wave.k0 * p.y / r
    ex_t = spectrum(g.component(0))(kx, ky)
    ey_t = spectrum(g.component(1))(kx, ky)
    root = math.sqrt(1.0 - sx * sx)
    e_plus = ((sz - 1j * sx * sy) * ex_t - 1j * (1.0 - sx * sx) * ey_t) / (2.0 * sz * root)
    e_minus = ((sz + 1j * sx * sy) * ex_t + 1j * (1.0 - sx * sx) * ey_t) / (2.0 * sz * root)
    scale = -1j / (wave.lambda0 * r) * math.sqrt(sz) * np.exp(1j * wave.k0 * r)
    return scale * e_plus, scale * e_minus


def angular_spectrum_propagate(
    g: FieldGrid,
    x,
    y,
    z,
    wave: WaveParams,
    mode: str = "polar",
    n_nodes: int = 1201,
    window: tuple[float, float, float, float] | None = None,
    n_radial: int = 800,
    n_angular: int = 512,
    max_sigma: float = 1.0,
    evaluator: SpectrumEvaluator | None = None,
):
    """Exact (up to quadrature) plane-wave superposition at distance z.

    a(x, y, z) = lambda0^{-2} * integral over sigma_x^2 + sigma_y^2 < 1 of
    sigma_z^{-1/2} a0~(k0 sigma_x, k0 sigma_y)
    e^{i k0 (sigma_x x + sigma_y y + sigma_z z)} d sigma_x d sigma_y.

    Evanescent components are excluded by the hard unit-circle cutoff.
    Two quadrature parametrizations are offered:

    * ``mode="polar"`` (default, reference): substituting
      sigma_perp = sin(u) turns the disk into the rectangle
      u in [0, pi/2], phi in [0, 2 pi) and absorbs the sigma_z^{-1/2}
      edge singularity into a bounded sin(u) sqrt(cos(u)) weight, so
      spectra reaching the unit circle are handled correctly
      (Gauss-Legendre in u over [0, arcsin(max_sigma)], trapezoid in
      phi).  x, y, z broadcast together.
    * ``mode="cartesian"``: tensor Gauss-Legendre nodes on ``window`` =
      (sx_min, sx_max, sy_min, sy_max), masked to the disk.  Fast for
      many observation points (the transverse phase factorizes), but only
      accurate when the spectrum is negligible at the window edges and at
      the unit circle.  z must be a scalar; x, y broadcast.

    Oscillation budget: Gauss-Legendre with n nodes resolves a total
    phase sweep of roughly pi*n across the integration range, so n must
    grow with k0 z (and with k0 |x| for the cartesian transverse axes).
    """
    ev = evaluator if evaluator is not None else spectrum(g)
    if mode == "polar":
        return _propagate_polar(ev, x, y, z, wave, n_radial, n_angular, max_sigma)
    if mode == "cartesian":
        return _propagate_cartesian(ev, x, y, z, wave, n_nodes, window)
    raise ValueError(f"mode must be 'polar' or 'cartesian', got {mode!r}")


def _propagate_polar(
    ev: SpectrumEvaluator, x, y, z, wave: WaveParams, n_radial: int, n_angular: int, max_sigma: float
):
    if n_radial < 2 or n_angular < 4:
        raise ValueError("need n_radial >= 2 and n_angular >= 4")
    if not 0.0 < max_sigma <= 1.0:
        raise ValueError("max_sigma must lie in (0, 1]")
    x_arr, y_arr, z_arr = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(z, dtype=float)
    )
    if np.any(z_arr <= 0.0):
        raise ValueError("propagation distance z must be positive")
    scalar = x_arr.ndim == 0
    shape = x_arr.shape
    xf, yf, zf = x_arr.ravel(), y_arr.ravel(), z_arr.ravel()

    nodes, weights = np.polynomial.legendre.leggauss(n_radial)
    u_max = math.asin(max_sigma)
    u = 0.5 * u_max * (nodes + 1.0)
    wu = 0.5 * u_max * weights
    phi = (np.arange(n_angular) + 0.5) * (2.0 * math.pi / n_angular)
    wphi = 2.0 * math.pi / n_angular

    s = np.sin(u)[:, None]                       # sigma_perp, (n_u, 1)
    sz = np.cos(u)[:, None]
    sx = s * np.cos(phi)[None, :]
    sy = s * np.sin(phi)[None, :]
    a0 = ev(wave.k0 * sx, wave.k0 * sy)          # (n_u, n_phi)
    base = a0 * (s * np.sqrt(sz)) * wu[:, None] * wphi / wave.lambda0**2

    out = np.empty(xf.shape, dtype=complex)
    for j in range(xf.size):
        phase = wave.k0 * (sx * xf[j] + sy * yf[j] + sz * zf[j])
        out[j] = np.sum(base * np.exp(1j * phase))
    return complex(out[0]) if scalar else out.reshape(shape)


def _propagate_cartesian(
    ev: SpectrumEvaluator,
    x,
    y,
    z,
    wave: WaveParams,
    n_nodes: int,
    window: tuple[float, float, float, float] | None,
):
    z = float(np.asarray(z))
    if z <= 0.0:
        raise ValueError("propagation distance z must be positive")
    if n_nodes < 2:
        raise ValueError("n_nodes must be at least 2")
    wx0, wx1, wy0, wy1 = window if window is not None else (-1.0, 1.0, -1.0, 1.0)
    if not (-1.0 <= wx0 < wx1 <= 1.0 and -1.0 <= wy0 < wy1 <= 1.0):
        raise ValueError("window must be a nonempty sub-square of [-1, 1]^2")

    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    sx = 0.5 * (wx1 - wx0) * nodes + 0.5 * (wx1 + wx0)
    wxs = 0.5 * (wx1 - wx0) * weights
    sy = 0.5 * (wy1 - wy0) * nodes + 0.5 * (wy1 + wy0)
    wys = 0.5 * (wy1 - wy0) * weights

    s_sq = sx[:, None] ** 2 + sy[None, :] ** 2
    inside = s_sq < 1.0
    sz = np.sqrt(np.where(inside, 1.0 - s_sq, 1.0))

    a0 = ev.on_grid(wave.k0 * sx, wave.k0 * sy)
    shared = np.where(inside, a0 / np.sqrt(sz) * np.exp(1j * wave.k0 * sz * z), 0.0)
    shared = shared * wxs[:, None] * wys[None, :] / wave.lambda0**2

    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    scalar = x_arr.ndim == 0 and y_arr.ndim == 0
    xf, yf = np.broadcast_arrays(x_arr, y_arr)
    shape = xf.shape
    xf, yf = xf.ravel(), yf.ravel()

    ex = np.exp(1j * wave.k0 * np.outer(sx, xf))    # (n, M)
    ey = np.exp(1j * wave.k0 * np.outer(sy, yf))    # (n, M)
    partial = shared.T @ ex                          # (n, M): sum over sx
    out = np.sum(ey * partial, axis=0)               # sum over sy
    return complex(out[0]) if scalar else out.reshape(shape)

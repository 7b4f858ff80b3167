"""Spinless-particle phase space on a uniform 1-D grid.

Position and momentum sample a centered periodic grid with N points (a power
of two), spacing dx = L/N and induced momentum spacing dp = 2*pi*hbar/L.
The discrete Fourier transform carries the unitary weights dx/sqrt(2*pi*hbar)
so that Parseval holds exactly on-grid.

The phase-space amplitude anchored at a point (x0, p0) is

    Z(x, p) = Psi(x) * xi(p) * exp(i*(x0*p - x*p0)/hbar)

and its grid marginals factor exactly:

    sum_p Z(x, p) dp = C  * exp(-i*x*p0/hbar) * Psi(x),   C  ~ Psi(x0)
    sum_x Z(x, p) dx = C' * exp(+i*x0*p/hbar) * xi(p),    C' ~ xi(p0)

so the marginal has a constant modulus ratio to the wavefunction and a phase
linear in the conjugate variable.  Free evolution multiplies the momentum
representation by exp(-i*p^2*dt/(2*m*hbar)); the anchor follows the
classical free trajectory (a modeling choice, stated here, not forced by
anything upstream).

Natural units hbar = 1, m = 1 are the defaults throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid1D",
    "GridWavefunction",
    "PhaseSpaceAmplitude",
    "FreePropagator",
    "gaussian_wavepacket",
    "momentum_representation",
    "position_representation",
    "phase_space_amplitude",
    "marginal_x",
    "marginal_p",
    "evolve_free",
    "evolve_phase_space",
    "marginal_diagnostics",
]

# Probability mass allowed outside the central half of the box before a
# state counts as clipped by the periodic boundary.
_CLIP_TOL = 1e-8


@dataclass(frozen=True)
class Grid1D:
    """Centered uniform grid with N points (power of two) over length L."""

    n: int
    length: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.n < 16 or self.n & (self.n - 1) != 0:
            raise ValueError("grid size must be a power of two, at least 16")
        if self.length <= 0 or self.hbar <= 0:
            raise ValueError("length and hbar must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dp(self) -> float:
        return 2.0 * math.pi * self.hbar / self.length

    @cached_property
    def x(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @cached_property
    def p(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp


@dataclass(frozen=True)
class GridWavefunction:
    """Complex samples on a grid, tagged position or momentum."""

    grid: Grid1D
    values: np.ndarray
    space: str = "position"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n,):
            raise ValueError("sample count does not match the grid")
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ValueError("wavefunction samples must be finite")
        if self.space not in ("position", "momentum"):
            raise ValueError("space must be 'position' or 'momentum'")
        object.__setattr__(self, "values", vals)

    @property
    def weight(self) -> float:
        """Quadrature weight of one sample (dx or dp)."""
        return self.grid.dx if self.space == "position" else self.grid.dp

    @property
    def coordinates(self) -> np.ndarray:
        return self.grid.x if self.space == "position" else self.grid.p

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.weight)

    def normalized(self) -> "GridWavefunction":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ValueError("cannot normalize the zero wavefunction")
        return GridWavefunction(self.grid, self.values / math.sqrt(n2), self.space)

    def mean(self) -> float:
        w = np.abs(self.values) ** 2 * self.weight
        return float(np.sum(self.coordinates * w) / np.sum(w))

    def std(self) -> float:
        w = np.abs(self.values) ** 2 * self.weight
        w = w / np.sum(w)
        mu = float(np.sum(self.coordinates * w))
        return float(math.sqrt(np.sum((self.coordinates - mu) ** 2 * w)))


def _check_unclipped(psi: GridWavefunction):
    g = psi.grid
    outside = np.abs(g.x) > g.length / 4.0
    frac = float(
        np.sum(np.abs(psi.values[outside]) ** 2) / np.sum(np.abs(psi.values) ** 2)
    )
    if frac > _CLIP_TOL:
        raise ValueError(
            f"state carries {frac:.3e} of its mass outside the central half "
            "of the box; enlarge the grid before it wraps around"
        )


def gaussian_wavepacket(
    grid: Grid1D, center: float = 0.0, momentum: float = 0.0, width: float = 1.0
) -> GridWavefunction:
    """Normalized Gaussian packet exp(-(x-xc)^2/(2 w^2)) * exp(i pc x / hbar).

    The width must resolve the grid (w >= 4 dx) and fit the box (w <= L/8).
    """
    if width < 4.0 * grid.dx:
        raise ValueError(f"width {width} under-resolved; need at least {4*grid.dx}")
    if width > grid.length / 8.0:
        raise ValueError(f"width {width} too large for the box; at most {grid.length/8}")
    x = grid.x
    vals = (
        (math.pi * width**2) ** (-0.25)
        * np.exp(-((x - center) ** 2) / (2.0 * width**2))
        * np.exp(1j * momentum * x / grid.hbar)
    )
    return GridWavefunction(grid, vals, "position").normalized()


def momentum_representation(psi: GridWavefunction) -> GridWavefunction:
    """Unitary Fourier transform to the momentum grid.

    xi(p_k) = dx/sqrt(2 pi hbar) * sum_j psi(x_j) exp(-i p_k x_j / hbar),
    evaluated exactly by a centered FFT.
    """
    if psi.space != "position":
        raise ValueError("input must be a position-space wavefunction")
    g = psi.grid
    f = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(psi.values)))
    return GridWavefunction(g, f * (g.dx / math.sqrt(2.0 * math.pi * g.hbar)), "momentum")


def position_representation(xi: GridWavefunction) -> GridWavefunction:
    """Inverse of :func:`momentum_representation`; round trips to 1e-10."""
    if xi.space != "momentum":
        raise ValueError("input must be a momentum-space wavefunction")
    g = xi.grid
    f = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(xi.values)))
    return GridWavefunction(
        g, f * (g.n * g.dp / math.sqrt(2.0 * math.pi * g.hbar)), "position"
    )


@dataclass(frozen=True)
class PhaseSpaceAmplitude:
    """Z(x, p) on the N x N grid, anchored at a phase-space point."""

    psi: GridWavefunction
    xi: GridWavefunction
    x0: float
    p0: float
    values: np.ndarray

    @property
    def grid(self) -> Grid1D:
        return self.psi.grid


def phase_space_amplitude(
    psi: GridWavefunction,
    xi: GridWavefunction | None = None,
    x0: float = 0.0,
    p0: float = 0.0,
) -> PhaseSpaceAmplitude:
    """Build Z(x, p) = Psi(x) xi(p) exp(i (x0 p - x p0) / hbar).

    ``xi`` defaults to the Fourier transform of ``psi``; a supplied ``xi``
    must match it.
    """
    if psi.space != "position":
        raise ValueError("psi must be a position-space wavefunction")
    g = psi.grid
    computed = momentum_representation(psi)
    if xi is None:
        xi = computed
    else:
        if xi.space != "momentum" or xi.grid != g:
            raise ValueError("xi must live on the momentum grid of psi")
        scale = float(np.max(np.abs(computed.values)))
        if not np.allclose(xi.values, computed.values, atol=1e-8 * scale, rtol=0.0):
            raise ValueError("xi is not the momentum representation of psi")
    x = g.x[:, None]
    p = g.p[None, :]
    phase = np.exp(1j * (x0 * p - x * p0) / g.hbar)
    values = psi.values[:, None] * xi.values[None, :] * phase
    return PhaseSpaceAmplitude(psi, xi, float(x0), float(p0), values)


def _interp_at_x(psi: GridWavefunction, x0: float, hbar: float) -> complex:
    # Trigonometric interpolation through the momentum samples; equals the
    # grid value when x0 lies on the grid.
    xi = momentum_representation(psi)
    g = psi.grid
    return complex(
        np.sum(xi.values * np.exp(1j * x0 * g.p / hbar))
        * g.dp
        / math.sqrt(2.0 * math.pi * hbar)
    )


def marginal_x(z: PhaseSpaceAmplitude) -> GridWavefunction:
    """Momentum-summed marginal sum_p Z(x, p) dp.

    Equals C * exp(-i x p0 / hbar) * Psi(x) with C proportional to Psi(x0);
    an anchor sitting on a node of Psi leaves no usable marginal and is
    rejected.
    """
    g = z.grid
    anchor_value = _interp_at_x(z.psi, z.x0, g.hbar)
    scale = float(np.max(np.abs(z.psi.values)))
    if abs(anchor_value) < 1e-9 * scale:
        raise ValueError(
            f"anchor x0 = {z.x0} sits on a node of the position wavefunction"
        )
    vals = z.values.sum(axis=1) * g.dp
    return GridWavefunction(g, vals, "position")


def marginal_p(z: PhaseSpaceAmplitude) -> GridWavefunction:
    """Position-summed marginal sum_x Z(x, p) dx.

    Equals C' * exp(+i x0 p / hbar) * xi(p) with C' proportional to xi(p0).
    """
    g = z.grid
    anchor_value = complex(
        np.sum(z.psi.values * np.exp(-1j * z.p0 * g.x / g.hbar))
        * g.dx
        / math.sqrt(2.0 * math.pi * g.hbar)
    )
    scale = float(np.max(np.abs(z.xi.values)))
    if abs(anchor_value) < 1e-9 * scale:
        raise ValueError(
            f"anchor p0 = {z.p0} sits on a node of the momentum wavefunction"
        )
    vals = z.values.sum(axis=0) * g.dx
    return GridWavefunction(g, vals, "momentum")


def marginal_diagnostics(
    z: PhaseSpaceAmplitude, which: str = "x", support: float = 1e-6
) -> dict[str, float]:
    """Structure checks of a phase-space marginal against its wavefunction.

    Over samples where the reference wavefunction modulus exceeds
    ``support``, reports the relative spread of |marginal/reference| (which
    should be constant) and the fitted linear phase slope of the ratio
    (-p0/hbar for the x marginal, +x0/hbar for the p marginal).
    """
    g = z.grid
    if which == "x":
        marg = marginal_x(z)
        ref = z.psi
        coord = g.x
        expected = -z.p0 / g.hbar
    elif which == "p":
        marg = marginal_p(z)
        ref = z.xi
        coord = g.p
        expected = z.x0 / g.hbar
    else:
        raise ValueError("which must be 'x' or 'p'")
    mask = np.abs(ref.values) > support
    ratio = marg.values[mask] / ref.values[mask]
    mod = np.abs(ratio)
    spread = float((mod.max() - mod.min()) / mod.mean())
    phase = np.unwrap(np.angle(ratio))
    slope = float(np.polyfit(coord[mask], phase, 1)[0])
    return {
        "modulus_spread": spread,
        "phase_slope": slope,
        "expected_slope": expected,
        "constant_modulus": float(mod.mean()),
    }


def evolve_free(psi: GridWavefunction, mass: float = 1.0, dt: float = 0.0) -> GridWavefunction:
    """Free evolution by the momentum-space kernel exp(-i p^2 dt / (2 m hbar)).

    Equivalent to convolution with the free kernel; unitary on the grid.
    The output is checked against wraparound (post-hoc unclipped guard).
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    g = psi.grid
    xi = momentum_representation(psi) if psi.space == "position" else psi
    phase = np.exp(-1j * g.p**2 * dt / (2.0 * mass * g.hbar))
    out_xi = GridWavefunction(g, xi.values * phase, "momentum")
    out = position_representation(out_xi)
    _check_unclipped(out)
    return out if psi.space == "position" else out_xi


@dataclass(frozen=True)
class FreePropagator:
    """Free-particle kernel parameters; preserves norm to 1e-9 per contract."""

    mass: float = 1.0
    dt: float = 0.0
    hbar: float = 1.0

    def apply(self, psi: GridWavefunction) -> GridWavefunction:
        if psi.grid.hbar != self.hbar:
            raise ValueError("propagator hbar does not match the grid")
        return evolve_free(psi, self.mass, self.dt)

    def kernel_matrix(self, grid: Grid1D) -> np.ndarray:
        """Dense kernel K(x, y) = sqrt(m/(2 pi i hbar dt)) e^{i m (x-y)^2 / (2 hbar dt)}.

        Quadrature with this matrix reproduces the spectral evolution up to
        grid truncation and aliasing; it exists for cross checks, not as the
        production path.
        """
        if self.dt == 0.0:
            raise ValueError("kernel matrix undefined at dt = 0")
        x = grid.x
        diff = x[:, None] - x[None, :]
        pref = np.sqrt(self.mass / (2.0j * math.pi * self.hbar * self.dt))
        return pref * np.exp(1j * self.mass * diff**2 / (2.0 * self.hbar * self.dt))


def evolve_phase_space(
    z: PhaseSpaceAmplitude, mass: float = 1.0, dt: float = 0.0
) -> PhaseSpaceAmplitude:
    """Evolve Z by evolving its factors and the anchor.

    The wavefunction moves under the free kernel, the momentum factor is its
    transform, and the anchor follows the classical free path
    (x0 + p0 dt / m, p0).  Marginals of the evolved Z then match the evolved
    wavefunctions with the same constant-modulus, linear-phase structure.
    """
    psi2 = evolve_free(z.psi, mass, dt)
    x0 = z.x0 + z.p0 * dt / mass
    return phase_space_amplitude(psi2, None, x0, z.p0)

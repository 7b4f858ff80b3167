"""Two-slit interference, phase shifts and decoherence on the screen grid.

The slit variable S in {L, R} is a third coordinate next to screen position
and momentum.  Slit-resolved amplitudes are far-field (Fraunhofer) closed
forms on the screen,

    Z_{L,R}(x) ~ sinc(pi w x / (lam D)) * exp(+/- i pi d x / (lam D)),

normalized so that the two squared norms sum to one.  The plain marginal
over S is Z_L + Z_R and shows fringes spaced lam*D/d.  A detector at the R
slit shifts the R component by a phase theta, displacing the pattern; when
the shift is stochastic and uniform the theta-averaged pattern collapses to
the fringe-free mixture |Z_L|^2 + |Z_R|^2, reproducing the projection rule.

The mixture side also carries the positivity argument: strictly positive
probability allocations over any hidden axis keep every screen point
strictly probable, while the interference pattern has zeros, so no such
allocation can reproduce it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ampdist.continuous import Grid1D

__all__ = [
    "SlitGeometry",
    "SlitAmplitudes",
    "PhaseShiftModel",
    "PositivityReport",
    "slit_amplitudes",
    "screen_pattern",
    "decohere_average",
    "conditional_slit_probabilities",
    "positivity_check",
]

# Far-field validity: the quadratic fringe-phase error stays below ~pi/60
# for D >= 10 d^2/lam, and the envelope needs D >= 100 w^2/lam.
_FAR_FIELD_SEPARATION = 10.0
_FAR_FIELD_WIDTH = 100.0


@dataclass(frozen=True)
class SlitGeometry:
    """Two-slit far-field geometry with a screen grid.

    separation and width are the slit center distance and opening, wavelength
    and distance the illumination and screen placement; span is the screen
    window (default 4 lam D / w, two envelope zeros either side).
    """

    separation: float
    width: float
    wavelength: float
    distance: float
    points: int = 4096
    span: float | None = None

    def __post_init__(self):
        for name in ("separation", "width", "wavelength", "distance"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.width >= self.separation:
            raise ValueError("slit width must be smaller than the separation")
        d, w, lam, dist = self.separation, self.width, self.wavelength, self.distance
        need = max(_FAR_FIELD_SEPARATION * d * d / lam, _FAR_FIELD_WIDTH * w * w / lam)
        if dist < need:
            raise ValueError(
                f"near-field geometry: screen distance {dist:g} is below the "
                f"far-field threshold {need:g}; move the screen farther out or "
                "shrink the slits"
            )
        if self.span is None:
            object.__setattr__(self, "span", 4.0 * lam * dist / w)
        if self.span <= 0:
            raise ValueError("span must be positive")

    @property
    def fringe_spacing(self) -> float:
        return self.wavelength * self.distance / self.separation

    @property
    def envelope_scale(self) -> float:
        """First zero of the single-slit envelope."""
        return self.wavelength * self.distance / self.width

    @cached_property
    def grid(self) -> Grid1D:
        return Grid1D(self.points, self.span)


@dataclass(frozen=True)
class SlitAmplitudes:
    """Slit-resolved complex amplitudes on the screen grid."""

    geometry: SlitGeometry
    z_left: np.ndarray
    z_right: np.ndarray

    def __post_init__(self):
        n = self.geometry.grid.n
        if self.z_left.shape != (n,) or self.z_right.shape != (n,):
            raise ValueError("amplitude arrays must match the screen grid")
        dx = self.geometry.grid.dx
        if (
            float(np.sum(np.abs(self.z_left) ** 2) * dx) == 0.0
            or float(np.sum(np.abs(self.z_right) ** 2) * dx) == 0.0
        ):
            raise ValueError("slit amplitudes must not vanish identically")

    @property
    def x(self) -> np.ndarray:
        return self.geometry.grid.x

    def mixture(self) -> np.ndarray:
        """Fringe-free component sum |Z_L|^2 + |Z_R|^2."""
        return np.abs(self.z_left) ** 2 + np.abs(self.z_right) ** 2


@dataclass(frozen=True)
class PhaseShiftModel:
    """Detector-induced phase shift on the R component.

    mode "fixed" displaces the pattern by a known theta; mode "random" is a
    uniform stochastic shift on [0, 2 pi) whose ensemble average is taken
    with ``samples`` quadrature nodes (or draws).
    """

    mode: str = "fixed"
    theta: float = 0.0
    samples: int = 256

    def __post_init__(self):
        if self.mode not in ("fixed", "random"):
            raise ValueError("mode must be 'fixed' or 'random'")
        if not 0.0 <= self.theta < 2.0 * math.pi:
            object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))
        if self.samples < 1:
            raise ValueError("sample count must be at least 1")


def slit_amplitudes(geom: SlitGeometry) -> SlitAmplitudes:
    """Far-field slit amplitudes with equal moduli and opposite linear phase."""
    x = geom.grid.x
    u = x / geom.envelope_scale
    envelope = np.sinc(u)  # sin(pi u)/(pi u)
    phi = math.pi * geom.separation / (geom.wavelength * geom.distance) * x
    z_left = envelope * np.exp(1j * phi)
    z_right = envelope * np.exp(-1j * phi)
    total = float(
        np.sum(np.abs(z_left) ** 2 + np.abs(z_right) ** 2) * geom.grid.dx
    )
    scale = 1.0 / math.sqrt(total)
    return SlitAmplitudes(geom, z_left * scale, z_right * scale)


def screen_pattern(
    sa: SlitAmplitudes, theta: float = 0.0, normalize: bool = True
) -> np.ndarray:
    """Screen distribution P(x, theta) = |Z_L(x) + e^{i theta} Z_R(x)|^2.

    theta = 0 is the unperturbed interference pattern.  With ``normalize``
    the samples integrate to one over the screen; the raw Born weights keep
    the common normalization that makes theta averages exact.
    """
    z = sa.z_left + np.exp(1j * float(theta)) * sa.z_right
    pattern = np.abs(z) ** 2
    if normalize:
        pattern = pattern / (np.sum(pattern) * sa.geometry.grid.dx)
    return pattern


def decohere_average(
    sa: SlitAmplitudes,
    samples: int = 256,
    mode: str = "quadrature",
    rng: int | np.random.Generator = 0,
) -> np.ndarray:
    """Uniform theta average of the Born-weight pattern.

    Quadrature mode is the exact ensemble average: the trapezoid rule on the
    periodic integrand is a uniform node mean, and the integrand has only
    e^{+/- i theta} harmonics, so any node count >= 2 kills the cross term
    and returns |Z_L|^2 + |Z_R|^2.  Mode "sampled" draws seeded uniform
    shifts instead and keeps the Monte Carlo residual of order 1/sqrt(K).
    """
    if samples < 1:
        raise ValueError("sample count must be at least 1")
    if mode == "quadrature":
        thetas = 2.0 * math.pi * np.arange(samples) / samples
    elif mode == "sampled":
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        thetas = rng.uniform(0.0, 2.0 * math.pi, size=samples)
    else:
        raise ValueError("mode must be 'quadrature' or 'sampled'")
    mean_phase = complex(np.mean(np.exp(1j * thetas)))
    cross = 2.0 * np.real(mean_phase * np.conj(sa.z_left) * sa.z_right)
    return sa.mixture() + cross


def conditional_slit_probabilities(
    sa: SlitAmplitudes, x: float, theta: float = 0.0
) -> tuple[float, float]:
    """P(L | x, theta) and P(R | x, theta) at the grid point nearest x.

    The phase shift leaves |Z_R| unchanged, so the conditionals do not
    depend on theta; it is accepted to keep the joint-law bookkeeping
    P(x, S, theta) = P(x, theta) * P(S | x, theta) explicit.
    """
    del theta  # |e^{i theta} Z_R| = |Z_R|
    g = sa.geometry.grid
    j = int(np.argmin(np.abs(g.x - x)))
    wl = float(np.abs(sa.z_left[j]) ** 2)
    wr = float(np.abs(sa.z_right[j]) ** 2)
    total = wl + wr
    if total == 0.0:
        raise ValueError(f"both slit amplitudes vanish at x = {g.x[j]}")
    return wl / total, wr / total


@dataclass(frozen=True)
class PositivityReport:
    """Pointwise comparison of positive mixtures against the fringe pattern."""

    hidden_size: int
    pattern_min: float
    mixture_min: float
    mixture_lower_bound_min: float
    marginal_match_error: float

    @property
    def mixture_strictly_positive(self) -> bool:
        return self.mixture_min > 0.0

    @property
    def pattern_has_zeros(self) -> bool:
        return self.pattern_min < 1e-12


def positivity_check(
    sa: SlitAmplitudes,
    hidden_size: int = 4,
    rng: int | np.random.Generator = 0,
) -> PositivityReport:
    """Why strictly positive slit mixtures cannot make the fringe pattern.

    Distributes |Z_L|^2 and |Z_R|^2 over a hidden axis with strictly
    positive random weights, checks that the hidden sums recover the slit
    components, that the pointwise lower bound
    max(sum_lam P(x, L, lam), sum_lam' P(x, R, lam')) stays strictly
    positive everywhere, and reports it against the minima of the
    interference pattern.
    """
    if hidden_size < 1:
        raise ValueError("hidden axis needs at least one value")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    wl = np.abs(sa.z_left) ** 2
    wr = np.abs(sa.z_right) ** 2
    npts = wl.shape[0]

    def allocate(weights: np.ndarray) -> np.ndarray:
        shares = rng.uniform(0.1, 1.0, size=(hidden_size, npts))
        shares = shares / shares.sum(axis=0)
        return weights[None, :] * shares

    p_left = allocate(wl)
    p_right = allocate(wr)
    sum_left = p_left.sum(axis=0)
    sum_right = p_right.sum(axis=0)
    match_error = float(
        max(np.max(np.abs(sum_left - wl)), np.max(np.abs(sum_right - wr)))
    )
    lower_bound = np.maximum(sum_left, sum_right)
    pattern = screen_pattern(sa, 0.0)
    return PositivityReport(
        hidden_size=hidden_size,
        pattern_min=float(pattern.min()),
        mixture_min=float(sa.mixture().min()),
        mixture_lower_bound_min=float(lower_bound.min()),
        marginal_match_error=match_error,
    )

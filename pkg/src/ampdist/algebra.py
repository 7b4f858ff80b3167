"""Quaternion and direction arithmetic for amplitude-valued distributions.

Spin amplitudes live in the quaternion algebra with basis (1, I, J, K) and
Hamilton convention I*J = K.  A space direction n maps to the pure imaginary
unit quaternion N(n) = nx*I + ny*J + nz*K, which satisfies conj(N)*N = 1 and

    conj(N1) * N2 = n1.n2 - N(n1 x n2)

for any two unit vectors, hence norm_sq(N1 +/- N2) = 2 * (1 +/- n1.n2).

Amplitude scalars are either Python complex numbers or Quaternion values;
both support addition, multiplication, conjugation and a squared norm that
is multiplicative under products.  The module-level ``norm_sq`` and
``conjugate`` helpers dispatch over both kinds.

All arithmetic is plain 64-bit floating point.  The identities above hold to
roughly 1e-15 and downstream tests pin them at 1e-12.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

__all__ = [
    "Quaternion",
    "UnitVector3",
    "norm_sq",
    "conjugate",
    "ZERO",
    "ONE",
    "I",
    "J",
    "K",
]

# Constructors accept input this far from unit length and silently renormalize;
# anything farther off is rejected as bad data rather than masked.
_UNIT_SLACK = 1e-6


@dataclass(frozen=True)
class Quaternion:
    """Amplitude scalar w + x*I + y*J + z*K over 64-bit floats."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))

    @classmethod
    def from_direction(cls, n: "UnitVector3") -> "Quaternion":
        """Embed a unit vector as the pure imaginary quaternion N(n)."""
        return cls(0.0, n.nx, n.ny, n.nz)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def dot(self, other: "Quaternion") -> float:
        """Euclidean inner product; the scalar part of conj(self) * other."""
        return (
            self.w * other.w
            + self.x * other.x
            + self.y * other.y
            + self.z * other.z
        )

    def components(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(
            self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z
        )

    # lets sum() start from 0
    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(
            self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z
        )

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a, b = self, other
            return Quaternion(
                a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            )
        if isinstance(other, numbers.Real):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            s = float(other)
            return Quaternion(s * self.w, s * self.x, s * self.y, s * self.z)
        return NotImplemented

    def __abs__(self) -> float:
        return math.sqrt(self.norm_sq())


ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class UnitVector3:
    """Direction in space, stored normalized to unit length.

    Input must already be within 1e-6 of unit length (it is then renormalized
    exactly); anything else is rejected so that bad data is not masked.  Use
    :meth:`normalized` to build a direction from an arbitrary nonzero vector.
    """

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        nx, ny, nz = float(self.nx), float(self.ny), float(self.nz)
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if norm == 0.0:
            raise ValueError("zero vector has no direction")
        if abs(norm - 1.0) > _UNIT_SLACK:
            raise ValueError(
                f"vector ({nx}, {ny}, {nz}) is not unit length (|v| = {norm:.9g}); "
                "use UnitVector3.normalized to normalize explicitly"
            )
        object.__setattr__(self, "nx", nx / norm)
        object.__setattr__(self, "ny", ny / norm)
        object.__setattr__(self, "nz", nz / norm)

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        """Normalize an arbitrary nonzero vector into a direction."""
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0:
            raise ValueError("zero vector has no direction")
        return cls(x / norm, y / norm, z / norm)

    def dot(self, other: "UnitVector3") -> float:
        return self.nx * other.nx + self.ny * other.ny + self.nz * other.nz

    def cross(self, other: "UnitVector3") -> tuple[float, float, float]:
        return (
            self.ny * other.nz - self.nz * other.ny,
            self.nz * other.nx - self.nx * other.nz,
            self.nx * other.ny - self.ny * other.nx,
        )

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.nx, -self.ny, -self.nz)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.nx, self.ny, self.nz)


def norm_sq(value) -> float:
    """Squared norm of an amplitude scalar (complex or quaternion)."""
    if isinstance(value, Quaternion):
        return value.norm_sq()
    z = complex(value)
    return z.real * z.real + z.imag * z.imag


def conjugate(value):
    """Conjugate of an amplitude scalar (complex or quaternion)."""
    if isinstance(value, Quaternion):
        return value.conjugate()
    return complex(value).conjugate()

"""Hamilton quaternion scalars and the eta-involutions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class EtaAxis(enum.Enum):
    """Imaginary unit used by eta-conjugation."""

    I = 1
    J = 2
    K = 3

    @classmethod
    def parse(cls, value) -> "EtaAxis":
        if isinstance(value, EtaAxis):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"eta must be one of i, j, k (got {value!r})") from None

    @property
    def unit(self) -> "Quaternion":
        c = [0.0, 0.0, 0.0, 0.0]
        c[self.value] = 1.0
        return Quaternion(*c)

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class Quaternion:
    """The quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float)):
            return cls(float(value))
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        w, x, y, z = value
        return cls(float(w), float(x), float(y), float(z))

    def as_tuple(self):
        return (self.w, self.x, self.y, self.z)

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other):
        try:
            o = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        try:
            o = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (Quaternion, int, float, complex)):
            return qmul(self, Quaternion.coerce(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return qmul(Quaternion.coerce(other), self)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return self * qinv(Quaternion.coerce(other))

    def __abs__(self):
        return norm(self)

    def conj(self) -> "Quaternion":
        return qconj(self)

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p * q``."""
    a0, a1, a2, a3 = p.w, p.x, p.y, p.z
    b0, b1, b2, b3 = q.w, q.x, q.y, q.z
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def qconj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def norm(q: Quaternion) -> float:
    return math.sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z)


def eta_conj(q: Quaternion, eta: EtaAxis) -> Quaternion:
    """Return ``-eta * conj(q) * eta``.

    Conjugating by a unit imaginary keeps the real part and the ``eta``
    component and flips the other two, so the composite with ``qconj`` only
    negates the ``eta`` component.
    """
    eta = EtaAxis.parse(eta)
    c = list(q.as_tuple())
    c[eta.value] = -c[eta.value]
    return Quaternion(*c)


def qinv(q: Quaternion) -> Quaternion:
    n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z
    if n2 == 0.0:
        raise ZeroDivisionError("quaternion inverse of zero")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)

"""Scalar quaternion arithmetic and the fixed frequency axis.

Quaternions are stored in (w, x, y, z) component order, meaning
q = w + x*i + y*j + z*k with the usual non-commutative product

    i*i = j*j = k*k = -1,   i*j = -j*i = k,
    j*k = -k*j = i,         k*i = -i*k = j.

The three-phase signal construction elsewhere in this package places the
phase voltages on the i, j, k axes and measures frequency along the pure
unit axis (i + j + k)/sqrt(3); :class:`FrequencyAxis` and :func:`qexp_axis`
provide that machinery.
"""

from __future__ import annotations

import math

# Absolute tolerance used when validating "pure" and "unit" quaternions.
# Far below any signal-level tolerance, well above double rounding noise.
PURITY_TOL = 1e-12

_NUMBER_TYPES = (int, float)


class Quaternion:
    """A quaternion w + x*i + y*j + z*k over double-precision reals.

    Instances are treated as immutable values; all arithmetic returns new
    objects. Real numbers mix freely with quaternions in arithmetic and are
    embedded as quaternions with zero vector part.
    """

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w: float = 0.0, x: float = 0.0, y: float = 0.0, z: float = 0.0):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (
            self.w == other.w
            and self.x == other.x
            and self.y == other.y
            and self.z == other.z
        )

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __add__(self, other) -> "Quaternion":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion(
            self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Quaternion":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion(
            self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z
        )

    def __rsub__(self, other) -> "Quaternion":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other) -> "Quaternion":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __rmul__(self, other) -> "Quaternion":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __truediv__(self, other) -> "Quaternion":
        # Division is only defined by real scalars; quaternion division is
        # ambiguous (left vs right) and spelled explicitly via inverse().
        if isinstance(other, _NUMBER_TYPES):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_squared(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def inverse(self) -> "Quaternion":
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise ValueError("the zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def scalar_part(self) -> float:
        return self.w

    def vector_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return abs(self.w) <= tol

    def is_unit(self, tol: float = PURITY_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def to_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        other = _coerce(other)
        d = self - other
        return d.norm() <= tol * max(1.0, self.norm(), other.norm())


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, _NUMBER_TYPES):
        return Quaternion(float(value))
    return None


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Quaternion product a*b (order matters)."""
    return _coerce(a) * _coerce(b)


def qconj(a: Quaternion) -> Quaternion:
    """Quaternion conjugate: negates the vector part."""
    return _coerce(a).conjugate()


def qnorm(a: Quaternion) -> float:
    """Euclidean norm sqrt(w^2 + x^2 + y^2 + z^2)."""
    return _coerce(a).norm()


def qinv(a: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(a)/|a|^2; raises ValueError on zero."""
    return _coerce(a).inverse()


class FrequencyAxis:
    """A pure unit quaternion serving as the imaginary axis for exponentials.

    Such an axis squares to -1, so cos(t) + mu*sin(t) behaves exactly like a
    complex exponential along the mu direction. The default axis is
    (i + j + k)/sqrt(3), the direction singled out by the balanced three-phase
    embedding.
    """

    __slots__ = ("mu",)

    def __init__(self, mu: Quaternion):
        if not mu.is_pure():
            raise ValueError(f"axis must be pure (scalar part {mu.w!r} exceeds tolerance)")
        if not mu.is_unit():
            raise ValueError(f"axis must have unit norm, got {mu.norm()!r}")
        self.mu = mu

    @classmethod
    def default(cls) -> "FrequencyAxis":
        s = 1.0 / math.sqrt(3.0)
        return cls(Quaternion(0.0, s, s, s))

    def components(self) -> tuple[float, float, float]:
        return (self.mu.x, self.mu.y, self.mu.z)

    def __repr__(self) -> str:
        return f"FrequencyAxis({self.mu!r})"


DEFAULT_AXIS = FrequencyAxis.default()


def qexp_axis(axis: FrequencyAxis, theta: float) -> Quaternion:
    """Exponential cos(theta) + mu*sin(theta) along a fixed pure unit axis.

    Satisfies qexp_axis(axis, a) * qexp_axis(axis, b) == qexp_axis(axis, a + b)
    and always has unit norm.
    """
    mu = axis.mu
    c = math.cos(theta)
    s = math.sin(theta)
    return Quaternion(c, mu.x * s, mu.y * s, mu.z * s)


def axis_commutator_sign(a: Quaternion, axis: FrequencyAxis = DEFAULT_AXIS) -> str:
    """Classify how a pure quaternion multiplies against the axis.

    Returns "commutes" when a*mu == mu*a (a parallel to mu), "anticommutes"
    when a*mu == -mu*a (a orthogonal to mu), and "neither" otherwise. The
    anticommuting case is what flips exponentials across coefficients:
    a * qexp_axis(mu, t) == qexp_axis(mu, -t) * a.
    """
    scale = max(1.0, a.norm())
    if abs(a.w) > PURITY_TOL * scale:
        raise ValueError("input must be a pure quaternion (zero scalar part)")
    mu = axis.mu
    am = a * mu
    ma = mu * a
    tol = PURITY_TOL * scale
    if (am - ma).norm() <= tol:
        return "commutes"
    if (am + ma).norm() <= tol:
        return "anticommutes"
    return "neither"

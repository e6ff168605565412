"""Exact slopes on T^2 and radial twist angles of the model contact structures.

A slope is the direction p/q = (dphi)/(dtheta) of a linear curve system in the
(meridian, longitude) basis: meridional curves have slope 0, longitudinal
curves slope infinity.

A twist angle is a radial angle r^2 of the model structure
zeta = ker(cos r^2 dphi + sin r^2 dtheta), stored exactly as a pair
(n, s) with value n*pi + theta, theta = arctan(-s) in (-pi/2, pi/2] and
s = infinity <-> theta = pi/2.  The foliation on the torus at angle r^2 has
slope -tan r^2, which is exactly s.  Angles with rational tangent are closed
under addition and negation, so spans and sums stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("slope (0, 0) is undefined")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if text in ("inf", "oo", "infinity"):
            return INF
        if "/" in text:
            num, den = text.split("/")
            return cls(int(num), int(den))
        return cls(int(text), 1)

    @classmethod
    def from_fraction(cls, value) -> "Slope":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def value(self) -> Fraction:
        if self.q == 0:
            raise ZeroDivisionError("infinite slope has no rational value")
        return Fraction(self.p, self.q)

    def negate(self) -> "Slope":
        return self if self.q == 0 else Slope(-self.p, self.q)

    def farey_distance(self, other: "Slope") -> int:
        """|det| of the two primitive vectors; 1 means Farey neighbours."""
        return abs(self.p * other.q - self.q * other.p)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def text(self) -> str:
        """Script spelling: 'inf' for infinity, 'p' or 'p/q' otherwise."""
        if self.q == 0:
            return "inf"
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"


INF = Slope(1, 0)
ZERO = Slope(0, 1)


@dataclass(frozen=True)
class BasisChange:
    """Integer matrix [[a, b], [c, d]] acting on (p, q) column vectors."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det() not in (1, -1):
            raise ValueError(f"basis change must have determinant +-1, got {self.det()}")

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "BasisChange") -> "BasisChange":
        return BasisChange(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "BasisChange":
        det = self.det()
        return BasisChange(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def apply(self, p: int, q: int) -> tuple[int, int]:
        return self.a * p + self.b * q, self.c * p + self.d * q

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def text(self) -> str:
        return f"[{self.a} {self.b};{self.c} {self.d}]"


IDENTITY = BasisChange(1, 0, 0, 1)


def change_basis(s: Slope, g: BasisChange) -> Slope:
    return Slope(*g.apply(s.p, s.q))


def _tan_of(s: Slope):
    """tan(theta) = -s, or None for theta = pi/2."""
    return None if s.q == 0 else -Fraction(s.p, s.q)


def _slope_of_tan(t) -> Slope:
    return INF if t is None else Slope.from_fraction(-t)


@total_ordering
@dataclass(frozen=True)
class TwistAngle:
    n: int
    s: Slope

    def _key(self):
        # theta increases with -s, and infinity (theta = pi/2) is the top
        return (self.n, 1, 0) if self.s.q == 0 else (self.n, 0, -self.s.value())

    def __lt__(self, other: "TwistAngle") -> bool:
        return self._key() < other._key()

    def __add__(self, other: "TwistAngle") -> "TwistAngle":
        carry, s = _add_residuals(self.s, other.s)
        return TwistAngle(self.n + other.n + carry, s)

    def __neg__(self) -> "TwistAngle":
        if self.s.q == 0:
            return TwistAngle(-self.n - 1, INF)
        return TwistAngle(-self.n, self.s.negate())

    def __sub__(self, other: "TwistAngle") -> "TwistAngle":
        return self + (-other)

    def half_turns_floor(self) -> int:
        """floor(value / pi)."""
        if self.s.q != 0 and self.s.p > 0:
            return self.n - 1
        return self.n

    def as_float(self) -> float:
        theta = math.pi / 2 if self.s.q == 0 else math.atan(-self.s.p / self.s.q)
        return self.n * math.pi + theta

    def pi_fraction(self):
        """Exact value / pi when the residual is a multiple of pi/4, else None."""
        frac = _SPECIAL_RESIDUALS.get(self.s)
        return None if frac is None else self.n + frac

    def text(self) -> str:
        return f"{self.n}*pi+{self.s.text()}"

    def __str__(self):
        return f"({self.n}, {self.s})"


def _add_residuals(s1: Slope, s2: Slope) -> tuple[int, Slope]:
    """theta1 + theta2 as (carry of pi's, residual slope)."""
    t1, t2 = _tan_of(s1), _tan_of(s2)
    if t1 is None and t2 is None:
        return 1, ZERO
    if t1 is None or t2 is None:
        t = t2 if t1 is None else t1
        # pi/2 + theta
        if t == 0:
            return 0, INF
        return (1 if t > 0 else 0), _slope_of_tan(-1 / t)
    prod = t1 * t2
    if prod < 1:
        return 0, _slope_of_tan((t1 + t2) / (1 - prod))
    if prod == 1:
        return (0, INF) if t1 > 0 else (-1, INF)
    if t1 > 0:
        return 1, _slope_of_tan((t1 + t2) / (1 - prod))
    return -1, _slope_of_tan((t1 + t2) / (1 - prod))


_SPECIAL_RESIDUALS = {
    ZERO: Fraction(0),
    Slope(-1, 1): Fraction(1, 4),
    INF: Fraction(1, 2),
    Slope(1, 1): Fraction(-1, 4),
}

ANGLE_ZERO = TwistAngle(0, ZERO)
HALF_TURN = TwistAngle(1, ZERO)
# the radii sqrt(pi/4), sqrt(pi/2), sqrt(3pi/4), sqrt(pi)
QUARTER_PI = TwistAngle(0, Slope(-1, 1))
HALF_PI = TwistAngle(0, INF)
THREE_QUARTER_PI = TwistAngle(1, Slope(1, 1))
DEFAULT_KNOT_ANGLE = TwistAngle(0, Slope(-1, 100))


def angle_of_pi_multiple(value) -> TwistAngle:
    """The angle value*pi for value a multiple of 1/4 (the only ones with rational tangent)."""
    value = Fraction(value)
    if (value * 4).denominator != 1:
        raise ValueError(f"{value}*pi has irrational tangent")
    n = math.floor(value + Fraction(1, 2))
    residual = value - n
    if residual == Fraction(-1, 2):
        n, residual = n - 1, Fraction(1, 2)
    for s, frac in _SPECIAL_RESIDUALS.items():
        if frac == residual:
            return TwistAngle(n, s)
    raise AssertionError("unreachable")


def slope_of_angle(t: TwistAngle) -> Slope:
    return t.s


def add_half_turn(t: TwistAngle, k: int = 1) -> TwistAngle:
    if k <= 0:
        raise ValueError("k must be positive")
    return TwistAngle(t.n + k, t.s)


def angle_for_slope(s: Slope, n: int = 0) -> TwistAngle:
    if n < 0:
        raise ValueError("n must be non-negative")
    return TwistAngle(n, s)


def compare_angles(t1: TwistAngle, t2: TwistAngle) -> int:
    """-1, 0 or 1."""
    if t1 == t2:
        return 0
    return -1 if t1 < t2 else 1


def first_angle_with_slope(s: Slope, floor: TwistAngle = ANGLE_ZERO) -> TwistAngle:
    """Smallest angle strictly above `floor` whose foliation slope is s."""
    t = TwistAngle(floor.n, s)
    while t <= floor:
        t = TwistAngle(t.n + 1, s)
    return t


def extend_to_basis(m: tuple[int, int]) -> tuple[int, int]:
    """A class l with det(m, l) = 1 for a primitive class m = (mu, lambda) coefficients."""
    a, b = m
    if math.gcd(a, b) != 1:
        raise ValueError(f"{m} is not primitive")
    # extended gcd: a*x + b*y = 1 ; det((a,b),(u,v)) = a*v - b*u = 1 -> v = x, u = -y
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_x, x = x, old_x - quo * x
        old_y, y = y, old_y - quo * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    u, v = -old_y, old_x
    assert a * v - b * u == 1
    return u, v

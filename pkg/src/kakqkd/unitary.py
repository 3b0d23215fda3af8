"""2x2 transform families and commutation queries.

Three families are supported: rotations ``U1(t)``, reflections ``U2(t)``
across the line at angle ``t/2``, and the complex phase-pair family
``(1/sqrt2) [[e^{it}, e^{-it}], [i e^{it}, -i e^{-it}]]``.

Commutation is answered two ways: :func:`commutes` multiplies both orders
and compares, :func:`commutes_analytic` evaluates a closed-form magnitude
of the commutator.  The two are expected to agree everywhere.

Note that two reflections commute only when ``sin(t - p) == 0``: the
product ``U2(t) U2(p)`` is the rotation ``U1(t - p)``, which depends on the
order of the factors.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

from . import kernels
from .errors import InvalidArgument

TAU = 2.0 * math.pi
UNITARITY_TOL = 1e-12
COMMUTATION_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)


def canonical_angle(radians: float) -> float:
    """Map a finite angle into ``[0, 2pi)``."""
    if not math.isfinite(radians):
        raise InvalidArgument(f"angle must be finite, got {radians!r}")
    r = math.fmod(float(radians), TAU)
    if r < 0.0:
        r += TAU
    # -tiny + TAU rounds up to TAU
    if r >= TAU:
        r = 0.0
    return r


def _check_tol(tol: float) -> float:
    if not tol > 0.0:
        raise InvalidArgument(f"tolerance must be positive, got {tol!r}")
    return tol


class Unitary2(NamedTuple):
    """Row-major 2x2 complex matrix ``[[w, x], [y, z]]``."""

    w: complex
    x: complex
    y: complex
    z: complex

    @property
    def det(self) -> complex:
        return self.w * self.z - self.x * self.y

    def rows(self) -> list[list[complex]]:
        return [[self.w, self.x], [self.y, self.z]]

    def allclose(self, other: Unitary2, tol: float = UNITARITY_TOL) -> bool:
        return max(abs(a - b) for a, b in zip(self, other)) <= tol


IDENTITY = Unitary2(1 + 0j, 0j, 0j, 1 + 0j)


class Form(enum.Enum):
    """Public transform family tag."""

    ROTATION = "rotation"
    REFLECTION = "reflection"
    PHASE_PAIR = "phase-pair"

    @property
    def kernel_code(self) -> int:
        return _KERNEL_CODES[self]

    def spec(self, theta: float) -> TransformSpec:
        """Build the spec of this family with the given secret angle."""
        return _SPEC_CLASSES[self](theta)


_KERNEL_CODES = {
    Form.ROTATION: kernels.ROTATION,
    Form.REFLECTION: kernels.REFLECTION,
    Form.PHASE_PAIR: kernels.PHASE_PAIR,
}


@dataclass(frozen=True)
class TransformSpec:
    """A transform family (public) together with its angle (secret)."""

    theta: float
    form: ClassVar[Form]

    def __post_init__(self):
        if type(self) is TransformSpec:
            raise TypeError("use Rotation, Reflection or PhasePair")
        object.__setattr__(self, "theta", canonical_angle(self.theta))


@dataclass(frozen=True)
class Rotation(TransformSpec):
    form: ClassVar[Form] = Form.ROTATION


@dataclass(frozen=True)
class Reflection(TransformSpec):
    form: ClassVar[Form] = Form.REFLECTION


@dataclass(frozen=True)
class PhasePair(TransformSpec):
    form: ClassVar[Form] = Form.PHASE_PAIR


_SPEC_CLASSES = {
    Form.ROTATION: Rotation,
    Form.REFLECTION: Reflection,
    Form.PHASE_PAIR: PhasePair,
}


def make_rotation(theta: float) -> Unitary2:
    """``[[cos t, -sin t], [sin t, cos t]]``."""
    return Unitary2(*kernels.rotation(canonical_angle(theta)))


def make_reflection(theta: float) -> Unitary2:
    """``[[cos t, sin t], [sin t, -cos t]]``; determinant -1."""
    return Unitary2(*kernels.reflection(canonical_angle(theta)))


def make_phase_pair(theta: float) -> Unitary2:
    return Unitary2(*kernels.phase_pair(canonical_angle(theta)))


def realize(spec: TransformSpec) -> Unitary2:
    return Unitary2(*kernels.family(spec.form.kernel_code, spec.theta))


def multiply(a: Unitary2, b: Unitary2) -> Unitary2:
    return Unitary2(*kernels.matmul(a, b))


def dagger(u: Unitary2) -> Unitary2:
    return Unitary2(*kernels.dagger(u))


def is_unitary(u: Unitary2, tol: float = UNITARITY_TOL) -> bool:
    return kernels.unitarity_error(u) <= _check_tol(tol)


def commutes(a: Unitary2, b: Unitary2, tol: float = COMMUTATION_TOL) -> bool:
    """Brute force: multiply in both orders and compare entrywise."""
    return kernels.commutator_error(a, b) <= _check_tol(tol)


def commutator_bound(a: TransformSpec, b: TransformSpec) -> float:
    """Closed-form ``max |(AB - BA)_ij|`` for two family members.

    The magnitude is symmetric in its arguments, so only one ordering of
    each family pair is written out.
    """
    fa, fb = a.form, b.form
    t, p = a.theta, b.theta
    if _ORDER[fa] > _ORDER[fb]:
        fa, fb, t, p = fb, fa, p, t

    if fa is Form.ROTATION:
        if fb is Form.ROTATION:
            return 0.0
        if fb is Form.REFLECTION:
            # U1(t)U2(p) = U2(t+p), U2(p)U1(t) = U2(p-t)
            return 2.0 * abs(math.sin(t)) * max(abs(math.sin(p)), abs(math.cos(p)))
        q = p + math.pi / 4.0
        return _SQRT2 * abs(math.sin(t)) * max(abs(math.sin(q)), abs(math.cos(q)))

    if fa is Form.REFLECTION:
        if fb is Form.REFLECTION:
            # U2(t)U2(p) = U1(t-p) while U2(p)U2(t) = U1(p-t)
            return 2.0 * abs(math.sin(p - t))
        st, ct = math.sin(t), math.cos(t)
        e2 = cmath.exp(2j * p)
        diag = _SQRT2 * abs(st) * abs(math.sin(p + math.pi / 4.0))
        upper = abs(2.0 * ct - st * (e2 + 1j)) / _SQRT2
        lower = abs(st * (e2 + 1j) - 2j * ct * e2) / _SQRT2
        return max(diag, upper, lower)

    # phase-pair x phase-pair: every entry of the commutator has modulus |sin(p - t)|
    return abs(math.sin(p - t))


_ORDER = {Form.ROTATION: 0, Form.REFLECTION: 1, Form.PHASE_PAIR: 2}


def commutes_analytic(a: TransformSpec, b: TransformSpec, tol: float = COMMUTATION_TOL) -> bool:
    """Closed-form commutation test.

    Rotations always commute with each other.  Reflections commute iff
    ``sin(t - p) = 0``; a rotation and a reflection iff the rotation angle
    is a multiple of pi; two phase-pair members iff ``sin(p - t) = 0``.
    A reflection ``U2(t)`` and phase-pair ``P(p)`` commute only when
    ``cos t = 0`` and ``sin(p + pi/4) = 0``.
    """
    return commutator_bound(a, b) <= _check_tol(tol)

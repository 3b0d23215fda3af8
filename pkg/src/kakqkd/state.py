"""Single-qubit pure states, the message basis and Born-rule readout."""

from __future__ import annotations

import math
import random
from typing import NamedTuple

from . import kernels
from .errors import AmbiguousState, InvalidArgument
from .unitary import Unitary2

NORM_TOL = 1e-12
DECODE_TOL = 1e-9


class StateVector(NamedTuple):
    amp0: complex
    amp1: complex

    def norm(self) -> float:
        return math.sqrt(kernels.norm_sq(self))

    def scaled(self, factor: complex) -> StateVector:
        return StateVector(self.amp0 * factor, self.amp1 * factor)


class BasisPair(NamedTuple):
    """The two orthogonal message states; bit 0 maps to ``x0``."""

    x0: StateVector
    x1: StateVector


def make_basis(alpha: float, beta: float) -> BasisPair:
    """Message pair ``a|0> + b|1>`` and ``b|0> - a|1>`` for real ``a, b``."""
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise InvalidArgument("basis coefficients must be finite")
    if abs(alpha * alpha + beta * beta - 1.0) > 1e-9:
        raise InvalidArgument(f"alpha^2 + beta^2 must be 1, got {alpha * alpha + beta * beta!r}")
    a, b = complex(alpha), complex(beta)
    return BasisPair(StateVector(a, b), StateVector(b, -a))


COMPUTATIONAL = make_basis(1.0, 0.0)


def _check_bit(bit: int) -> int:
    if bit not in (0, 1):
        raise InvalidArgument(f"bit must be 0 or 1, got {bit!r}")
    return int(bit)


def encode(bit: int, basis: BasisPair = COMPUTATIONAL) -> StateVector:
    return basis.x1 if _check_bit(bit) else basis.x0


def apply(u: Unitary2, s: StateVector) -> StateVector:
    return StateVector(*kernels.matvec(u, s))


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|^2``."""
    return kernels.fidelity(a, b)


class RngStream:
    """Seeded uniform stream.

    Backed by the stdlib Mersenne Twister, whose ``random()`` output for a
    given integer seed is stable across platforms and Python releases.
    One stream belongs to one run; do not share across threads.
    """

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int):
        if not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise InvalidArgument(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = seed
        self._gen = random.Random(seed)

    def random(self) -> float:
        return self._gen.random()

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self._gen.random()

    def bit(self) -> int:
        return self._gen.getrandbits(1)

    def bits(self, n: int) -> list[int]:
        return [self._gen.getrandbits(1) for _ in range(n)]


def probability_zero(s: StateVector, basis: BasisPair) -> float:
    """Born-rule probability of reading bit 0."""
    return min(1.0, max(0.0, kernels.fidelity(basis.x0, s)))


def measure(s: StateVector, basis: BasisPair, rng: RngStream) -> int:
    """Projective measurement in ``basis``; consumes exactly one draw.

    The caller must treat ``s`` as collapsed afterwards.
    """
    return 0 if rng.random() < probability_zero(s, basis) else 1


def decode_exact(s: StateVector, basis: BasisPair, tol: float = DECODE_TOL) -> int:
    """Read the bit off a state that equals a basis state up to global phase.

    Raises :class:`AmbiguousState` if neither fidelity reaches ``1 - tol``.
    """
    f0 = kernels.fidelity(basis.x0, s)
    if f0 >= 1.0 - tol:
        return 0
    f1 = kernels.fidelity(basis.x1, s)
    if f1 >= 1.0 - tol:
        return 1
    raise AmbiguousState(f0, f1)

"""Rotating-key framing for the single-stage protocol.

A frame is ``l`` data qubits followed by ``k`` key-update qubits, all sent
under the current angle.  The key bits read as an integer ``N`` (first
bit least significant, weights ``1, 2, ..., 2**(k-1)``) and both sides then
switch to ``theta_N = N*pi / 2**k``, which always stays in ``[0, pi)``.

Alice updates from the key bits she sent, Bob from the bits he read, so a
corrupted key qubit silently desynchronizes the two trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidArgument
from .protocol import PASSIVE, ChannelTap, RunOutcome, check_half_turn, single_stage_transfer
from .state import COMPUTATIONAL, BasisPair, RngStream

MAX_KEY_BITS = 32


@dataclass(frozen=True)
class FrameConfig:
    l: int = 64
    k: int = 4

    def __post_init__(self):
        if not (isinstance(self.l, int) and self.l >= 1):
            raise InvalidArgument(f"l must be a positive integer, got {self.l!r}")
        if not (isinstance(self.k, int) and 1 <= self.k <= MAX_KEY_BITS):
            raise InvalidArgument(f"k must be in 1..{MAX_KEY_BITS}, got {self.k!r}")


@dataclass
class KeyState:
    theta: float
    frame_index: int = 0

    def __post_init__(self):
        check_half_turn(self.theta)


@dataclass(frozen=True)
class Frame:
    data_bits: tuple[int, ...]
    key_bits: tuple[int, ...]

    def check(self, config: FrameConfig) -> None:
        if len(self.data_bits) != config.l or len(self.key_bits) != config.k:
            raise InvalidArgument(
                f"frame has {len(self.data_bits)}+{len(self.key_bits)} bits, expected {config.l}+{config.k}"
            )


def decode_index(key_bits: Sequence[int]) -> int:
    if not 1 <= len(key_bits) <= MAX_KEY_BITS:
        raise InvalidArgument(f"need 1..{MAX_KEY_BITS} key bits, got {len(key_bits)}")
    n = 0
    for j, b in enumerate(key_bits):
        if b not in (0, 1):
            raise InvalidArgument(f"key bit {j} is {b!r}")
        n |= b << j
    return n


def theta_from_index(n: int, k: int) -> float:
    if not 1 <= k <= MAX_KEY_BITS:
        raise InvalidArgument(f"k must be in 1..{MAX_KEY_BITS}, got {k!r}")
    if not 0 <= n < (1 << k):
        raise InvalidArgument(f"index {n} out of range for k={k}")
    return n * math.pi / (1 << k)


@dataclass
class FrameOutcome:
    data: list[RunOutcome]
    key: list[RunOutcome]
    data_errors: int
    key_errors: int


@dataclass
class StreamOutcome:
    frames: list[FrameOutcome] = field(default_factory=list)
    alice_thetas: list[float] = field(default_factory=list)
    bob_thetas: list[float] = field(default_factory=list)

    @property
    def desync(self) -> bool:
        return self.alice_thetas != self.bob_thetas

    @property
    def data_errors(self) -> int:
        return sum(f.data_errors for f in self.frames)

    @property
    def key_errors(self) -> int:
        return sum(f.key_errors for f in self.frames)


def stream_run(
    config: FrameConfig,
    initial_theta: float,
    frames: Sequence[Frame],
    tap: ChannelTap = PASSIVE,
    rng: Optional[RngStream] = None,
    basis: BasisPair = COMPUTATIONAL,
) -> StreamOutcome:
    """Send ``frames`` over the single-stage channel, re-keying after each one.

    Trajectories start with ``initial_theta`` and gain one entry per frame.
    """
    rng = rng if rng is not None else RngStream(0)
    alice = KeyState(initial_theta)
    bob = KeyState(initial_theta)
    out = StreamOutcome(alice_thetas=[alice.theta], bob_thetas=[bob.theta])

    for frame in frames:
        frame.check(config)
        data = [single_stage_transfer(alice.theta, bob.theta, b, basis, tap, rng) for b in frame.data_bits]
        key = [single_stage_transfer(alice.theta, bob.theta, b, basis, tap, rng) for b in frame.key_bits]
        read_key = [o.bob_reading for o in key]

        alice.theta = theta_from_index(decode_index(frame.key_bits), config.k)
        bob.theta = theta_from_index(decode_index(read_key), config.k)
        alice.frame_index += 1
        bob.frame_index += 1
        out.alice_thetas.append(alice.theta)
        out.bob_thetas.append(bob.theta)
        out.frames.append(
            FrameOutcome(
                data=data,
                key=key,
                data_errors=sum(o.bob_reading != b for o, b in zip(data, frame.data_bits)),
                key_errors=sum(r != b for r, b in zip(read_key, frame.key_bits)),
            )
        )
    return out

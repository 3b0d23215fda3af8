"""Three-stage and single-stage protocol runs over a tap-able channel.

A run is a fixed schedule of party steps.  Every transit goes through a
:class:`Channel`, which hands the in-flight qubit to the run's
:class:`ChannelTap` and checks that whatever comes back is an unread
:class:`FlightQubit`.

Three-stage message order::

    alice --U_A X-------------> bob        STAGE1
    alice <--U_B U_A X--------- bob        STAGE2
    alice --U_A^+ U_B U_A X---> bob        STAGE3   bob applies U_B^+

A tap with ``interposes = True`` splits the channel instead: Alice runs a
complete session with the tap's receiver role, then the tap's sender role
runs a complete session with Bob.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import AmbiguousState, CustodyError, InvalidArgument, ProtocolAbort
from .state import (
    COMPUTATIONAL,
    BasisPair,
    RngStream,
    StateVector,
    apply,
    decode_exact,
    encode,
    fidelity,
    measure,
)
from .unitary import TransformSpec, Unitary2, dagger, make_rotation, realize


class StageTag(enum.Enum):
    STAGE1 = "stage1"  # alice -> bob
    STAGE2 = "stage2"  # bob -> alice
    STAGE3 = "stage3"  # alice -> bob
    SINGLE = "single"  # alice -> bob, single-stage protocol


class FlightQubit:
    """Single-use custody token for a qubit on the channel.

    The payload can be taken exactly once.  Copying or pickling the token
    is refused: an unknown state cannot be cloned.
    """

    __slots__ = ("_payload", "_consumed")

    def __init__(self, payload: StateVector):
        self._payload = payload
        self._consumed = False

    @property
    def consumed(self) -> bool:
        return self._consumed

    def take(self) -> StateVector:
        if self._consumed:
            raise CustodyError("flight qubit already taken")
        self._consumed = True
        payload, self._payload = self._payload, None
        return payload

    def __copy__(self):
        raise CustodyError("flight qubits cannot be copied")

    def __deepcopy__(self, memo):
        raise CustodyError("flight qubits cannot be copied")

    def __reduce_ex__(self, protocol):
        raise CustodyError("flight qubits cannot be serialized")

    def __repr__(self):
        return f"FlightQubit(consumed={self._consumed})"


@dataclass(frozen=True)
class Transit:
    """What a tap sees about one send, besides the qubit itself."""

    stage: StageTag
    sender: str
    receiver: str
    index: int
    rng: RngStream


class ChannelTap:
    """Passive tap: forwards every qubit untouched.

    Subclasses override :meth:`on_send`.  A tap that takes the payload
    must return a fresh :class:`FlightQubit`; returning a consumed token
    aborts the run.  :meth:`pop_guess` reports the bit the tap inferred
    during the run just finished, if any.
    """

    interposes = False

    def on_send(self, transit: Transit, qubit: FlightQubit) -> FlightQubit:
        return qubit

    def pop_guess(self) -> Optional[int]:
        return None


PASSIVE = ChannelTap()


class Interposer(ChannelTap):
    """A tap that terminates each side's session itself."""

    interposes = True

    def receiver_role(self, config: ThreeStage, rng: RngStream) -> Receiver:
        raise NotImplementedError

    def sender_role(self, config: ThreeStage, rng: RngStream) -> Sender:
        raise NotImplementedError


class Channel:
    def __init__(self, tap: ChannelTap, rng: RngStream):
        self.tap = tap
        self.rng = rng
        self.transcript: list[tuple[StageTag, str, str]] = []

    def transmit(self, stage: StageTag, sender: str, receiver: str, qubit: FlightQubit) -> FlightQubit:
        transit = Transit(stage, sender, receiver, len(self.transcript), self.rng)
        self.transcript.append((stage, sender, receiver))
        out = self.tap.on_send(transit, qubit)
        if not isinstance(out, FlightQubit):
            raise ProtocolAbort(f"tap returned {type(out).__name__} instead of a flight qubit at {stage.value}")
        if out.consumed:
            raise ProtocolAbort(f"custody violation at {stage.value}: tap forwarded an already-read qubit")
        return out


class Sender:
    """Originating party: prepares the message and later strips its own transform."""

    def __init__(self, name: str, u: Unitary2, message: StateVector):
        self.name = name
        self.u = u
        self.message = message

    def open(self) -> FlightQubit:
        return FlightQubit(apply(self.u, self.message))

    def close(self, q: FlightQubit) -> FlightQubit:
        return FlightQubit(apply(dagger(self.u), q.take()))


class Receiver:
    """Responding party: adds its transform, then removes it at the end."""

    def __init__(self, name: str, u: Unitary2):
        self.name = name
        self.u = u
        self.recovered: Optional[StateVector] = None

    def respond(self, q: FlightQubit) -> FlightQubit:
        return FlightQubit(apply(self.u, q.take()))

    def finish(self, q: FlightQubit) -> StateVector:
        self.recovered = apply(dagger(self.u), q.take())
        return self.recovered


def three_stage_session(sender: Sender, receiver: Receiver, channel: Channel) -> StateVector:
    q = channel.transmit(StageTag.STAGE1, sender.name, receiver.name, sender.open())
    q = channel.transmit(StageTag.STAGE2, receiver.name, sender.name, receiver.respond(q))
    q = channel.transmit(StageTag.STAGE3, sender.name, receiver.name, sender.close(q))
    return receiver.finish(q)


@dataclass(frozen=True)
class ThreeStage:
    alice: TransformSpec
    bob: TransformSpec
    basis: BasisPair = COMPUTATIONAL

    def __post_init__(self):
        # the form is public, so both parties use the same family
        if self.alice.form is not self.bob.form:
            raise InvalidArgument(
                f"alice and bob must share a transform form, got {self.alice.form.value} and {self.bob.form.value}"
            )


@dataclass(frozen=True)
class SingleStage:
    theta: float
    basis: BasisPair = COMPUTATIONAL

    def __post_init__(self):
        check_half_turn(self.theta)


ProtocolConfig = Union[ThreeStage, SingleStage]


def check_half_turn(theta: float) -> float:
    """Single-stage angles live in the upper half plane, ``[0, pi)``."""
    if not (math.isfinite(theta) and 0.0 <= theta < math.pi):
        raise InvalidArgument(f"single-stage angle must lie in [0, pi), got {theta!r}")
    return theta


@dataclass
class RunOutcome:
    """Result of one protocol run.

    ``bob_bit`` is None when Bob's state matched neither basis state
    (the run was corrupted); ``bob_reading`` is then the Born-rule outcome
    of measuring that state, otherwise it equals ``bob_bit``.
    """

    bob_bit: Optional[int]
    bob_reading: int
    fidelity_at_bob: float
    transcript: list[tuple[StageTag, str, str]] = field(default_factory=list)
    eve_bit: Optional[int] = None

    @property
    def ambiguous(self) -> bool:
        return self.bob_bit is None


def _readout(state: StateVector, basis: BasisPair, rng: RngStream) -> tuple[Optional[int], int]:
    try:
        b = decode_exact(state, basis)
        return b, b
    except AmbiguousState:
        return None, measure(state, basis, rng)


def _finish(state, bit, basis, channel, rng) -> RunOutcome:
    bob_bit, reading = _readout(state, basis, rng)
    return RunOutcome(
        bob_bit=bob_bit,
        bob_reading=reading,
        fidelity_at_bob=fidelity(encode(bit, basis), state),
        transcript=channel.transcript,
        eve_bit=channel.tap.pop_guess(),
    )


def three_stage_run(
    config: ThreeStage, bit: int, tap: ChannelTap = PASSIVE, rng: Optional[RngStream] = None
) -> RunOutcome:
    """One three-stage exchange of ``bit`` from Alice to Bob."""
    rng = rng if rng is not None else RngStream(0)
    channel = Channel(tap, rng)
    alice = Sender("alice", realize(config.alice), encode(bit, config.basis))
    bob = Receiver("bob", realize(config.bob))
    try:
        if tap.interposes:
            three_stage_session(alice, tap.receiver_role(config, rng), channel)
            state = three_stage_session(tap.sender_role(config, rng), bob, channel)
        else:
            state = three_stage_session(alice, bob, channel)
    except CustodyError as exc:
        raise ProtocolAbort(str(exc)) from exc
    return _finish(state, bit, config.basis, channel, rng)


def single_stage_transfer(
    alice_theta: float,
    bob_theta: float,
    bit: int,
    basis: BasisPair = COMPUTATIONAL,
    tap: ChannelTap = PASSIVE,
    rng: Optional[RngStream] = None,
) -> RunOutcome:
    """Single-stage send where each side holds its own copy of the angle.

    The copies differ only when the key schedule has desynchronized.
    """
    if tap.interposes:
        raise InvalidArgument("split-channel taps need the three-stage protocol")
    rng = rng if rng is not None else RngStream(0)
    channel = Channel(tap, rng)
    sent = FlightQubit(apply(make_rotation(alice_theta), encode(bit, basis)))
    try:
        q = channel.transmit(StageTag.SINGLE, "alice", "bob", sent)
        state = apply(dagger(make_rotation(bob_theta)), q.take())
    except CustodyError as exc:
        raise ProtocolAbort(str(exc)) from exc
    return _finish(state, bit, basis, channel, rng)


def single_stage_run(
    config: SingleStage, bit: int, tap: ChannelTap = PASSIVE, rng: Optional[RngStream] = None
) -> RunOutcome:
    """Alice sends ``U1(theta) X``; Bob, who shares ``theta``, applies ``U1(theta)^+``."""
    return single_stage_transfer(config.theta, config.theta, bit, config.basis, tap, rng)


def run_once(config: ProtocolConfig, bit: int, tap: ChannelTap, rng: RngStream) -> RunOutcome:
    if isinstance(config, ThreeStage):
        return three_stage_run(config, bit, tap, rng)
    if isinstance(config, SingleStage):
        return single_stage_run(config, bit, tap, rng)
    raise InvalidArgument(f"unknown protocol config {type(config).__name__}")


def run_sequence(
    config: ProtocolConfig, bits: Sequence[int], tap: ChannelTap = PASSIVE, rng: Optional[RngStream] = None
) -> list[RunOutcome]:
    """Run the protocol once per bit, sharing ``tap`` and ``rng`` across runs."""
    rng = rng if rng is not None else RngStream(0)
    outcomes = []
    for i, bit in enumerate(bits):
        try:
            outcomes.append(run_once(config, bit, tap, rng))
        except ProtocolAbort as exc:
            raise ProtocolAbort(str(exc), index=i) from exc
    return outcomes

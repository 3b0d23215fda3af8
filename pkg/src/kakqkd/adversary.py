"""Eavesdropper strategies as channel taps, plus an experiment driver.

Strategies are plain descriptors; :func:`make_tap` turns one into a fresh
tap for a given protocol config.  Taps keep per-run state (Eve's guesses,
her recovered states, a cursor into forged bit lists) and must not be
shared between concurrent runs.

Man-in-the-middle relays:

* ``Duplicate`` - Eve decodes Alice's bit and passes the same bit on.
* ``Forge``     - Eve decodes Alice's bit but passes on bits of her own.
* ``Block``     - Eve talks to Alice without decoding and passes on her own bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .errors import InvalidArgument
from .protocol import (
    ChannelTap,
    FlightQubit,
    Interposer,
    ProtocolConfig,
    Receiver,
    Sender,
    SingleStage,
    StageTag,
    ThreeStage,
    Transit,
    run_sequence,
)
from .state import (
    COMPUTATIONAL,
    BasisPair,
    RngStream,
    StateVector,
    apply,
    encode,
    measure,
)
from .unitary import Form, dagger, make_rotation, realize


@dataclass(frozen=True)
class Duplicate:
    pass


@dataclass(frozen=True)
class Forge:
    bits: tuple[int, ...]


@dataclass(frozen=True)
class Block:
    bits: tuple[int, ...]


Relay = Union[Duplicate, Forge, Block]


@dataclass(frozen=True)
class Passive:
    pass


@dataclass(frozen=True)
class CommuteClone:
    psi: float
    relay: Relay = Duplicate()


@dataclass(frozen=True)
class AngleGuess:
    psi: float


@dataclass(frozen=True)
class MeasureResend:
    basis: BasisPair = COMPUTATIONAL


EveStrategy = Union[Passive, CommuteClone, AngleGuess, MeasureResend]


class _EveReceiver(Receiver):
    def __init__(self, tap: CommuteCloneTap, u, basis: BasisPair, rng: RngStream):
        super().__init__("eve", u)
        self.tap = tap
        self.basis = basis
        self.rng = rng

    def finish(self, q: FlightQubit) -> StateVector:
        state = super().finish(q)
        self.tap.recovered.append(state)
        if not isinstance(self.tap.relay, Block):
            # the state may be corrupted, so Eve measures rather than decodes
            self.tap._guess = measure(state, self.basis, self.rng)
        return state


class CommuteCloneTap(Interposer):
    """Eve picks her own angle in Alice's public form and plays both ends."""

    def __init__(self, psi: float, form: Form, relay: Relay = Duplicate()):
        self.spec = form.spec(psi)
        self.relay = relay
        self.recovered: list[StateVector] = []
        self.guesses: list[Optional[int]] = []
        self.sent: list[int] = []
        self._guess: Optional[int] = None
        self._cursor = 0

    def receiver_role(self, config: ThreeStage, rng: RngStream) -> Receiver:
        if config.alice.form is not self.spec.form:
            raise InvalidArgument("commute-clone form must match alice's public form")
        self._guess = None
        return _EveReceiver(self, realize(self.spec), config.basis, rng)

    def sender_role(self, config: ThreeStage, rng: RngStream) -> Sender:
        relay = self.relay
        if isinstance(relay, Duplicate):
            # an undecodable run leaves nothing to duplicate; Eve sends 0
            bit = self._guess if self._guess is not None else 0
        else:
            if self._cursor >= len(relay.bits):
                raise InvalidArgument("relay ran out of bits")
            bit = relay.bits[self._cursor]
        self._cursor += 1
        self.sent.append(bit)
        return Sender("eve", realize(self.spec), encode(bit, config.basis))

    def pop_guess(self) -> Optional[int]:
        g, self._guess = self._guess, None
        self.guesses.append(g)
        return g


class AngleGuessTap(ChannelTap):
    """Single-stage intercept: undo a guessed rotation, measure, redo."""

    def __init__(self, psi: float, basis: BasisPair = COMPUTATIONAL):
        self.u = make_rotation(psi)
        self.basis = basis
        self.guesses: list[int] = []
        self._guess: Optional[int] = None

    def on_send(self, transit: Transit, qubit: FlightQubit) -> FlightQubit:
        if transit.stage is not StageTag.SINGLE:
            return qubit
        state = apply(dagger(self.u), qubit.take())
        bit = measure(state, self.basis, transit.rng)
        self._guess = bit
        self.guesses.append(bit)
        return FlightQubit(apply(self.u, encode(bit, self.basis)))

    def pop_guess(self) -> Optional[int]:
        g, self._guess = self._guess, None
        return g


class MeasureResendTap(ChannelTap):
    """Measure in a fixed basis and resend the observed basis state."""

    def __init__(self, basis: BasisPair = COMPUTATIONAL):
        self.basis = basis
        self._guess: Optional[int] = None

    def on_send(self, transit: Transit, qubit: FlightQubit) -> FlightQubit:
        if transit.stage is not StageTag.SINGLE:
            return qubit
        bit = measure(qubit.take(), self.basis, transit.rng)
        self._guess = bit
        return FlightQubit(encode(bit, self.basis))

    def pop_guess(self) -> Optional[int]:
        g, self._guess = self._guess, None
        return g


class SubstituteTap(ChannelTap):
    """Replace chosen single-stage sends with Eve's own qubits.

    ``bits_at`` maps a send position (counted over the tap's lifetime) to
    the bit Eve injects; she encodes it under her own angle ``psi``.
    """

    def __init__(self, bits_at: Mapping[int, int], psi: float, basis: BasisPair = COMPUTATIONAL):
        self.bits_at = dict(bits_at)
        self.u = make_rotation(psi)
        self.basis = basis
        self.position = 0

    def on_send(self, transit: Transit, qubit: FlightQubit) -> FlightQubit:
        if transit.stage is not StageTag.SINGLE:
            return qubit
        pos = self.position
        self.position += 1
        if pos not in self.bits_at:
            return qubit
        qubit.take()
        return FlightQubit(apply(self.u, encode(self.bits_at[pos], self.basis)))


def eve_commute_clone(psi: float, alice_form: Form, relay: Relay = Duplicate()) -> CommuteCloneTap:
    return CommuteCloneTap(psi, alice_form, relay)


def eve_angle_guess(psi: float, basis: BasisPair = COMPUTATIONAL) -> AngleGuessTap:
    return AngleGuessTap(psi, basis)


def eve_measure_resend(basis: BasisPair = COMPUTATIONAL) -> MeasureResendTap:
    return MeasureResendTap(basis)


def eve_substitute(bits_at: Mapping[int, int], psi: float, basis: BasisPair = COMPUTATIONAL) -> SubstituteTap:
    return SubstituteTap(bits_at, psi, basis)


def make_tap(strategy: EveStrategy, config: ProtocolConfig) -> ChannelTap:
    """Fresh tap for ``strategy``, checked against the protocol variant."""
    if isinstance(strategy, Passive):
        return ChannelTap()
    if isinstance(strategy, CommuteClone):
        if not isinstance(config, ThreeStage):
            raise InvalidArgument("commute-clone attacks target the three-stage protocol")
        return eve_commute_clone(strategy.psi, config.alice.form, strategy.relay)
    if isinstance(strategy, (AngleGuess, MeasureResend)):
        if not isinstance(config, SingleStage):
            raise InvalidArgument(f"{type(strategy).__name__} targets the single-stage protocol")
        if isinstance(strategy, AngleGuess):
            return eve_angle_guess(strategy.psi, config.basis)
        return eve_measure_resend(strategy.basis)
    raise InvalidArgument(f"unknown strategy {strategy!r}")


def intended_bits(strategy: EveStrategy, bits: Sequence[int]) -> Sequence[int]:
    """The bits Bob ends up holding if the strategy works as designed."""
    if isinstance(strategy, CommuteClone) and isinstance(strategy.relay, (Forge, Block)):
        relay_bits = strategy.relay.bits
        if len(relay_bits) < len(bits):
            raise InvalidArgument(f"relay has {len(relay_bits)} bits, need {len(bits)}")
        return relay_bits[: len(bits)]
    return bits


@dataclass
class AttackReport:
    """Per-experiment attack metrics; every rate lies in ``[0, 1]``.

    ``eve_success_rate`` is 0 with ``eve_guessed`` False when Eve never
    formed a guess (passive listener, blocking relay).
    """

    eve_bits: list[int]
    eve_success_rate: float
    bob_error_rate: float
    ambiguity_rate: float
    eve_guessed: bool
    bob_bits: list[int] = field(default_factory=list)


def _rate(count: int, total: int) -> float:
    return count / total if total else 0.0


def summarize(bits, intended, outcomes) -> AttackReport:
    eve_pairs = [(o.eve_bit, b) for o, b in zip(outcomes, bits) if o.eve_bit is not None]
    readings = [o.bob_reading for o in outcomes]
    return AttackReport(
        eve_bits=[e for e, _ in eve_pairs],
        eve_success_rate=_rate(sum(e == b for e, b in eve_pairs), len(eve_pairs)),
        bob_error_rate=_rate(sum(r != t for r, t in zip(readings, intended)), len(outcomes)),
        ambiguity_rate=_rate(sum(o.ambiguous for o in outcomes), len(outcomes)),
        eve_guessed=bool(eve_pairs),
        bob_bits=readings,
    )


def attack_experiment(
    config: ProtocolConfig, strategy: EveStrategy, bits: Sequence[int], rng: RngStream
) -> AttackReport:
    """Send ``bits`` under ``strategy`` and score Eve and Bob.

    Bob's errors are counted against the bits the strategy meant him to
    receive: Alice's for duplicate and passive, Eve's for forge and block.
    """
    tap = make_tap(strategy, config)
    intended = intended_bits(strategy, bits)
    outcomes = run_sequence(config, bits, tap, rng)
    return summarize(bits, intended, outcomes)

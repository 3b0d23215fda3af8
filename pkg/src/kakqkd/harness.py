"""Seeded Monte Carlo experiments: configuration, execution and output.

Each trial gets its own :class:`RngStream` seeded by
:func:`derive_trial_seed`, so trials are independent of one another and of
how many worker threads run them.  Results are folded in trial order.

CSV output has one row per trial followed by ``mean``, ``min`` and ``max``
rows, with the columns in :data:`CSV_COLUMNS`.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

from .adversary import (
    AngleGuess,
    Block,
    CommuteClone,
    Duplicate,
    Forge,
    MeasureResend,
    Passive,
    attack_experiment,
    make_tap,
    summarize,
)
from .errors import ConfigError, InvalidArgument, ProtocolAbort
from .keyschedule import Frame, FrameConfig, stream_run
from .protocol import SingleStage, ThreeStage
from .state import RngStream, make_basis
from .unitary import TAU, Form

PROTOCOLS = ("three-stage", "three-stage-complex", "single-stage")
FORMS = tuple(f.value for f in Form)
EVES = ("none", "clone-duplicate", "clone-forge", "clone-block", "angle-guess", "measure-resend")
OUTPUTS = ("json", "csv")

_CLONES = ("clone-duplicate", "clone-forge", "clone-block")
_SINGLE_STAGE_EVES = ("angle-guess", "measure-resend")

RATES = ("eve_success_rate", "bob_error_rate", "ambiguity_rate", "key_error_rate")
CSV_COLUMNS = (
    "record",
    "trial",
    "seed",
    "theta",
    "phi",
    "psi",
    "qubits",
    "eve_guessed",
    "desynced",
) + RATES

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    alice_form: str = "rotation"
    theta: Optional[float] = None
    phi: Optional[float] = None
    psi: Optional[float] = None
    eve: str = "none"
    trials: int = 100
    bits: int = 128
    frame: Optional[FrameConfig] = None
    alpha: float = 1.0
    beta: float = 0.0
    seed: int = 0
    output: str = "json"
    # execution detail only; never part of the echoed config
    threads: int = field(default=1, compare=False)

    def echo(self) -> dict:
        d = asdict(self)
        del d["threads"]
        return d


# ---------------------------------------------------------------- parsing


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


def _seed(text: str) -> int:
    try:
        n = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= n <= _MASK64:
        raise argparse.ArgumentTypeError(f"must fit in 64 unsigned bits: {text!r}")
    return n


def _flag(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _choice(options):
    def convert(text: str) -> str:
        if text not in options:
            raise argparse.ArgumentTypeError(f"{text!r} is not one of {', '.join(options)}")
        return text

    return convert


# key -> converter; flags are "--" + key, file keys are the bare key
OPTIONS = {
    "protocol": _choice(PROTOCOLS),
    "alice-form": _choice(FORMS),
    "theta": _finite,
    "phi": _finite,
    "psi": _finite,
    "eve": _choice(EVES),
    "trials": _positive,
    "bits": _positive,
    "l": _positive,
    "k": _positive,
    "rekey": _flag,
    "alpha": _finite,
    "beta": _finite,
    "seed": _seed,
    "output": _choice(OUTPUTS),
    "threads": _positive,
}


_HELP = {
    "protocol": ("{" + "|".join(PROTOCOLS) + "}", "protocol variant (required)"),
    "alice-form": ("{" + "|".join(FORMS) + "}", "public transform form, default rotation"),
    "theta": ("R", "alice's angle; drawn per trial when omitted"),
    "phi": ("R", "bob's angle, three-stage only; drawn per trial when omitted"),
    "psi": ("R", "eve's angle for clone and angle-guess attacks"),
    "eve": ("{" + "|".join(EVES) + "}", "eavesdropper strategy, default none"),
    "trials": ("N", "number of trials, default 100"),
    "bits": ("N", "bits per trial, default 128"),
    "l": ("N", "data qubits per frame (implies --rekey), default 64"),
    "k": ("N", "key-update qubits per frame (implies --rekey), default 4"),
    "alpha": ("R", "measurement basis x0 = (alpha, beta), default 1"),
    "beta": ("R", "see --alpha, default 0"),
    "seed": ("U64", "master seed, default 0"),
    "output": ("{json|csv}", "output format, default json"),
    "threads": ("N", "worker threads; never changes the output"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        m = re.search(r"argument (--[\w-]+)", message)
        raise ConfigError(m.group(1)[2:] if m else "arguments", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="kakqkd",
        description="Monte Carlo simulator for unitary-transform QKD under eavesdropping.",
        allow_abbrev=False,
    )
    p.add_argument("--config", metavar="PATH", help="key=value file; flags override its values")
    for key, convert in OPTIONS.items():
        if key == "rekey":
            p.add_argument("--rekey", action="store_const", const=True, default=None,
                           help="frame single-stage traffic and rotate the key every frame")
            continue
        metavar, text = _HELP[key]
        p.add_argument(f"--{key}", type=convert, default=None, dest=key.replace("-", "_"), metavar=metavar, help=text)
    return p


def load_config_file(path: str) -> dict:
    """Read flat ``key=value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError("config", f"line {lineno}: expected key=value")
        if key not in OPTIONS:
            raise ConfigError(key, f"unknown key (line {lineno})")
        try:
            values[key.replace("-", "_")] = OPTIONS[key](value.strip())
        except argparse.ArgumentTypeError as exc:
            raise ConfigError(key, str(exc)) from None
    return values


def parse_config(argv_or_text: Union[Sequence[str], str]) -> ExperimentConfig:
    """Build a validated config from command-line arguments.

    A string is split shell-style first.  Values from ``--config PATH`` are
    applied before the flags, so flags win.
    """
    argv = shlex.split(argv_or_text) if isinstance(argv_or_text, str) else list(argv_or_text)
    ns = vars(build_parser().parse_args(argv))
    path = ns.pop("config")
    values = load_config_file(path) if path else {}
    values.update({k: v for k, v in ns.items() if v is not None})
    return _build(values)


def _build(v: dict) -> ExperimentConfig:
    protocol = v.get("protocol")
    if protocol is None:
        raise ConfigError("protocol", "required (one of " + ", ".join(PROTOCOLS) + ")")
    eve = v.get("eve", "none")
    form = v.get("alice_form")

    if protocol == "single-stage":
        if form not in (None, "rotation"):
            raise ConfigError("alice-form", "single-stage uses rotations only")
        form = "rotation"
        theta = v.get("theta")
        if theta is not None and not 0.0 <= theta < math.pi:
            raise ConfigError("theta", f"single-stage angle must lie in [0, pi), got {theta!r}")
        if "phi" in v:
            raise ConfigError("phi", "single-stage has no receiver angle")
        if eve in _CLONES:
            raise ConfigError("eve", f"{eve} targets the three-stage protocol")
    else:
        if protocol == "three-stage-complex":
            if form not in (None, "phase-pair"):
                raise ConfigError("alice-form", "three-stage-complex uses the phase-pair form")
            form = "phase-pair"
        elif form is None:
            form = "rotation"
        if eve in _SINGLE_STAGE_EVES:
            raise ConfigError("eve", f"{eve} targets the single-stage protocol")
        for key in ("l", "k", "rekey"):
            if key in v:
                raise ConfigError(key, "key-schedule framing applies to single-stage only")

    if "psi" in v and eve not in _CLONES + ("angle-guess",):
        raise ConfigError("psi", f"eve strategy {eve!r} takes no angle")

    frame = None
    if v.get("rekey") or "l" in v or "k" in v:
        try:
            frame = FrameConfig(v.get("l", 64), v.get("k", 4))
        except InvalidArgument as exc:
            raise ConfigError("k", str(exc)) from None

    alpha, beta = v.get("alpha", 1.0), v.get("beta", 0.0)
    try:
        make_basis(alpha, beta)
    except InvalidArgument as exc:
        raise ConfigError("alpha", str(exc)) from None

    return ExperimentConfig(
        protocol=protocol,
        alice_form=form,
        theta=v.get("theta"),
        phi=v.get("phi"),
        psi=v.get("psi"),
        eve=eve,
        trials=v.get("trials", 100),
        bits=v.get("bits", 128),
        frame=frame,
        alpha=alpha,
        beta=beta,
        seed=v.get("seed", 0),
        output=v.get("output", "json"),
        threads=v.get("threads", 1),
    )


def config_to_argv(config: ExperimentConfig) -> list[str]:
    """Flags that :func:`parse_config` maps back to ``config``."""
    argv = ["--protocol", config.protocol]
    if config.protocol == "three-stage":
        argv += ["--alice-form", config.alice_form]
    for key in ("theta", "phi", "psi"):
        value = getattr(config, key)
        if value is not None:
            argv += [f"--{key}", repr(value)]
    argv += ["--eve", config.eve, "--trials", str(config.trials), "--bits", str(config.bits)]
    if config.frame is not None:
        argv += ["--rekey", "--l", str(config.frame.l), "--k", str(config.frame.k)]
    argv += [
        "--alpha", repr(config.alpha),
        "--beta", repr(config.beta),
        "--seed", str(config.seed),
        "--output", config.output,
        "--threads", str(config.threads),
    ]
    return argv


# ---------------------------------------------------------------- execution


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """SplitMix64 output for ``master_seed + (trial_index + 1) * golden_gamma``.

    The increment is odd and the finalizer is a bijection on 64-bit words,
    so distinct trial indices below 2**64 never share a seed.
    """
    z = (master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    theta: float
    phi: Optional[float]
    psi: Optional[float]
    qubits: int
    eve_guessed: bool
    desynced: bool
    eve_success_rate: float
    bob_error_rate: float
    ambiguity_rate: float
    key_error_rate: float


def _strategy(config: ExperimentConfig, psi, bits, rng: RngStream, basis):
    eve = config.eve
    if eve == "none":
        return Passive()
    if eve == "clone-duplicate":
        return CommuteClone(psi, Duplicate())
    if eve == "clone-forge":
        return CommuteClone(psi, Forge(tuple(1 - b for b in bits)))
    if eve == "clone-block":
        return CommuteClone(psi, Block(tuple(rng.bits(len(bits)))))
    if eve == "angle-guess":
        return AngleGuess(psi)
    return MeasureResend(basis)


def run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    seed = derive_trial_seed(config.seed, index)
    rng = RngStream(seed)
    basis = make_basis(config.alpha, config.beta)
    wants_psi = config.eve in _CLONES + ("angle-guess",)

    def angle(given, hi):
        return given if given is not None else rng.uniform(0.0, hi)

    phi = None
    if config.protocol == "single-stage":
        theta = angle(config.theta, math.pi)
        psi = angle(config.psi, math.pi) if wants_psi else None
        proto = SingleStage(theta, basis)
    else:
        theta = angle(config.theta, TAU)
        phi = angle(config.phi, TAU)
        psi = angle(config.psi, TAU) if wants_psi else None
        form = Form(config.alice_form)
        proto = ThreeStage(form.spec(theta), form.spec(phi), basis)

    try:
        if config.frame is None:
            bits = rng.bits(config.bits)
            strategy = _strategy(config, psi, bits, rng, basis)
            report = attack_experiment(proto, strategy, bits, rng)
            qubits, key_error_rate, desynced = len(bits), 0.0, False
        else:
            fc = config.frame
            n_frames = -(-config.bits // fc.l)
            frames = [Frame(tuple(rng.bits(fc.l)), tuple(rng.bits(fc.k))) for _ in range(n_frames)]
            strategy = _strategy(config, psi, (), rng, basis)
            stream = stream_run(fc, theta, frames, make_tap(strategy, proto), rng, basis)
            data_bits = [b for f in frames for b in f.data_bits]
            outcomes = [o for f in stream.frames for o in f.data]
            report = summarize(data_bits, data_bits, outcomes)
            qubits = n_frames * (fc.l + fc.k)
            key_error_rate = stream.key_errors / (n_frames * fc.k)
            desynced = stream.desync
    except ProtocolAbort as exc:
        raise ProtocolAbort(f"trial {index}: {exc}") from exc

    return TrialRecord(
        trial=index,
        seed=seed,
        theta=theta,
        phi=phi,
        psi=psi,
        qubits=qubits,
        eve_guessed=report.eve_guessed,
        desynced=desynced,
        eve_success_rate=report.eve_success_rate,
        bob_error_rate=report.bob_error_rate,
        ambiguity_rate=report.ambiguity_rate,
        key_error_rate=key_error_rate,
    )


@dataclass
class SummaryStats:
    config: dict
    master_seed: int
    records: list[TrialRecord] = field(default_factory=list)

    def aggregate(self, name: str) -> dict:
        values = [getattr(r, name) for r in self.records]
        if not values:
            return {"mean": 0.0, "min": 0.0, "max": 0.0}
        return {"mean": math.fsum(values) / len(values), "min": min(values), "max": max(values)}

    @property
    def desync_count(self) -> int:
        return sum(r.desynced for r in self.records)

    @property
    def total_qubits(self) -> int:
        return sum(r.qubits for r in self.records)

    def summary(self) -> dict:
        out = {name: self.aggregate(name) for name in RATES}
        out.update(
            desync_count=self.desync_count,
            total_qubits=self.total_qubits,
            trials=len(self.records),
            eve_guessed=any(r.eve_guessed for r in self.records),
        )
        return out


def run_experiment(config: ExperimentConfig, threads: Optional[int] = None) -> SummaryStats:
    """Run every trial and fold the records in trial order."""
    workers = threads if threads is not None else config.threads
    indices = range(config.trials)
    if workers <= 1:
        records = [run_trial(config, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda i: run_trial(config, i), indices))
    return SummaryStats(config=config.echo(), master_seed=config.seed, records=records)


# ---------------------------------------------------------------- output


def format_float(x: float) -> str:
    """17 significant digits, always readable back as a float."""
    s = format(x, ".17g")
    if not any(c in s for c in ".eninf"):
        s += ".0"
    return s


def _to_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot encode {obj!r} as JSON")
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(str(k))}:{_to_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_to_json(x) for x in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format_float(x)
    return str(x)


def emit(stats: SummaryStats, fmt: str = "json") -> bytes:
    if fmt == "json":
        doc = {
            "config": stats.config,
            "master_seed": stats.master_seed,
            "summary": stats.summary(),
            "trials": [asdict(r) for r in stats.records],
        }
        return (_to_json(doc) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in stats.records:
            row = asdict(r)
            w.writerow(["trial"] + [_cell(row[c]) for c in CSV_COLUMNS[1:]])
        for stat in ("mean", "min", "max"):
            aggs = {name: stats.aggregate(name)[stat] for name in RATES}
            w.writerow([stat] + [""] * (len(CSV_COLUMNS) - 1 - len(RATES)) + [_cell(aggs[n]) for n in RATES])
        return buf.getvalue().encode("utf-8")
    raise InvalidArgument(f"unknown output format {fmt!r}")

"""Simulation toolkit for unitary-transform quantum key distribution.

Covers the three-stage protocol with rotation, reflection and complex
phase-pair transforms, the single-stage protocol with a rotating key,
man-in-the-middle and intercept taps, and a seeded experiment harness.
"""

from .errors import (
    AmbiguousState,
    ConfigError,
    CustodyError,
    InvalidArgument,
    KakQKDError,
    ProtocolAbort,
)
from .kernels import BACKEND
from .unitary import (
    IDENTITY,
    Form,
    PhasePair,
    Reflection,
    Rotation,
    TransformSpec,
    Unitary2,
    commutes,
    commutes_analytic,
    dagger,
    is_unitary,
    make_phase_pair,
    make_reflection,
    make_rotation,
    multiply,
    realize,
)
from .state import (
    COMPUTATIONAL,
    BasisPair,
    RngStream,
    StateVector,
    apply,
    decode_exact,
    encode,
    fidelity,
    make_basis,
    measure,
)
from .protocol import (
    ChannelTap,
    FlightQubit,
    RunOutcome,
    SingleStage,
    StageTag,
    ThreeStage,
    run_sequence,
    single_stage_run,
    three_stage_run,
)
from .adversary import (
    AngleGuess,
    AttackReport,
    Block,
    CommuteClone,
    Duplicate,
    Forge,
    MeasureResend,
    Passive,
    attack_experiment,
    eve_angle_guess,
    eve_commute_clone,
    eve_measure_resend,
    eve_substitute,
)
from .keyschedule import Frame, FrameConfig, decode_index, stream_run, theta_from_index
from .harness import ExperimentConfig, derive_trial_seed, emit, parse_config, run_experiment

__version__ = "0.1.0"

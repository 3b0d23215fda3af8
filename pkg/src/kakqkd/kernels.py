"""Backend selection for the 2x2 kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module stands in.  Setting ``KAKQKD_PURE_PYTHON=1``
forces the fallback.  Both backends return bit-identical results.
"""

import os

if os.environ.get("KAKQKD_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as impl
else:
    try:
        from . import _ckernels as impl
    except ImportError:
        from . import _pykernels as impl

BACKEND = impl.BACKEND

ROTATION = impl.ROTATION
REFLECTION = impl.REFLECTION
PHASE_PAIR = impl.PHASE_PAIR

rotation = impl.rotation
reflection = impl.reflection
phase_pair = impl.phase_pair
family = impl.family
matmul = impl.matmul
dagger = impl.dagger
matvec = impl.matvec
inner = impl.inner
fidelity = impl.fidelity
norm_sq = impl.norm_sq
unitarity_error = impl.unitarity_error
commutator_error = impl.commutator_error
unitarity_sweep = impl.unitarity_sweep
commutator_sweep = impl.commutator_sweep
single_stage_fidelities = impl.single_stage_fidelities


def available_backends():
    """Kernel modules importable in this environment, compiled first."""
    from . import _pykernels

    mods = []
    try:
        from . import _ckernels

        mods.append(_ckernels)
    except ImportError:
        pass
    mods.append(_pykernels)
    return mods

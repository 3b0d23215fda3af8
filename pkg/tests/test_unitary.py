import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from kakqkd import kernels
from kakqkd.errors import InvalidArgument
from kakqkd.unitary import (
    IDENTITY,
    TAU,
    Form,
    PhasePair,
    Reflection,
    Rotation,
    TransformSpec,
    Unitary2,
    canonical_angle,
    commutator_bound,
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

S = 1 / math.sqrt(2)
angles = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
SPECS = (Rotation, Reflection, PhasePair)


def close(u, rows, tol=1e-12):
    return np.max(np.abs(oracles.as_array(u) - np.array(rows, dtype=complex))) <= tol


# -- angles


@pytest.mark.parametrize("x,expected", [(0.0, 0.0), (TAU, 0.0), (-math.pi, math.pi), (3 * TAU + 1.0, 1.0)])
def test_canonical_angle(x, expected):
    assert canonical_angle(x) == pytest.approx(expected, abs=1e-12)


@given(angles)
def test_canonical_angle_range(x):
    r = canonical_angle(x)
    assert 0.0 <= r < TAU
    assert math.isclose(math.cos(r), math.cos(x), abs_tol=1e-12)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
@pytest.mark.parametrize("ctor", [make_rotation, make_reflection, make_phase_pair, Rotation])
def test_non_finite_angle_rejected(ctor, bad):
    with pytest.raises(InvalidArgument):
        ctor(bad)


def test_bare_transform_spec_is_abstract():
    with pytest.raises(TypeError):
        TransformSpec(0.1)


# -- constructors


def test_rotation_examples():
    assert close(make_rotation(0.0), [[1, 0], [0, 1]])
    assert close(make_rotation(math.pi / 2), [[0, -1], [1, 0]])


def test_reflection_examples():
    assert close(make_reflection(0.0), [[1, 0], [0, -1]])
    assert close(make_reflection(math.pi), [[-1, 0], [0, 1]])


def test_phase_pair_examples():
    assert close(make_phase_pair(0.0), [[S, S], [1j * S, -1j * S]])
    assert close(make_phase_pair(math.pi), [[-S, -S], [-1j * S, 1j * S]])


def test_realize_dispatch():
    assert close(realize(Rotation(0.0)), [[1, 0], [0, 1]])
    assert close(realize(Reflection(0.0)), [[1, 0], [0, -1]])
    assert close(realize(PhasePair(0.0)), [[S, S], [1j * S, -1j * S]])
    for form in Form:
        assert form.spec(0.4).form is form


@given(angles)
def test_constructors_unitary_and_determinants(t):
    for make in (make_rotation, make_reflection, make_phase_pair):
        assert is_unitary(make(t))
    assert make_rotation(t).det == pytest.approx(1.0, abs=1e-12)
    assert make_reflection(t).det == pytest.approx(-1.0, abs=1e-12)
    assert abs(make_phase_pair(t).det) == pytest.approx(1.0, abs=1e-12)


@given(angles)
def test_reflection_is_involution(t):
    assert multiply(make_reflection(t), make_reflection(t)).allclose(IDENTITY)


def test_is_unitary_examples():
    assert is_unitary(IDENTITY)
    assert not is_unitary(Unitary2(1, 0, 0, 2))
    grid = np.linspace(0, TAU, 1000, endpoint=False)
    for make in (make_rotation, make_reflection, make_phase_pair):
        assert all(is_unitary(make(float(t))) for t in grid)
    with pytest.raises(InvalidArgument):
        is_unitary(IDENTITY, tol=0.0)


# -- products


def test_multiply_examples():
    assert multiply(make_rotation(0.3), make_rotation(0.4)).allclose(make_rotation(0.7))
    u = make_phase_pair(1.3)
    assert multiply(IDENTITY, u).allclose(u)
    assert close(multiply(make_rotation(math.pi / 2), make_reflection(0.0)), [[0, 1], [1, 0]])
    assert close(multiply(make_reflection(0.0), make_rotation(math.pi / 2)), [[0, -1], [-1, 0]])


@given(angles, angles)
def test_rotation_composition(t, p):
    assert multiply(make_rotation(t), make_rotation(p)).allclose(make_rotation(canonical_angle(t + p)))


@given(angles, angles)
def test_reflection_rotation_interchange(t, p):
    assert multiply(make_rotation(t), make_reflection(p)).allclose(make_reflection(t + p))
    assert multiply(make_reflection(p), make_rotation(t)).allclose(make_reflection(p - t))


@given(angles, angles)
def test_two_reflections_give_rotation(t, p):
    # correct product is U1(t - p); diagonal is cos(t - p), not cos(t + p)
    assert multiply(make_reflection(t), make_reflection(p)).allclose(make_rotation(t - p))


def test_dagger_examples():
    assert dagger(IDENTITY) == IDENTITY
    assert dagger(make_rotation(1.1)).allclose(make_rotation(-1.1))
    rng = np.random.default_rng(3)
    for _ in range(100):
        spec = SPECS[rng.integers(3)](float(rng.uniform(0, TAU)))
        u = realize(spec)
        assert dagger(dagger(u)) == u
        assert multiply(dagger(u), u).allclose(IDENTITY)


# -- commutation


def test_commutes_examples():
    assert commutes(make_rotation(0.3), make_rotation(1.2))
    u = make_phase_pair(2.2)
    assert commutes(u, u)
    # contrary to the "any angles" reading, distinct reflections do not commute
    assert not commutes(make_reflection(0.5), make_reflection(1.2))


def test_commutes_analytic_examples():
    assert commutes_analytic(Rotation(0.7), Rotation(2.9))
    assert commutes_analytic(PhasePair(0.7), PhasePair(0.7 + math.pi))
    assert commutes_analytic(PhasePair(0.7), PhasePair(0.7))
    assert not commutes_analytic(PhasePair(0.3), PhasePair(1.0))
    assert not commutes_analytic(Reflection(0.5), Reflection(1.2))
    assert commutes_analytic(Reflection(0.5), Reflection(0.5 + math.pi))
    assert commutes_analytic(Rotation(math.pi), Reflection(1.0))
    assert not commutes_analytic(Rotation(1.0), Reflection(0.0))
    # U2(pi/2) = X commutes with P(3pi/4)
    assert commutes_analytic(Reflection(math.pi / 2), PhasePair(3 * math.pi / 4))
    assert commutes(make_reflection(math.pi / 2), make_phase_pair(3 * math.pi / 4))


def test_commutator_bound_matches_numpy_oracle():
    rng = np.random.default_rng(99)
    for _ in range(3000):
        a = SPECS[rng.integers(3)](float(rng.uniform(0, TAU)))
        b = SPECS[rng.integers(3)](float(rng.uniform(0, TAU)))
        A = oracles.FAMILY[a.form.value](a.theta)
        B = oracles.FAMILY[b.form.value](b.theta)
        assert commutator_bound(a, b) == pytest.approx(oracles.commutator_error(A, B), abs=1e-12)
        assert commutator_bound(a, b) == pytest.approx(commutator_bound(b, a), abs=1e-15)


structured = st.one_of(angles, st.integers(-16, 16).map(lambda n: n * math.pi / 8))


@settings(max_examples=500)
@given(st.sampled_from(SPECS), structured, st.sampled_from(SPECS), structured)
def test_three_stage_identity_when_commuting(ca, t, cb, p):
    a, b = ca(t), cb(p)
    A, B = realize(a), realize(b)
    if commutes_analytic(a, b):
        # A^+ B A - B = A^+ (BA - AB): the residual is bounded by the commutator,
        # so pairs inside the (1e-10, 1e-9] commutation band get that bound instead
        tol = max(1e-10, commutator_bound(a, b) + 1e-15)
        assert multiply(dagger(A), multiply(B, A)).allclose(B, tol)


def test_three_stage_identity_exact_commuting_pairs():
    for t in np.linspace(0, TAU, 37):
        for p in np.linspace(0, TAU, 37):
            pairs = [(Rotation(t), Rotation(p)), (Reflection(t), Reflection(t + math.pi)), (PhasePair(t), PhasePair(t + math.pi))]
            for a, b in pairs:
                A, B = realize(a), realize(b)
                assert commutes_analytic(a, b)
                assert multiply(dagger(A), multiply(B, A)).allclose(B, 1e-10)


def test_analytic_predicate_uses_brute_force_agreement_kernel_sweep():
    rng = np.random.default_rng(4)
    ta = rng.uniform(0, TAU, 500).tolist()
    tb = rng.uniform(0, TAU, 500).tolist()
    errs = kernels.commutator_sweep(2, ta, 2, tb)
    for e, s, t in zip(errs, ta, tb):
        assert e == pytest.approx(abs(math.sin(t - s)), abs=1e-12)

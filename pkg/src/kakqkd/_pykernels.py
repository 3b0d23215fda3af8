"""Pure-Python 2x2 complex kernels.

Reference implementation for the compiled ``_ckernels`` module.  Every
function spells out real/imaginary arithmetic in the same order as the
Cython source so both backends produce bit-identical floats.

Matrices are 4-tuples ``(w, x, y, z)`` in row-major order; vectors are
2-tuples ``(a0, a1)``.
"""

from math import cos, sin, sqrt

BACKEND = "python"

_S = 1.0 / sqrt(2.0)

ROTATION = 0
REFLECTION = 1
PHASE_PAIR = 2


def rotation(theta):
    c = cos(theta)
    s = sin(theta)
    return (complex(c, 0.0), complex(-s, 0.0), complex(s, 0.0), complex(c, 0.0))


def reflection(theta):
    c = cos(theta)
    s = sin(theta)
    return (complex(c, 0.0), complex(s, 0.0), complex(s, 0.0), complex(-c, 0.0))


def phase_pair(theta):
    c = _S * cos(theta)
    s = _S * sin(theta)
    # e^{it}/sqrt2, e^{-it}/sqrt2, i e^{it}/sqrt2, -i e^{-it}/sqrt2
    return (complex(c, s), complex(c, -s), complex(-s, c), complex(-s, -c))


def family(kind, theta):
    if kind == ROTATION:
        return rotation(theta)
    if kind == REFLECTION:
        return reflection(theta)
    if kind == PHASE_PAIR:
        return phase_pair(theta)
    raise ValueError(f"unknown transform family {kind!r}")


def _mul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def matmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    r = []
    for p, q, u, v in ((a0, a1, b0, b2), (a0, a1, b1, b3), (a2, a3, b0, b2), (a2, a3, b1, b3)):
        xr, xi = _mul(p.real, p.imag, u.real, u.imag)
        yr, yi = _mul(q.real, q.imag, v.real, v.imag)
        r.append(complex(xr + yr, xi + yi))
    return tuple(r)


def dagger(a):
    a0, a1, a2, a3 = a
    return (a0.conjugate(), a2.conjugate(), a1.conjugate(), a3.conjugate())


def matvec(a, v):
    a0, a1, a2, a3 = a
    v0, v1 = v
    xr, xi = _mul(a0.real, a0.imag, v0.real, v0.imag)
    yr, yi = _mul(a1.real, a1.imag, v1.real, v1.imag)
    r0 = complex(xr + yr, xi + yi)
    xr, xi = _mul(a2.real, a2.imag, v0.real, v0.imag)
    yr, yi = _mul(a3.real, a3.imag, v1.real, v1.imag)
    return (r0, complex(xr + yr, xi + yi))


def inner(u, v):
    """<u|v>, conjugating the left argument."""
    u0, u1 = u
    v0, v1 = v
    xr, xi = _mul(u0.real, -u0.imag, v0.real, v0.imag)
    yr, yi = _mul(u1.real, -u1.imag, v1.real, v1.imag)
    return complex(xr + yr, xi + yi)


def fidelity(u, v):
    z = inner(u, v)
    return z.real * z.real + z.imag * z.imag


def norm_sq(v):
    v0, v1 = v
    return (v0.real * v0.real + v0.imag * v0.imag) + (v1.real * v1.real + v1.imag * v1.imag)


def unitarity_error(a):
    """max |(U^dagger U - I)_ij|."""
    g = matmul(dagger(a), a)
    return max(abs(g[0] - 1.0), abs(g[1]), abs(g[2]), abs(g[3] - 1.0))


def commutator_error(a, b):
    """max |(AB - BA)_ij|."""
    ab = matmul(a, b)
    ba = matmul(b, a)
    return max(abs(ab[0] - ba[0]), abs(ab[1] - ba[1]), abs(ab[2] - ba[2]), abs(ab[3] - ba[3]))


def unitarity_sweep(kind, thetas):
    worst = 0.0
    for t in thetas:
        e = unitarity_error(family(kind, t))
        if e > worst:
            worst = e
    return worst


def commutator_sweep(kind_a, thetas_a, kind_b, thetas_b):
    if len(thetas_a) != len(thetas_b):
        raise ValueError("angle sequences differ in length")
    return [
        commutator_error(family(kind_a, s), family(kind_b, t))
        for s, t in zip(thetas_a, thetas_b)
    ]


def single_stage_fidelities(theta_a, theta_b, state):
    """Fidelity of U1(theta_b)^dagger U1(theta_a) |state> with |state>, per angle pair."""
    out = []
    for ta, tb in zip(theta_a, theta_b):
        w = matvec(dagger(rotation(tb)), matvec(rotation(ta), state))
        out.append(fidelity(state, w))
    return out

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled 2x2 complex kernels.

Same surface and same floating-point operation order as ``_pykernels``;
built with ``-ffp-contract=off`` (no fused multiply-adds) and without the
sin/cos builtins, which GCC would otherwise merge into ``sincos``.
"""

from libc.math cimport cos, sin, sqrt, hypot

BACKEND = "cython"

ROTATION = 0
REFLECTION = 1
PHASE_PAIR = 2

cdef double _S = 1.0 / sqrt(2.0)


cdef struct m2:
    double r0, i0, r1, i1, r2, i2, r3, i3


cdef struct v2:
    double r0, i0, r1, i1


cdef inline m2 _unpack(object a) except *:
    cdef m2 m
    cdef complex c0, c1, c2, c3
    c0, c1, c2, c3 = a
    m.r0 = c0.real; m.i0 = c0.imag
    m.r1 = c1.real; m.i1 = c1.imag
    m.r2 = c2.real; m.i2 = c2.imag
    m.r3 = c3.real; m.i3 = c3.imag
    return m


cdef inline v2 _unpackv(object v) except *:
    cdef v2 out
    cdef complex c0, c1
    c0, c1 = v
    out.r0 = c0.real; out.i0 = c0.imag
    out.r1 = c1.real; out.i1 = c1.imag
    return out


cdef inline tuple _pack(m2 m):
    return (complex(m.r0, m.i0), complex(m.r1, m.i1), complex(m.r2, m.i2), complex(m.r3, m.i3))


cdef inline m2 _rotation(double theta) nogil:
    cdef m2 m
    cdef double c = cos(theta)
    cdef double s = sin(theta)
    m.r0 = c; m.i0 = 0.0
    m.r1 = -s; m.i1 = 0.0
    m.r2 = s; m.i2 = 0.0
    m.r3 = c; m.i3 = 0.0
    return m


cdef inline m2 _reflection(double theta) nogil:
    cdef m2 m
    cdef double c = cos(theta)
    cdef double s = sin(theta)
    m.r0 = c; m.i0 = 0.0
    m.r1 = s; m.i1 = 0.0
    m.r2 = s; m.i2 = 0.0
    m.r3 = -c; m.i3 = 0.0
    return m


cdef inline m2 _phase_pair(double theta) nogil:
    cdef m2 m
    cdef double c = _S * cos(theta)
    cdef double s = _S * sin(theta)
    m.r0 = c; m.i0 = s
    m.r1 = c; m.i1 = -s
    m.r2 = -s; m.i2 = c
    m.r3 = -s; m.i3 = -c
    return m


cdef inline m2 _family(int kind, double theta) except *:
    if kind == ROTATION:
        return _rotation(theta)
    if kind == REFLECTION:
        return _reflection(theta)
    if kind == PHASE_PAIR:
        return _phase_pair(theta)
    raise ValueError(f"unknown transform family {kind!r}")


cdef inline m2 _matmul(m2 a, m2 b) nogil:
    cdef m2 r
    cdef double xr, xi, yr, yi
    # (0,0): a0 b0 + a1 b2
    xr = a.r0 * b.r0 - a.i0 * b.i0; xi = a.r0 * b.i0 + a.i0 * b.r0
    yr = a.r1 * b.r2 - a.i1 * b.i2; yi = a.r1 * b.i2 + a.i1 * b.r2
    r.r0 = xr + yr; r.i0 = xi + yi
    # (0,1): a0 b1 + a1 b3
    xr = a.r0 * b.r1 - a.i0 * b.i1; xi = a.r0 * b.i1 + a.i0 * b.r1
    yr = a.r1 * b.r3 - a.i1 * b.i3; yi = a.r1 * b.i3 + a.i1 * b.r3
    r.r1 = xr + yr; r.i1 = xi + yi
    # (1,0): a2 b0 + a3 b2
    xr = a.r2 * b.r0 - a.i2 * b.i0; xi = a.r2 * b.i0 + a.i2 * b.r0
    yr = a.r3 * b.r2 - a.i3 * b.i2; yi = a.r3 * b.i2 + a.i3 * b.r2
    r.r2 = xr + yr; r.i2 = xi + yi
    # (1,1): a2 b1 + a3 b3
    xr = a.r2 * b.r1 - a.i2 * b.i1; xi = a.r2 * b.i1 + a.i2 * b.r1
    yr = a.r3 * b.r3 - a.i3 * b.i3; yi = a.r3 * b.i3 + a.i3 * b.r3
    r.r3 = xr + yr; r.i3 = xi + yi
    return r


cdef inline m2 _dagger(m2 a) nogil:
    cdef m2 r
    r.r0 = a.r0; r.i0 = -a.i0
    r.r1 = a.r2; r.i1 = -a.i2
    r.r2 = a.r1; r.i2 = -a.i1
    r.r3 = a.r3; r.i3 = -a.i3
    return r


cdef inline v2 _matvec(m2 a, v2 v) nogil:
    cdef v2 r
    cdef double xr, xi, yr, yi
    xr = a.r0 * v.r0 - a.i0 * v.i0; xi = a.r0 * v.i0 + a.i0 * v.r0
    yr = a.r1 * v.r1 - a.i1 * v.i1; yi = a.r1 * v.i1 + a.i1 * v.r1
    r.r0 = xr + yr; r.i0 = xi + yi
    xr = a.r2 * v.r0 - a.i2 * v.i0; xi = a.r2 * v.i0 + a.i2 * v.r0
    yr = a.r3 * v.r1 - a.i3 * v.i1; yi = a.r3 * v.i1 + a.i3 * v.r1
    r.r1 = xr + yr; r.i1 = xi + yi
    return r


cdef inline double _fidelity(v2 u, v2 v) nogil:
    cdef double xr, xi, yr, yi, zr, zi
    xr = u.r0 * v.r0 - (-u.i0) * v.i0; xi = u.r0 * v.i0 + (-u.i0) * v.r0
    yr = u.r1 * v.r1 - (-u.i1) * v.i1; yi = u.r1 * v.i1 + (-u.i1) * v.r1
    zr = xr + yr; zi = xi + yi
    return zr * zr + zi * zi


cdef inline double _max4(double a, double b, double c, double d) nogil:
    cdef double m = a
    if b > m:
        m = b
    if c > m:
        m = c
    if d > m:
        m = d
    return m


cdef inline double _unitarity_error(m2 a) nogil:
    cdef m2 g = _matmul(_dagger(a), a)
    return _max4(hypot(g.r0 - 1.0, g.i0), hypot(g.r1, g.i1),
                 hypot(g.r2, g.i2), hypot(g.r3 - 1.0, g.i3))


cdef inline double _commutator_error(m2 a, m2 b) nogil:
    cdef m2 ab = _matmul(a, b)
    cdef m2 ba = _matmul(b, a)
    return _max4(hypot(ab.r0 - ba.r0, ab.i0 - ba.i0), hypot(ab.r1 - ba.r1, ab.i1 - ba.i1),
                 hypot(ab.r2 - ba.r2, ab.i2 - ba.i2), hypot(ab.r3 - ba.r3, ab.i3 - ba.i3))


def rotation(double theta):
    return _pack(_rotation(theta))


def reflection(double theta):
    return _pack(_reflection(theta))


def phase_pair(double theta):
    return _pack(_phase_pair(theta))


def family(int kind, double theta):
    return _pack(_family(kind, theta))


def matmul(a, b):
    return _pack(_matmul(_unpack(a), _unpack(b)))


def dagger(a):
    return _pack(_dagger(_unpack(a)))


def matvec(a, v):
    cdef v2 r = _matvec(_unpack(a), _unpackv(v))
    return (complex(r.r0, r.i0), complex(r.r1, r.i1))


def inner(u, v):
    """<u|v>, conjugating the left argument."""
    cdef v2 a = _unpackv(u)
    cdef v2 b = _unpackv(v)
    cdef double xr, xi, yr, yi
    xr = a.r0 * b.r0 - (-a.i0) * b.i0; xi = a.r0 * b.i0 + (-a.i0) * b.r0
    yr = a.r1 * b.r1 - (-a.i1) * b.i1; yi = a.r1 * b.i1 + (-a.i1) * b.r1
    return complex(xr + yr, xi + yi)


def fidelity(u, v):
    return _fidelity(_unpackv(u), _unpackv(v))


def norm_sq(v):
    cdef v2 a = _unpackv(v)
    return (a.r0 * a.r0 + a.i0 * a.i0) + (a.r1 * a.r1 + a.i1 * a.i1)


def unitarity_error(a):
    """max |(U^dagger U - I)_ij|."""
    return _unitarity_error(_unpack(a))


def commutator_error(a, b):
    """max |(AB - BA)_ij|."""
    return _commutator_error(_unpack(a), _unpack(b))


def unitarity_sweep(int kind, thetas):
    if kind < 0 or kind > 2:
        raise ValueError(f"unknown transform family {kind!r}")
    cdef double worst = 0.0
    cdef double e
    cdef double t
    for t in thetas:
        e = _unitarity_error(_family(kind, t))
        if e > worst:
            worst = e
    return worst


def commutator_sweep(int kind_a, thetas_a, int kind_b, thetas_b):
    if len(thetas_a) != len(thetas_b):
        raise ValueError("angle sequences differ in length")
    cdef list out = []
    cdef double s, t
    for s, t in zip(thetas_a, thetas_b):
        out.append(_commutator_error(_family(kind_a, s), _family(kind_b, t)))
    return out


def single_stage_fidelities(theta_a, theta_b, state):
    """Fidelity of U1(theta_b)^dagger U1(theta_a) |state> with |state>, per angle pair."""
    cdef v2 x = _unpackv(state)
    cdef list out = []
    cdef double ta, tb
    for ta, tb in zip(theta_a, theta_b):
        out.append(_fidelity(x, _matvec(_dagger(_rotation(tb)), _matvec(_rotation(ta), x))))
    return out

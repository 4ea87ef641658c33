"""Vectorised complex double-double arithmetic.

A value is a pair ``(hi, lo)`` of complex128 arrays with ``|lo| <= ulp(hi)/2``
componentwise.  Only the handful of operations needed by the alternating
power series in :mod:`supershift.specfun` are provided.
"""
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _add_real(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _mul_real(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


def _div_real(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = _mul_real(q1, 0.0 * q1, bh, bl)
    rh, rl = _add_real(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _mul_real(q2, 0.0 * q2, bh, bl)
    rh, rl = _add_real(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = _quick_two_sum(q1, q2)
    return _add_real(q1, q2, q3, 0.0 * q3)


def _parts(x):
    hi, lo = x
    return np.real(hi), np.imag(hi), np.real(lo), np.imag(lo)


def _pack(rh, rl, ih, il):
    return rh + 1j * ih, rl + 1j * il


def from_complex(z):
    z = np.asarray(z, dtype=complex)
    return z, np.zeros_like(z)


def to_complex(x):
    return x[0] + x[1]


def add(x, y):
    xr, xi, xrl, xil = _parts(x)
    yr, yi, yrl, yil = _parts(y)
    rh, rl = _add_real(xr, xrl, yr, yrl)
    ih, il = _add_real(xi, xil, yi, yil)
    return _pack(rh, rl, ih, il)


def mul(x, y):
    xr, xi, xrl, xil = _parts(x)
    yr, yi, yrl, yil = _parts(y)
    ah, al = _mul_real(xr, xrl, yr, yrl)
    bh, bl = _mul_real(xi, xil, yi, yil)
    ch, cl = _mul_real(xr, xrl, yi, yil)
    dh, dl = _mul_real(xi, xil, yr, yrl)
    rh, rl = _add_real(ah, al, -bh, -bl)
    ih, il = _add_real(ch, cl, dh, dl)
    return _pack(rh, rl, ih, il)


def div(x, y):
    """x / y with y a complex double-double."""
    yr, yi, yrl, yil = _parts(y)
    conj = _pack(yr, yrl, -yi, -yil)
    num = mul(x, conj)
    ah, al = _mul_real(yr, yrl, yr, yrl)
    bh, bl = _mul_real(yi, yil, yi, yil)
    dh, dl = _add_real(ah, al, bh, bl)
    nr, ni, nrl, nil = _parts(num)
    rh, rl = _div_real(nr, nrl, dh, dl)
    ih, il = _div_real(ni, nil, dh, dl)
    return _pack(rh, rl, ih, il)


def square_exact(z):
    """z*z for a plain complex array, returned as double-double."""
    z = np.asarray(z, dtype=complex)
    a, b = z.real, z.imag
    ah, al = _two_prod(a, a)
    bh, bl = _two_prod(b, b)
    rh, rl = _add_real(ah, al, -bh, -bl)
    ch, cl = _two_prod(a, b)
    return _pack(rh, rl, 2.0 * ch, 2.0 * cl)


def scale(x, s):
    """Multiply by an exactly representable real power of two."""
    return x[0] * s, x[1] * s


def horner(coeffs, u):
    """Evaluate sum_k coeffs[k] * u**k; coeffs and u are double-doubles.

    ``coeffs`` is a list of scalar double-doubles; ``u`` an array one.
    """
    acc = (np.broadcast_to(coeffs[-1][0], u[0].shape).astype(complex),
           np.broadcast_to(coeffs[-1][1], u[0].shape).astype(complex))
    for c in reversed(coeffs[:-1]):
        acc = add(mul(acc, u), (np.broadcast_to(c[0], u[0].shape), np.broadcast_to(c[1], u[0].shape)))
    return acc

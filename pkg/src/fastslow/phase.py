"""Accurate evaluation of sin/cos of k*phi/epsilon for small epsilon.

The oscillatory terms of the model are functions of k*phi/epsilon with
k in {1, 2, 4}.  Forming t = k*phi/epsilon in double precision and calling
math.sin(t) loses absolute accuracy once t is large: the rounding error of
the division alone is t*2^-53, which for t ~ 1e6 is already ~1e-10.  The
helpers here keep the reduced phase accurate to ~2e-15 absolute by carrying
the division residual separately (a two-product) and reducing the high part
with a Cody-Waite scheme whose 2*pi is stored in 33-bit pieces, so the
products quotient*piece are exact for quotients below 2^20 (below 2^40
after splitting the quotient itself).
"""

from __future__ import annotations

import math

import numpy as np

# Pieces of 2*pi with 33 significant bits each: q*piece is exact for
# integer q < 2^20.  The four pieces sum to 2*pi with residual ~3e-48.
_TWO_PI_1 = 4.0 * float.fromhex("0x1.921fb544p+0")
_TWO_PI_2 = 4.0 * float.fromhex("0x1.0b4611a6p-34")
_TWO_PI_3 = 4.0 * float.fromhex("0x1.3198a2ep-69")
_TWO_PI_3T = 4.0 * float.fromhex("0x1.b839a252049c1p-104")
_INV_TWO_PI = 0.15915494309189535

_Q_SMALL = 1 << 20
_Q_LARGE = 1 << 40

_TAU_HI_LD = np.longdouble("6.283185307179586476925286766559005768394")
_TAU_LO_LD = np.longdouble("-1.003311522533666404711465e-19")
_INV_TAU_LD = np.longdouble(1.0) / (_TAU_HI_LD + _TAU_LO_LD)

_HAS_FMA = hasattr(math, "fma")
# 2^27 + 1, Dekker splitting constant for 53-bit doubles
_SPLIT = 134217729.0
# 2^32 + 1, Dekker splitting constant for 64-bit extended mantissas
_SPLIT_LD = np.longdouble(4294967297.0)


def _two_product(a: float, b: float) -> tuple[float, float]:
    """Return (hi, lo) with hi = fl(a*b) and hi + lo = a*b exactly."""
    hi = a * b
    if _HAS_FMA:
        return hi, math.fma(a, b, -hi)
    ah = _SPLIT * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLIT * b
    bh = bh - (bh - b)
    bl = b - bh
    lo = ((ah * bh - hi) + ah * bl + al * bh) + al * bl
    return hi, lo


def _reduce_core(t_hi: float, t_lo: float) -> float:
    q = round(t_hi * _INV_TWO_PI)
    aq = abs(q)
    if aq < _Q_SMALL:
        r = t_hi - q * _TWO_PI_1
        r -= q * _TWO_PI_2
        r += t_lo
        r -= q * _TWO_PI_3
        r -= q * _TWO_PI_3T
        return r
    if aq < _Q_LARGE:
        # split the quotient so every product keeps <= 53 significant bits
        q_hi = (q >> 20) << 20
        q_lo = q - q_hi
        r = t_hi - q_hi * _TWO_PI_1
        r -= q_lo * _TWO_PI_1
        r -= q_hi * _TWO_PI_2
        r -= q_lo * _TWO_PI_2
        r += t_lo
        r -= q * _TWO_PI_3
        r -= q * _TWO_PI_3T
        return r
    # absurdly large quotient: extended precision, accuracy degrades to
    # ~q*1e-20 which is still ~1e-8 at q ~ 1e12
    t = np.longdouble(t_hi) + np.longdouble(t_lo)
    qq = np.rint(t * _INV_TAU_LD)
    return float((t - qq * _TAU_HI_LD) - qq * _TAU_LO_LD)


def reduce_phase(phi: float, epsilon: float, k: int = 2) -> float:
    """Return k*phi/epsilon reduced modulo 2*pi into roughly [-pi, pi].

    Absolute accuracy ~2e-15 for reduction quotients below 2^40.
    """
    a = k * phi  # exact for k in {1, 2, 4}: power-of-two scaling
    t_hi = a / epsilon
    # exact division residual via a two-product, so that
    # t_hi + t_lo = a/epsilon to ~2^-106 relative
    p, pl = _two_product(t_hi, epsilon)
    t_lo = ((a - p) - pl) / epsilon
    return _reduce_core(t_hi, t_lo)


def reduced_sincos(phi: float, epsilon: float, k: int = 2) -> tuple[float, float]:
    """sin and cos of k*phi/epsilon via accurate phase reduction."""
    r = reduce_phase(phi, epsilon, k)
    return math.sin(r), math.cos(r)


def reduced_sincos_array(phi, epsilon: float, k: int = 2):
    """Vectorized sin/cos of k*phi/epsilon.

    Extended-precision mirror of the scalar path: division residual via a
    Dekker two-product on 64-bit mantissas, then Cody-Waite with the same
    33-bit pieces (products exact for quotients below 2^31).
    """
    a = np.asarray(phi, dtype=np.longdouble) * k
    eps = np.longdouble(epsilon)
    t_hi = a / eps
    p = t_hi * eps
    ah = _SPLIT_LD * t_hi
    ah = ah - (ah - t_hi)
    al = t_hi - ah
    bh = _SPLIT_LD * eps
    bh = bh - (bh - eps)
    bl = eps - bh
    pl = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    t_lo = ((a - p) - pl) / eps
    q = np.rint(t_hi * np.longdouble(_INV_TWO_PI))
    r = t_hi - q * np.longdouble(_TWO_PI_1)
    r -= q * np.longdouble(_TWO_PI_2)
    r += t_lo
    r -= q * np.longdouble(_TWO_PI_3)
    r -= q * np.longdouble(_TWO_PI_3T)
    r64 = r.astype(np.float64)
    return np.sin(r64), np.cos(r64)


def double_angle(s, c):
    """(sin, cos) of the doubled angle from (sin, cos) of the angle."""
    return 2.0 * s * c, 1.0 - 2.0 * s * s

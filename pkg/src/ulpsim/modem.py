"""QPSK mapping, AWGN, and the precoded transmit/receive chain."""

from __future__ import annotations

import numpy as np

from .channel import ChannelMatrix
from .errors import ShapeError
from .precoder import Precoder
from .randomness import complex_normal

_SQRT2 = np.sqrt(2.0)


def qpsk_modulate(bits) -> np.ndarray:
    """Gray-map bit pairs to unit-energy QPSK symbols.

    Pair (b0, b1) -> ((1-2*b0) + 1j*(1-2*b1)) / sqrt(2); b0 is the in-phase
    bit, so (0,0) lands on (+1+1j)/sqrt(2).
    """
    b = np.asarray(bits)
    if b.ndim != 1 or b.size % 2 != 0:
        raise ShapeError(f"bit block must be 1-D with even length, got shape {b.shape}")
    b0 = b[0::2].astype(np.float64)
    b1 = b[1::2].astype(np.float64)
    return ((1.0 - 2.0 * b0) + 1j * (1.0 - 2.0 * b1)) / _SQRT2


def qpsk_demodulate(symbols) -> np.ndarray:
    """Minimum-distance decisions: sign of real/imaginary part per bit.

    Exact zero decides bit 0 (the positive half-plane).
    """
    s = np.asarray(symbols, dtype=np.complex128).ravel()
    bits = np.empty(2 * s.size, dtype=np.int64)
    bits[0::2] = s.real < 0
    bits[1::2] = s.imag < 0
    return bits


def draw_awgn(rng: np.random.Generator, n: int, n0: float) -> np.ndarray:
    """i.i.d. CN(0, N0) noise vector."""
    return complex_normal(rng, n, n0)


def transmit_receive(
    channel: ChannelMatrix, precoder: Precoder, symbols: np.ndarray, noise: np.ndarray
) -> np.ndarray:
    """Run y = H F_data x + z and undo the power scaling at the receiver.

    symbols may be a vector (one channel use) or an (n_active, n_uses)
    matrix; noise must match its shape.
    """
    x = np.asarray(symbols, dtype=np.complex128)
    z = np.asarray(noise, dtype=np.complex128)
    f_data = precoder.data_block()
    if x.shape[0] != f_data.shape[1]:
        raise ShapeError(
            f"symbol vector has {x.shape[0]} streams but precoder expects {f_data.shape[1]}"
        )
    if z.shape != x.shape:
        raise ShapeError(f"noise shape {z.shape} does not match symbols {x.shape}")
    # Gain control applied termwise so the noise contribution is exactly
    # additive: est(x, z) == est(x, 0) + z/beta.
    return (channel.H @ (f_data @ x)) / precoder.beta + z / precoder.beta

"""Scalar helpers shared by the float64 and mpmath code paths.

Everything here uses plain arithmetic operators so it works unchanged on
Python floats/complex and on mpmath numbers.
"""

from __future__ import annotations

from typing import Sequence


def falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1); 1 when k == 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def horner(coeffs: Sequence, s):
    """sum_i coeffs[i] s^i."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def laurent_derivative(weights: Sequence, low: int, s, order: int = 0):
    """order-th derivative of sum_i weights[i] s^(low + i), evaluated at s."""
    if order == 0:
        return horner(weights, s) * s**low
    coeffs = [w * falling(low + i, order) for i, w in enumerate(weights)]
    return horner(coeffs, s) * s ** (low - order)


def poly_derivative(coeffs: Sequence, s, order: int = 0):
    """order-th derivative of sum_i coeffs[i] s^i at s."""
    if order == 0:
        return horner(coeffs, s)
    if order >= len(coeffs):
        return 0 * s
    shifted = [c * falling(i, order) for i, c in enumerate(coeffs)][order:]
    return horner(shifted, s)


def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out

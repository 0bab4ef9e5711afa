"""Analytic step responses through partial-fraction expansion.

Poles come from the exact-then-polished root extractor; the inverse
transform is assembled symbolically as exponential/polynomial modes, so a
transfer function that is exactly zero produces an exactly zero response,
which is what makes decoupling claims crisply testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .polyrat import Poly, RatFunc, poly_roots
from .tfm import TransferMatrix

MAX_POLE_ORDER = 3


class PartialFraction(NamedTuple):
    pole: complex
    order: int
    coeff: complex


def _cpoly(p: Poly) -> list[complex]:
    return [complex(c) for c in p.coeffs]


def _cdeflate(coeffs: list[complex], root: complex) -> list[complex]:
    """Synthetic division by (s - root); the remainder is discarded."""
    out = [0j] * (len(coeffs) - 1)
    acc = 0j
    for k in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[k] + acc * root
        out[k - 1] = acc
    return out


def _cder(coeffs: list[complex]) -> list[complex]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _ceval(coeffs: list[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def partial_fractions(f: RatFunc, tol: float = 1e-10) -> list[PartialFraction]:
    """Expand a strictly proper rational function over its poles.

    Repeated poles are handled with the derivative formula up to order
    three; anything deeper is rejected.  Each pole of multiplicity m yields
    m terms coeff/(s - pole)^k for k = 1..m.
    """
    if f.is_zero:
        return []
    if not f.is_strictly_proper:
        raise ValueError("partial fractions need a strictly proper function")
    roots = poly_roots(f.den, tol)
    if max(roots.multiplicities) > MAX_POLE_ORDER:
        raise ValueError(
            f"pole order {max(roots.multiplicities)} exceeds the supported "
            f"maximum {MAX_POLE_ORDER}")
    num_c = _cpoly(f.num)
    den_c = _cpoly(f.den)
    out = []
    for pole, order in roots:
        # q = den / (s - pole)^order, so g = num/q is analytic at the pole
        # and the expansion coefficients are Taylor terms of g.
        q = den_c
        for _ in range(order):
            q = _cdeflate(q, pole)
        gv = [_taylor_term(num_c, q, pole, j) for j in range(order)]
        for k in range(1, order + 1):
            out.append(PartialFraction(pole=pole, order=k,
                                       coeff=gv[order - k]))
    # Drop numerically vanished terms (exactly cancelled lower orders of a
    # repeated pole show up as eps-sized coefficients).
    scale = max(abs(t.coeff) for t in out)
    return [t for t in out if abs(t.coeff) > 1e-12 * scale]


def _taylor_term(num: list[complex], den: list[complex], z: complex,
                 j: int) -> complex:
    """j-th Taylor coefficient of num/den at z (j <= 2)."""
    nv = _ceval(num, z)
    dv = _ceval(den, z)
    if j == 0:
        return nv / dv
    dnum = _cder(num)
    dden = _cder(den)
    n1 = _ceval(dnum, z)
    d1 = _ceval(dden, z)
    g0 = nv / dv
    g1 = (n1 - g0 * d1) / dv
    if j == 1:
        return g1
    n2 = _ceval(_cder(dnum), z)
    d2 = _ceval(_cder(dden), z)
    g2 = (n2 - 2.0 * g1 * d1 - g0 * d2) / dv
    return g2 / 2.0


@dataclass(frozen=True)
class TimeResponse:
    """Sampled outputs: values[i, k] is output i at times[k]."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape[-1] != self.times.shape[0]:
            raise ValueError("value columns must match the time grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite response samples")

    def output(self, i: int) -> np.ndarray:
        return self.values[i]


def _mode_sum(terms, t: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(t), dtype=complex)
    for pole, order, coeff in terms:
        base = np.exp(pole * t)
        acc += coeff * t ** (order - 1) / math.factorial(order - 1) * base
    return acc.real


def step_response(t_matrix: TransferMatrix, channel_in: int,
                  t_grid, pole_tol: float = 1e-9) -> TimeResponse:
    """Unit-step response of every output for one input channel.

    Requires the driven entries to be certifiably stable (all poles strictly
    left of -pole_tol); marginal or unstable entries are rejected.  The step
    itself contributes the constant mode through the pole at the origin.
    """
    if not 0 <= channel_in < t_matrix.cols:
        raise ValueError("input channel out of range")
    times = np.asarray([float(t) for t in t_grid], dtype=float)
    if times.ndim != 1 or len(times) == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be non-empty and ascending")
    if np.any(times < 0):
        raise ValueError("time grid must be nonnegative")
    outputs = []
    integrator = RatFunc(Poly.one(), Poly.s())
    for i in range(t_matrix.rows):
        entry = t_matrix.entries[i][channel_in]
        if entry.is_zero:
            outputs.append(np.zeros(len(times)))
            continue
        if not entry.is_proper:
            raise ValueError(f"entry ({i}, {channel_in}) is improper")
        if entry.den.degree >= 1:
            poles = poly_roots(entry.den, 1e-10)
            if not poles.all_left_of(-pole_tol):
                raise ValueError(
                    f"entry ({i}, {channel_in}) has a pole with real part "
                    f">= {-pole_tol:g}; step response undefined")
        stepped = entry * integrator
        terms = partial_fractions(stepped)
        outputs.append(_mode_sum(terms, times))
    return TimeResponse(times=times, values=np.vstack(outputs))

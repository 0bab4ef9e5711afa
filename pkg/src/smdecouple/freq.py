"""Frequency responses, maximum singular values, and performance bounds.

The user-facing unit is Hz (plots and CLI); all algebra runs in rad/s with
the conversion w = 2*pi*f made exactly once, at the grid boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polymat import PolyMatrix, unimodular_inverse
from .polyrat import ConvergenceError, RatFunc
from .stability import check_rh_inf
from .tfm import TransferMatrix

TWO_PI = 2.0 * math.pi


class PoleOnGridError(ValueError):
    """A grid point coincides with a pole of the evaluated matrix."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly positive, strictly ascending angular frequencies (rad/s)."""

    points: tuple[float, ...]
    hz_input: bool = False

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty frequency grid")
        if self.points[0] <= 0.0:
            raise ValueError("grid frequencies must be strictly positive")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid frequencies must be strictly ascending")

    @classmethod
    def log_hz(cls, min_hz: float, max_hz: float,
               points_per_decade: int = 100) -> "FrequencyGrid":
        """Log-spaced grid given in Hz, converted to rad/s internally."""
        if min_hz <= 0 or max_hz <= min_hz:
            raise ValueError("need 0 < min_hz < max_hz")
        if points_per_decade < 2:
            raise ValueError("points_per_decade must be at least 2")
        decades = math.log10(max_hz / min_hz)
        count = max(2, int(round(decades * points_per_decade)) + 1)
        freqs = np.logspace(math.log10(min_hz), math.log10(max_hz), count)
        return cls(tuple(TWO_PI * f for f in freqs), hz_input=True)

    @classmethod
    def from_rad(cls, points) -> "FrequencyGrid":
        return cls(tuple(float(w) for w in points), hz_input=False)

    @property
    def hz(self) -> tuple[float, ...]:
        return tuple(w / TWO_PI for w in self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class SigmaCurve:
    """Largest singular value per grid point."""

    grid: FrequencyGrid
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.grid):
            raise ValueError("curve length does not match grid")

    @property
    def peak(self) -> float:
        return max(self.values)

    @property
    def peak_hz(self) -> float:
        return self.grid.hz[self.values.index(self.peak)]


def _entry_value(entry, s: complex) -> complex:
    try:
        return complex(entry(s))
    except ZeroDivisionError as exc:
        raise PoleOnGridError(
            f"grid point s = {s} hits a pole: {exc}") from exc


def freq_response(matrix, grid: FrequencyGrid) -> list[np.ndarray]:
    """Entrywise evaluation at s = jw for every grid point.

    Accepts a TransferMatrix or a PolyMatrix; raises PoleOnGridError naming
    the offending point when a grid frequency sits on a pole.
    """
    if not isinstance(matrix, (PolyMatrix, TransferMatrix)):
        raise TypeError("freq_response expects a TransferMatrix or PolyMatrix")
    out = []
    for w in grid:
        s = 1j * w
        values = np.empty((matrix.rows, matrix.cols), dtype=complex)
        for i in range(matrix.rows):
            for j in range(matrix.cols):
                values[i, j] = _entry_value(matrix.entries[i][j], s)
        out.append(values)
    return out


def max_singular_value(a, tol: float = 1e-12, max_sweeps: int = 60) -> float:
    """Largest singular value via cyclic Jacobi on the Hermitian Gram matrix.

    Each rotation diagonalizes one 2x2 Hermitian block exactly (closed-form
    eigenbasis), so the off-diagonal mass decays quadratically; sweeps stop
    once it falls below tol relative to the Frobenius norm.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError("need a 2-D matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if min(m.shape) == 0:
        return 0.0
    # The Gram matrix of the transpose has the same nonzero spectrum; use
    # the smaller one.
    if m.shape[0] < m.shape[1]:
        m = m.conj().T
    g = m.conj().T @ m
    n = g.shape[0]
    if n == 1:
        return math.sqrt(max(g[0, 0].real, 0.0))
    norm = np.linalg.norm(g)
    if norm == 0.0:
        return 0.0
    for _ in range(max_sweeps):
        off = math.sqrt(sum(abs(g[i, j]) ** 2
                            for i in range(n) for j in range(n) if i != j))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = g[p, q]
                if abs(b) <= 1e-300:
                    continue
                ap = g[p, p].real
                dq = g[q, q].real
                half = 0.5 * (ap - dq)
                radius = math.hypot(half, abs(b))
                # lam_plus - ap, rationalized when ap dominates so that tiny
                # off-diagonal entries still produce an accurate rotation.
                if half >= 0.0:
                    v2 = abs(b) ** 2 / (half + radius) if radius > 0.0 else 0.0
                else:
                    v2 = -half + radius
                v1 = b
                nv = math.hypot(abs(v1), v2)
                if nv == 0.0:
                    continue
                v1 /= nv
                v2 /= nv
                col_p = g[:, p] * v1 + g[:, q] * v2
                col_q = -g[:, p] * v2 + g[:, q] * np.conj(v1)
                g[:, p] = col_p
                g[:, q] = col_q
                row_p = np.conj(v1) * g[p, :] + v2 * g[q, :]
                row_q = -v2 * g[p, :] + v1 * g[q, :]
                g[p, :] = row_p
                g[q, :] = row_q
                g[p, q] = 0.0
                g[q, p] = 0.0
                g[p, p] = g[p, p].real
                g[q, q] = g[q, q].real
    else:
        raise ConvergenceError(
            f"Jacobi sweeps did not converge within {max_sweeps} iterations")
    return math.sqrt(max(float(np.max(np.diag(g).real)), 0.0))


def sigma_curve(matrix, grid: FrequencyGrid, tol: float = 1e-12) -> SigmaCurve:
    """Largest singular value of the frequency response across the grid."""
    values = tuple(max_singular_value(m, tol) for m in freq_response(matrix, grid))
    return SigmaCurve(grid=grid, values=values)


@dataclass(frozen=True)
class HinfEstimate:
    """Grid-based estimate of sup-over-frequency of the largest singular value.

    semantics is "hinf-estimate" when the matrix was certified proper and
    stable (so the grid supremum with local refinement approximates a true
    norm) and "grid-supremum" otherwise, in which case the number is only
    the maximum over the inspected frequencies.
    """

    value: float
    peak_hz: float
    semantics: str

    def to_json(self) -> dict:
        return {"value": self.value, "peak_hz": self.peak_hz,
                "semantics": self.semantics}


def hinf_norm_estimate(matrix: TransferMatrix, grid: FrequencyGrid,
                       pole_tol: float = 1e-9) -> HinfEstimate:
    """Peak singular value over the grid, refined around the argmax.

    Three bisection passes shrink the bracket around the coarse peak; the
    result is labeled a norm estimate only if the matrix is proper and
    stable, otherwise it is reported as a plain grid supremum.
    """
    report = check_rh_inf(matrix, pole_tol)
    stable = report.is_internally_stable
    curve = sigma_curve(matrix, grid)
    values = list(curve.values)
    idx = values.index(max(values))
    points = list(grid.points)
    lo = points[idx - 1] if idx > 0 else points[idx]
    hi = points[idx + 1] if idx + 1 < len(points) else points[idx]
    best_w, best = points[idx], values[idx]

    def sigma_at(w: float) -> float:
        s = 1j * w
        vals = np.array([[_entry_value(matrix.entries[i][j], s)
                          for j in range(matrix.cols)]
                         for i in range(matrix.rows)])
        return max_singular_value(vals)

    for _ in range(3):
        for w in (math.sqrt(lo * best_w), math.sqrt(best_w * hi)):
            v = sigma_at(w)
            if v > best:
                best, best_w = v, w
        lo = math.sqrt(lo * best_w)
        hi = math.sqrt(best_w * hi)
    return HinfEstimate(value=best, peak_hz=best_w / TWO_PI,
                        semantics="hinf-estimate" if stable else "grid-supremum")


@dataclass(frozen=True)
class PerformanceReport:
    """Pointwise weighted sensitivity check against magnitude one.

    The verdict is grid-pointwise by construction: it says nothing about
    frequencies between grid points, and the report says so explicitly.
    """

    passed: bool
    curve: SigmaCurve
    worst_value: float
    worst_hz: float
    semantics: str = "grid-pointwise"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "semantics": self.semantics,
            "worst_value": self.worst_value,
            "worst_hz": self.worst_hz,
            "freq_hz": list(self.curve.grid.hz),
            "weighted_sigma": list(self.curve.values),
        }


def performance_check_original(sens: TransferMatrix, weight: RatFunc,
                               grid: FrequencyGrid,
                               sigma_tol: float = 1e-12) -> PerformanceReport:
    """Check sigma_max(w1(jw) * S(jw)) <= 1 at every grid point.

    The caller is responsible for certifying the loop stable first; this
    routine only evaluates the requirement curve.
    """
    responses = freq_response(sens, grid)
    values = []
    for w, m in zip(grid, responses):
        wv = abs(_entry_value(weight, 1j * w))
        values.append(wv * max_singular_value(m, sigma_tol))
    curve = SigmaCurve(grid=grid, values=tuple(values))
    worst = max(values)
    worst_hz = grid.hz[values.index(worst)]
    return PerformanceReport(passed=worst <= 1.0, curve=curve,
                             worst_value=worst, worst_hz=worst_hz)


@dataclass(frozen=True)
class BoundCheckReport:
    """Sufficient-condition check in the diagonal domain.

    Soundness only: passed=True implies the original-domain requirement
    holds on the grid; passed=False is inconclusive because the bound is
    conservative by construction.
    """

    passed: bool
    lhs: SigmaCurve
    rhs: SigmaCurve
    worst_margin: float
    worst_hz: float
    semantics: str = "grid-pointwise-sufficient"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "semantics": self.semantics,
            "worst_margin": self.worst_margin,
            "worst_hz": self.worst_hz,
            "freq_hz": list(self.lhs.grid.hz),
            "sigma_diag_domain": list(self.lhs.values),
            "bound": list(self.rhs.values),
        }


def essential_bound_check(ssm: TransferMatrix, weight: RatFunc, u: PolyMatrix,
                          grid: FrequencyGrid,
                          sigma_tol: float = 1e-12) -> BoundCheckReport:
    """Compare sigma_max of the diagonal-domain sensitivity to the bound

        1 / (sigma_max(w1) * sigma_max(U^-1) * sigma_max(U))

    per frequency.  A zero weight makes the bound infinite (automatic pass
    at that point).
    """
    uinv = unimodular_inverse(u)
    lhs_vals = []
    rhs_vals = []
    u_resp = freq_response(u, grid)
    uinv_resp = freq_response(uinv, grid)
    ssm_resp = freq_response(ssm, grid)
    for w, su, sui, sm in zip(grid, u_resp, uinv_resp, ssm_resp):
        wv = abs(_entry_value(weight, 1j * w))
        lhs_vals.append(max_singular_value(sm, sigma_tol))
        if wv == 0.0:
            rhs_vals.append(math.inf)
        else:
            rhs_vals.append(1.0 / (wv * max_singular_value(sui, sigma_tol)
                                   * max_singular_value(su, sigma_tol)))
    lhs = SigmaCurve(grid=grid, values=tuple(lhs_vals))
    rhs = SigmaCurve(grid=grid, values=tuple(rhs_vals))
    margins = [l - r for l, r in zip(lhs_vals, rhs_vals)]
    worst = max(margins)
    worst_hz = grid.hz[margins.index(worst)]
    return BoundCheckReport(passed=worst <= 0.0, lhs=lhs, rhs=rhs,
                            worst_margin=worst, worst_hz=worst_hz)


def bode_export(matrix, grid: FrequencyGrid):
    """Magnitude (dB) and phase (deg) per entry, tabulated per grid point.

    Returns (header, rows): the first column is freq_hz, then one
    mag_db/phase_deg column pair per entry in row-major order.  Identically
    zero entries export -inf dB with zero phase.
    """
    responses = freq_response(matrix, grid)
    rows_n = responses[0].shape[0]
    cols_n = responses[0].shape[1]
    header = ["freq_hz"]
    for i in range(rows_n):
        for j in range(cols_n):
            header.append(f"mag_db_{i + 1}{j + 1}")
            header.append(f"phase_deg_{i + 1}{j + 1}")
    rows = []
    for f_hz, m in zip(grid.hz, responses):
        row = [f_hz]
        for i in range(rows_n):
            for j in range(cols_n):
                v = m[i, j]
                mag = abs(v)
                row.append(20.0 * math.log10(mag) if mag > 0.0 else -math.inf)
                row.append(math.degrees(math.atan2(v.imag, v.real))
                           if mag > 0.0 else 0.0)
        rows.append(row)
    return header, rows

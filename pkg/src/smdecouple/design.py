"""Construction of the two-mass benchmark system and SISO loop-shaping.

The benchmark is a one-dimensional chain: two masses, two spring/damper
pairs, force inputs on both masses, positions measured on both.  Its
transfer matrix is assembled symbolically from the equations of motion, so
the entries come out exact.

Loop-shaping builds controllers of a declared structure (integral action,
identical lead filters symmetric about the crossover, roll-off poles to meet
a relative-degree floor) with the gain normalized to unit loop magnitude at
the crossover frequency.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .polymat import PolyMatrix
from .polyrat import Poly, RatFunc, poly_roots
from .tfm import TransferMatrix


class DesignError(RuntimeError):
    """Loop-shaping produced an unstable loop or cannot meet the request."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


@dataclass(frozen=True)
class MechParams:
    """Two-mass chain parameters: masses (kg), stiffnesses (N/m), dampings (kg/s)."""

    m1: Fraction
    m2: Fraction
    k1: Fraction
    c1: Fraction
    k2: Fraction
    c2: Fraction

    def __post_init__(self):
        for name in ("m1", "m2", "k1", "c1", "k2", "c2"):
            value = Fraction(getattr(self, name))
            if value <= 0:
                raise ValueError(f"{name} must be strictly positive")
            object.__setattr__(self, name, value)


#: Benchmark coefficient values.
TWO_MASS_DEFAULTS = MechParams(m1=1, m2=1, k1=10, c1=10, k2=10, c2=10)


def two_mass_plant(params: MechParams = TWO_MASS_DEFAULTS) -> TransferMatrix:
    """Force-to-position transfer matrix of the two-mass chain.

    From the equations of motion in the Laplace domain,
    A(s) X = B F with

        A = [[m1 s^2 + (c1+c2) s + k1 + k2,  -(c2 s + k2)],
             [-(c2 s + k2),                   m2 s^2 + c2 s + k2]]
        B = [[1, -1], [0, 1]]

    so P = A^-1 B, computed exactly.
    """
    p = params
    coupling = Poly((p.k2, p.c2))
    a11 = Poly((p.k1 + p.k2, p.c1 + p.c2, p.m1))
    a22 = Poly((p.k2, p.c2, p.m2))
    a = TransferMatrix([[RatFunc(a11), RatFunc(-coupling)],
                        [RatFunc(-coupling), RatFunc(a22)]])
    b = TransferMatrix([[RatFunc(1), RatFunc(-1)],
                        [RatFunc(0), RatFunc(1)]])
    return a.inverse() * b


def known_transformation_pair() -> tuple[PolyMatrix, PolyMatrix]:
    """A concrete unimodular pair that diagonalizes the default two-mass plant.

    Entered as data (it is one valid choice among many); both matrices have
    determinant -1 and U*P*V is the canonical diagonal form.
    """
    tenth = Fraction(1, 10)
    u = PolyMatrix([
        [Poly.zero(), Poly.one()],
        [Poly.one(), Poly((9, 10, 29 * tenth, tenth))],
    ])
    v = PolyMatrix([
        [Poly((-9 * tenth, -tenth)), Poly((10, 10, 1))],
        [Poly.one(), Poly((-10, -10))],
    ])
    return u, v


# ---------------------------------------------------------------------------
# SISO loop-shaping


@dataclass(frozen=True)
class LoopShapeSpec:
    """Structural recipe for one SISO loop.

    lead filters place their zero at crossover/lead_spread and their pole at
    crossover*lead_spread.  integrator_corner_spread > 0 tames each
    integrator into (s + wc/spread)/s, keeping the pure integral action at DC
    but releasing the phase near crossover; 0 keeps plain 1/s factors.
    Roll-off poles at crossover*rolloff_spread are appended as needed to
    reach min_reldeg.
    """

    crossover_hz: float
    min_reldeg: int
    integrator_order: int
    lead_count: int
    lead_spread: float = 3.0
    integrator_corner_spread: float = 0.0
    rolloff_spread: float = 10.0

    def __post_init__(self):
        if self.crossover_hz <= 0:
            raise ValueError("crossover must be strictly positive")
        if self.min_reldeg < 0:
            raise ValueError("min_reldeg must be nonnegative")
        if self.integrator_order < 0 or self.lead_count < 0:
            raise ValueError("structure counts must be nonnegative")
        if self.lead_count and self.lead_spread <= 1:
            raise ValueError("lead_spread must exceed 1")
        if self.rolloff_spread <= 1:
            raise ValueError("rolloff_spread must exceed 1")


def _rat(x, limit=10 ** 6) -> Fraction:
    return Fraction(x).limit_denominator(limit)


def loopshape_siso(plant: RatFunc, spec: LoopShapeSpec,
                   stability_tol: float = 1e-9) -> RatFunc:
    """Shape a controller of the declared structure around the plant.

    The controller is integrators x leads x roll-off poles with an exact
    rational gain normalizing |plant*C| to one at the crossover.  Raises
    DesignError when the closed loop comes out unstable or the structure
    cannot reach the requested relative degree.
    """
    s = Poly.s()
    wc = _rat(2.0 * math.pi * spec.crossover_hz)
    ctrl = RatFunc.one()
    if spec.integrator_order:
        if spec.integrator_corner_spread > 0:
            wi = wc / _rat(spec.integrator_corner_spread)
            block = RatFunc(Poly((wi, 1)), s)
        else:
            block = RatFunc(Poly.one(), s)
        ctrl = ctrl * block ** spec.integrator_order
    if spec.lead_count:
        spread = _rat(spec.lead_spread)
        zero = wc / spread
        pole = wc * spread
        lead = RatFunc(Poly((zero, 1)), Poly((pole, 1)))
        ctrl = ctrl * lead ** spec.lead_count
    reldeg = ctrl.relative_degree or 0
    deficit = spec.min_reldeg - reldeg
    if deficit > 0:
        wr = wc * _rat(spec.rolloff_spread)
        ctrl = ctrl * RatFunc(Poly.one(), Poly((wr, 1))) ** deficit
    loop0 = plant * ctrl
    wc_point = 2j * math.pi * spec.crossover_hz
    magnitude = abs(loop0(wc_point))
    if not (magnitude > 0 and math.isfinite(magnitude)):
        raise DesignError("loop magnitude at crossover is degenerate",
                          {"magnitude": magnitude})
    gain = Fraction(1.0 / magnitude).limit_denominator(10 ** 12)
    ctrl = ctrl * RatFunc(Poly((gain,)))
    if (ctrl.relative_degree or 0) < spec.min_reldeg:
        raise DesignError(
            f"structure cannot reach relative degree {spec.min_reldeg}",
            {"achieved": ctrl.relative_degree})
    loop = plant * ctrl
    closed = RatFunc.one() + loop
    char = closed.num
    roots = poly_roots(char)
    margin_deg = 180.0 + math.degrees(cmath.phase(loop(wc_point)))
    if not roots.all_left_of(-stability_tol):
        bad = [r for r in roots.roots if r.real >= -stability_tol]
        raise DesignError(
            "shaped loop is not stable",
            {"unstable_poles": bad, "phase_margin_deg": margin_deg})
    return ctrl


#: Channel recipes for the first benchmark design: channel 1 closes the loop
#: around the fourth-order diagonal entry (integral action, three leads, one
#: roll-off to reach relative degree 1); channel 2 closes around the unit
#: entry (double integrator, one lead, three roll-off poles for relative
#: degree 5).
DESIGN1_CHANNEL1 = LoopShapeSpec(
    crossover_hz=10.0, min_reldeg=1, integrator_order=1, lead_count=3,
    lead_spread=7.0, integrator_corner_spread=10.0, rolloff_spread=10.0)
DESIGN1_CHANNEL2 = LoopShapeSpec(
    crossover_hz=10.0, min_reldeg=5, integrator_order=2, lead_count=1,
    lead_spread=7.0, integrator_corner_spread=0.0, rolloff_spread=10.0)


def design1_controllers(psm_diag) -> tuple[RatFunc, RatFunc]:
    """Independent per-channel loop shaping for the benchmark diagonal plant."""
    p1, p2 = psm_diag
    c1 = loopshape_siso(p1, DESIGN1_CHANNEL1)
    c2 = loopshape_siso(p2, DESIGN1_CHANNEL2)
    return c1, c2


def make_design2(c1sm: RatFunc, p1sm: RatFunc,
                 min_reldeg: int = 5) -> RatFunc:
    """Second-channel controller that equalizes both closed loops.

    With a unit second diagonal entry, choosing C2 as the first channel's
    open loop makes both complementary sensitivities identical, which zeroes
    the off-diagonal coupling of the mapped closed loop.
    """
    c2 = p1sm * c1sm
    rd = c2.relative_degree
    if rd is None or rd < min_reldeg:
        raise DesignError(
            f"open loop has relative degree {rd}, below the floor {min_reldeg}")
    return c2

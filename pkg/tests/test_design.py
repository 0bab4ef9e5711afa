import math
from fractions import Fraction

import numpy as np
import pytest

from smdecouple.polyrat import Poly, RatFunc, poly_roots
from smdecouple.polymat import smith_mcmillan
from smdecouple.tfm import TransferMatrix, controller_backmap, properness_min_reldeg
from smdecouple.stability import check_internal_stability
from smdecouple.design import (
    DESIGN1_CHANNEL1,
    DESIGN1_CHANNEL2,
    DesignError,
    LoopShapeSpec,
    MechParams,
    TWO_MASS_DEFAULTS,
    design1_controllers,
    known_transformation_pair,
    loopshape_siso,
    make_design2,
    two_mass_plant,
)

D4 = Poly((100, 200, 130, 30, 1))


def scalar(f):
    return TransferMatrix([[f]])


class TestMechParams:
    def test_positivity_enforced(self):
        with pytest.raises(ValueError):
            MechParams(m1=0, m2=1, k1=10, c1=10, k2=10, c2=10)
        with pytest.raises(ValueError):
            MechParams(m1=1, m2=1, k1=-3, c1=10, k2=10, c2=10)

    def test_exact_coercion(self):
        p = MechParams(m1=1, m2=1, k1=10, c1=10, k2=10, c2=10)
        assert isinstance(p.k1, Fraction)


class TestTwoMassPlant:
    def test_matches_hand_derivation(self):
        p = two_mass_plant()
        assert p[0, 0] == RatFunc(Poly((10, 10, 1)), D4)
        assert p[0, 1] == RatFunc(Poly((0, 0, -1)), D4)
        assert p[1, 0] == RatFunc(Poly((10, 10)), D4)
        assert p[1, 1] == RatFunc(Poly((10, 10, 1)), D4)

    def test_dc_gains(self):
        p = two_mass_plant()
        assert p[0, 0](Fraction(0)) == Fraction(1, 10)
        assert p[0, 1](Fraction(0)) == 0
        assert p[1, 0](Fraction(0)) == Fraction(1, 10)
        assert p[1, 1](Fraction(0)) == Fraction(1, 10)

    def test_cross_coupling_is_purely_inertial(self):
        # Re-deriving the source equations: the force on mass 2 reaches
        # position 1 only through the reaction -m2 s^2 x2 term, so the (1,2)
        # entry must be -m2 s^2 over the characteristic polynomial for any
        # parameter values.
        for params in (TWO_MASS_DEFAULTS,
                       MechParams(m1=2, m2=3, k1=5, c1=7, k2=11, c2=13),
                       MechParams(m1=1, m2=1, k1=10, c1=10,
                                  k2=Fraction(1, 1000), c2=Fraction(1, 1000))):
            p = two_mass_plant(params)
            entry = p[0, 1]
            assert entry.num == Poly((0, 0, -params.m2)) * (1 / entry.den.lead) \
                or entry.num.monic() == Poly((0, 0, 1))
            assert entry.num.degree == 2
            assert entry.num.coeffs[0] == 0 and entry.num.coeffs[1] == 0

    def test_weak_coupling_limit(self):
        # With nearly vanishing spring/damper 2 the second mass decouples:
        # x2 responds to F2 like a pure double integrator.
        eps = Fraction(1, 10 ** 9)
        p = two_mass_plant(MechParams(m1=1, m2=1, k1=10, c1=10, k2=eps, c2=eps))
        response = complex(p[1, 1](1j))  # |1/(m2 s^2)| = 1 at w = 1
        assert abs(response + 1.0) < 1e-6
        leak = complex(p[1, 0](1j))
        assert abs(leak) < 1e-6


class TestKnownPair:
    def test_reldeg_requirement(self):
        u, v = known_transformation_pair()
        assert properness_min_reldeg(u, v) == [1, 5]


class TestLoopShape:
    def test_unit_plant_gain_normalization(self):
        spec = LoopShapeSpec(crossover_hz=10.0, min_reldeg=0,
                             integrator_order=0, lead_count=1)
        ctrl = loopshape_siso(RatFunc.one(), spec)
        assert abs(abs(ctrl(2j * math.pi * 10.0)) - 1.0) < 1e-9
        assert (ctrl.relative_degree or 0) >= 0

    def test_design1_channel1_structure(self):
        dec = smith_mcmillan(two_mass_plant())
        c1 = loopshape_siso(dec.diag[0], DESIGN1_CHANNEL1)
        assert c1.relative_degree == 1
        assert c1.den(Fraction(0)) == 0          # integral action
        assert c1.num(Fraction(0)) != 0
        loop = dec.diag[0] * c1
        assert abs(abs(loop(2j * math.pi * 10.0)) - 1.0) < 1e-9
        closed = RatFunc.one() + loop
        assert poly_roots(closed.num).all_left_of(-1e-9)

    def test_design1_channel2_structure(self):
        c2 = loopshape_siso(RatFunc.one(), DESIGN1_CHANNEL2)
        assert c2.relative_degree == 5
        # double integrator: denominator divisible by s^2
        assert c2.den.coeffs[0] == 0 and c2.den.coeffs[1] == 0
        assert c2.den.coeffs[2] != 0
        closed = RatFunc.one() + c2
        assert poly_roots(closed.num).all_left_of(-1e-9)

    def test_crossover_unique_and_in_band(self):
        dec = smith_mcmillan(two_mass_plant())
        c1, c2 = design1_controllers(dec.diag)
        for plant, ctrl in ((dec.diag[0], c1), (dec.diag[1], c2)):
            loop = plant * ctrl
            freqs = np.logspace(-2, 2, 1200)
            mags = np.array([abs(loop(2j * math.pi * f)) for f in freqs])
            signs = np.sign(np.log(mags))
            crossings = np.nonzero(np.diff(signs) != 0)[0]
            assert len(crossings) == 1
            k = crossings[0]
            f_cross = math.sqrt(freqs[k] * freqs[k + 1])
            assert 9.0 <= f_cross <= 11.0

    def test_infeasible_loop_reports_instability(self):
        unstable_plant = RatFunc(Poly.one(), Poly((-1, 1)))
        spec = LoopShapeSpec(crossover_hz=1.0, min_reldeg=0,
                             integrator_order=1, lead_count=0)
        with pytest.raises(DesignError) as err:
            loopshape_siso(unstable_plant, spec)
        assert "unstable_poles" in err.value.details

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            LoopShapeSpec(crossover_hz=0.0, min_reldeg=0,
                          integrator_order=0, lead_count=0)
        with pytest.raises(ValueError):
            LoopShapeSpec(crossover_hz=1.0, min_reldeg=-1,
                          integrator_order=0, lead_count=0)
        with pytest.raises(ValueError):
            LoopShapeSpec(crossover_hz=1.0, min_reldeg=0,
                          integrator_order=0, lead_count=1, lead_spread=0.5)


@pytest.fixture(scope="module")
def pieces():
    plant = two_mass_plant()
    dec = smith_mcmillan(plant)
    u, v = known_transformation_pair()
    c1, _ = design1_controllers(dec.diag)
    c2 = make_design2(c1, dec.diag[0])
    return plant, dec, u, v, c1, c2


class TestDesign2:
    def test_relative_degree_floor(self, pieces):
        _, _, _, _, c1, c2 = pieces
        assert c2.relative_degree == 5

    def test_equal_closed_loops(self, pieces):
        _, dec, _, _, c1, c2 = pieces
        l1 = dec.diag[0] * c1
        l2 = dec.diag[1] * c2
        assert l1 == l2
        t1 = l1 / (RatFunc.one() + l1)
        t2 = l2 / (RatFunc.one() + l2)
        assert t1 == t2

    def test_backmapped_controllers_proper(self, pieces):
        _, dec, u, v, c1, c2 = pieces
        mapped = controller_backmap(TransferMatrix.diagonal([c1, c2]), u, v)
        assert mapped.all_proper()
        c1d1, c2d1 = design1_controllers(dec.diag)
        mapped1 = controller_backmap(
            TransferMatrix.diagonal([c1d1, c2d1]), u, v)
        assert mapped1.all_proper()

    def test_both_channels_internally_stable(self, pieces):
        _, dec, _, _, c1, c2 = pieces
        for plant, ctrl in ((dec.diag[0], c1), (dec.diag[1], c2)):
            report = check_internal_stability(scalar(plant), scalar(ctrl))
            assert report.is_internally_stable

    def test_reldeg_shortfall_rejected(self):
        with pytest.raises(DesignError):
            make_design2(RatFunc.one(), RatFunc.one())


class TestBoundConservatism:
    def test_sufficient_condition_fails_where_direct_check_passes(self, pieces):
        # The submultiplicative bound demands sigma(T_diag) below ~0.015 at
        # low frequency, where any tracking design sits near one, so it must
        # come out inconclusive; the direct original-domain check on the
        # equalized design passes the same requirement outright.
        from smdecouple.freq import (FrequencyGrid, essential_bound_check,
                                     performance_check_original)
        from smdecouple.loops import gang_of_six, transform_to_original

        plant, dec, u, v, c1, c2 = pieces
        grid = FrequencyGrid.log_hz(1e-2, 1e2, 25)
        weight = RatFunc.from_coeffs((4,), (5,))  # 1/1.25
        csm = TransferMatrix.diagonal([c1, c2])
        ess = gang_of_six(dec.diagonal_matrix(), csm)
        bound = essential_bound_check(ess.T, weight, u, grid)
        assert not bound.passed
        assert bound.lhs.values[0] > bound.rhs.values[0]    # low band edge
        assert bound.lhs.values[-1] > bound.rhs.values[-1]  # high band edge

        mapped = transform_to_original(ess, u, v, plant)
        direct = performance_check_original(mapped.T, weight, grid)
        assert direct.passed

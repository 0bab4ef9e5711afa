import random

import numpy as np
import pytest

from smdecouple.polyrat import Poly, RatFunc
from smdecouple.tfm import TransferMatrix
from smdecouple.sim import TimeResponse, partial_fractions, step_response

from gen import random_stable_poly


def tf(num, den=(1,)):
    return RatFunc(Poly(num), Poly(den))


class TestPartialFractions:
    def test_single_pole(self):
        terms = partial_fractions(tf((1,), (1, 1)))
        assert len(terms) == 1
        pole, order, coeff = terms[0]
        assert order == 1
        assert abs(pole + 1) < 1e-12
        assert abs(coeff - 1) < 1e-12

    def test_two_poles_cover_up(self):
        # 1/((s+1)(s+2)): residue +1 at -1 and -1 at -2 by the cover-up rule.
        terms = partial_fractions(tf((1,), (2, 3, 1)))
        got = {round(t.pole.real): t.coeff for t in terms}
        assert abs(got[-1] - 1) < 1e-10
        assert abs(got[-2] + 1) < 1e-10

    def test_double_pole(self):
        terms = partial_fractions(tf((1,), (1, 2, 1)))
        assert len(terms) == 1
        pole, order, coeff = terms[0]
        assert order == 2
        assert abs(pole + 1) < 1e-10
        assert abs(coeff - 1) < 1e-10

    def test_not_strictly_proper_rejected(self):
        with pytest.raises(ValueError):
            partial_fractions(tf((1, 1), (2, 1)))

    def test_order_cap(self):
        quartic = Poly((1, 1)) ** 4
        with pytest.raises(ValueError):
            partial_fractions(RatFunc(Poly.one(), quartic))

    def test_zero_function(self):
        assert partial_fractions(RatFunc.zero()) == []

    def test_reconstruction_random(self):
        rng = random.Random(73)
        for _ in range(40):
            den = random_stable_poly(rng, rng.randint(1, 4))
            num_deg = rng.randint(0, (den.degree or 1) - 1)
            num = Poly([rng.randint(-3, 3) for _ in range(num_deg)]
                       + [rng.choice([1, 2])])
            f = RatFunc(num, den)
            if not f.is_strictly_proper:
                continue
            terms = partial_fractions(f)
            for _ in range(20):
                s0 = complex(rng.uniform(0.5, 3), rng.uniform(-3, 3))
                rebuilt = sum(t.coeff / (s0 - t.pole) ** t.order for t in terms)
                want = f(s0)
                assert abs(rebuilt - want) <= 1e-8 * max(1.0, abs(want))


class TestStepResponse:
    def test_identity_matrix(self):
        resp = step_response(TransferMatrix.identity(2), 1,
                             np.linspace(0, 5, 50))
        assert np.allclose(resp.output(1), 1.0)
        assert np.allclose(resp.output(0), 0.0)

    def test_first_order_lag(self):
        t = np.linspace(0, 6, 200)
        resp = step_response(TransferMatrix([[tf((1,), (1, 1))]]), 0, t)
        assert np.allclose(resp.output(0), 1.0 - np.exp(-t), atol=1e-10)

    def test_final_value_matches_dc_gain(self):
        rng = random.Random(79)
        t = np.linspace(0, 60, 400)
        for _ in range(15):
            den = random_stable_poly(rng, rng.randint(1, 3))
            num_deg = rng.randint(0, den.degree)
            num = Poly([rng.randint(-3, 3) for _ in range(num_deg)]
                       + [rng.choice([1, 2])])
            f = RatFunc(num, den)
            resp = step_response(TransferMatrix([[f]]), 0, t)
            dc = float(f.num(0) / f.den(0))
            assert abs(resp.output(0)[-1] - dc) < 1e-6

    def test_unstable_rejected(self):
        with pytest.raises(ValueError):
            step_response(TransferMatrix([[tf((1,), (-1, 1))]]), 0,
                          np.linspace(0, 1, 10))

    def test_marginal_rejected(self):
        with pytest.raises(ValueError):
            step_response(TransferMatrix([[tf((1,), (0, 1))]]), 0,
                          np.linspace(0, 1, 10))

    def test_zero_entry_exactly_zero(self):
        m = TransferMatrix([[tf((1,), (1, 1)), RatFunc.zero()],
                            [RatFunc.zero(), tf((1,), (1, 1))]])
        resp = step_response(m, 0, np.linspace(0, 5, 30))
        assert np.all(resp.output(1) == 0.0)

    def test_double_integrator_in_loop(self):
        # closed loop around 1/s^2 with a PD controller: stable second-order
        # response settling at 1
        plant = tf((1,), (0, 0, 1))
        ctrl = tf((1, 1))
        loop = plant * ctrl
        t_cl = loop / (RatFunc.one() + loop)
        t = np.linspace(0, 30, 300)
        resp = step_response(TransferMatrix([[t_cl]]), 0, t)
        assert abs(resp.output(0)[-1] - 1.0) < 1e-6


def test_time_response_validation():
    with pytest.raises(ValueError):
        TimeResponse(times=np.array([0.0, 1.0]), values=np.zeros((1, 3)))

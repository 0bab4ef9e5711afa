import random

import pytest

from smdecouple.polyrat import Poly, RatFunc
from smdecouple.polymat import (
    NotUnimodularError,
    PolyMatrix,
    RankDeficiencyError,
    determinant,
    is_unimodular,
    smith_form,
    smith_mcmillan,
    unimodular_inverse,
)
from smdecouple.tfm import TransferMatrix
from smdecouple.design import known_transformation_pair, two_mass_plant

from gen import random_poly, random_unimodular
from oracles import det_leibniz

D4 = Poly((100, 200, 130, 30, 1))


def cleared_two_mass_numerators() -> PolyMatrix:
    """d * P for the benchmark plant, as exact polynomial entries."""
    return PolyMatrix([
        [Poly((10, 10, 1)), Poly((0, 0, -1))],
        [Poly((10, 10)), Poly((10, 10, 1))],
    ])


class TestPolyMatrixOps:
    def test_identity_product(self):
        a = PolyMatrix([[Poly((1, 2)), Poly((0, 0, 1))],
                        [Poly((3,)), Poly((1, 1))]])
        assert a * PolyMatrix.identity(2) == a

    def test_row_swap_product(self):
        swap = PolyMatrix([[Poly.zero(), Poly.one()],
                           [Poly.one(), Poly.zero()]])
        a = PolyMatrix([[Poly((1,)), Poly((2,))], [Poly((3,)), Poly((4,))]])
        assert swap * a == PolyMatrix([[Poly((3,)), Poly((4,))],
                                       [Poly((1,)), Poly((2,))]])

    def test_known_pair_product_smoke(self):
        u, v = known_transformation_pair()
        prod = u * v
        assert determinant(prod) == Poly.one()  # (-1) * (-1)

    def test_dimension_mismatch(self):
        a = PolyMatrix.identity(2)
        b = PolyMatrix.zeros(3, 2)
        with pytest.raises(ValueError):
            a * b

    def test_json_round_trip(self):
        u, _ = known_transformation_pair()
        assert PolyMatrix.from_json(u.to_json()) == u


class TestDeterminant:
    def test_identity(self):
        for n in (1, 2, 3, 4):
            assert determinant(PolyMatrix.identity(n)) == Poly.one()

    def test_known_pair_is_minus_one(self):
        # By the 2x2 formula: det U = 0*g - 1*1 = -1 and
        # det V = (s+9)(s+1)/10*10 - (s^2+10s+10) = -1.
        u, v = known_transformation_pair()
        assert determinant(u) == Poly((-1,))
        assert determinant(v) == Poly((-1,))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            determinant(PolyMatrix.zeros(2, 3))

    def test_random_against_leibniz(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 3)
            m = PolyMatrix([[random_poly(rng, 2) for _ in range(n)]
                            for _ in range(n)])
            want = det_leibniz(m.entries, Poly.zero(), Poly.one())
            assert determinant(m) == want


class TestUnimodular:
    def test_identity(self):
        assert is_unimodular(PolyMatrix.identity(3))

    def test_diag_with_s_is_not(self):
        assert not is_unimodular(PolyMatrix.diagonal([Poly.s(), Poly.one()]))

    def test_known_pair(self):
        u, v = known_transformation_pair()
        assert is_unimodular(u)
        assert is_unimodular(v)

    def test_inverse_identity(self):
        assert unimodular_inverse(PolyMatrix.identity(2)) == PolyMatrix.identity(2)

    def test_inverse_of_shear(self):
        shear = PolyMatrix([[Poly.one(), Poly.s()],
                            [Poly.zero(), Poly.one()]])
        assert unimodular_inverse(shear) == PolyMatrix(
            [[Poly.one(), -Poly.s()], [Poly.zero(), Poly.one()]])

    def test_inverse_defining_property(self):
        u, v = known_transformation_pair()
        for m in (u, v):
            assert m * unimodular_inverse(m) == PolyMatrix.identity(2)
            assert unimodular_inverse(m) * m == PolyMatrix.identity(2)

    def test_not_unimodular_rejected(self):
        with pytest.raises(NotUnimodularError):
            unimodular_inverse(PolyMatrix.diagonal([Poly.s(), Poly.one()]))


class TestSmithForm:
    def test_divisibility_reorder(self):
        n = PolyMatrix.diagonal([Poly((0, 0, 1)), Poly.s()])
        u, s, v = smith_form(n)
        assert s == PolyMatrix.diagonal([Poly.s(), Poly((0, 0, 1))])
        assert u * n * v == s

    def test_cleared_benchmark_matrix(self):
        n = cleared_two_mass_numerators()
        _, s, _ = smith_form(n)
        assert s == PolyMatrix.diagonal([Poly.one(), D4])

    def test_rank_deficient(self):
        n = PolyMatrix([[Poly.s(), Poly.zero()], [Poly.zero(), Poly.zero()]])
        u, s, v = smith_form(n)
        assert s == PolyMatrix.diagonal([Poly.s(), Poly.zero()])
        assert u * n * v == s

    def test_coprime_diagonal_merges(self):
        # The textbook case that forces the divisibility-repair branch:
        # diag(s, s+1) has coprime entries, so the invariant factors are
        # 1 and s(s+1), not the original diagonal.
        n = PolyMatrix.diagonal([Poly.s(), Poly((1, 1))])
        u, s, v = smith_form(n)
        assert s == PolyMatrix.diagonal([Poly.one(), Poly((0, 1, 1))])
        assert u * n * v == s

    def test_zero_matrix_rejected(self):
        with pytest.raises(ValueError):
            smith_form(PolyMatrix.zeros(2, 2))

    def test_random_property(self):
        rng = random.Random(29)
        for _ in range(40):
            n_dim = rng.randint(1, 3)
            n = PolyMatrix([[random_poly(rng, 3) for _ in range(n_dim)]
                            for _ in range(n_dim)])
            if all(e.is_zero for row in n.entries for e in row):
                continue
            u, s, v = smith_form(n)
            assert u * n * v == s
            assert is_unimodular(u) and is_unimodular(v)
            diag = [s.entries[i][i] for i in range(n_dim)]
            for a, b in zip(diag, diag[1:]):
                if a.is_zero:
                    assert b.is_zero
                else:
                    assert a.lead == 1
                    if not b.is_zero:
                        assert (b % a).is_zero


class TestSmithMcMillan:
    def test_already_diagonal(self):
        p = TransferMatrix.diagonal([RatFunc(Poly.one(), Poly((1, 1))),
                                     RatFunc.one()])
        dec = smith_mcmillan(p)
        assert dec.u == PolyMatrix.identity(2)
        assert dec.v == PolyMatrix.identity(2)
        assert dec.diag == (RatFunc(Poly.one(), Poly((1, 1))), RatFunc.one())

    def test_benchmark_plant(self):
        dec = smith_mcmillan(two_mass_plant())
        assert dec.diag == (RatFunc(Poly.one(), D4), RatFunc.one())

    def test_repeated_invariant_factor(self):
        f = RatFunc(Poly.one(), Poly.s())
        dec = smith_mcmillan(TransferMatrix.diagonal([f, f]))
        assert dec.diag == (f, f)

    def test_rank_deficiency_reported(self):
        one = RatFunc.one()
        p = TransferMatrix([[one, one], [one, one]])
        with pytest.raises(RankDeficiencyError):
            smith_mcmillan(p)

    def test_reconstruction_exact(self):
        p = two_mass_plant()
        dec = smith_mcmillan(p)
        assert dec.reconstruct_plant() == p

    def test_known_pair_certifies(self):
        # The decomposition is not unique; any unimodular pair satisfying the
        # defining relation is accepted, including this externally given one.
        p = two_mass_plant()
        dec = smith_mcmillan(p)
        u, v = known_transformation_pair()
        external = type(dec)(u=u, v=v, diag=dec.diag, plant_dim=2)
        assert external.certifies(p)

    def test_random_reconstruction(self):
        # Entries share denominators from a small pool, the way physical
        # plants share dynamics; fully independent denominators only inflate
        # the cleared matrix without testing anything new.
        rng = random.Random(31)
        done = 0
        while done < 25:
            n_dim = rng.randint(2, 3)
            pool = [random_poly(rng, 2, nonzero=True) for _ in range(2)]
            entries = [[RatFunc(random_poly(rng, 2), rng.choice(pool))
                        for _ in range(n_dim)] for _ in range(n_dim)]
            p = TransferMatrix(entries)
            if p.det().is_zero:
                continue
            dec = smith_mcmillan(p)
            assert dec.certifies(p)
            assert dec.reconstruct_plant() == p
            for a, b in zip(dec.diag, dec.diag[1:]):
                assert (b.num % a.num).is_zero
                assert (a.den % b.den).is_zero
            done += 1


def test_random_unimodular_generator_sanity():
    rng = random.Random(37)
    for _ in range(20):
        w = random_unimodular(rng, rng.randint(2, 3))
        assert is_unimodular(w)

import itertools
import random

import pytest

from skewseries import (BaseScalars, IdempotentMatrix, SeriesScalars, SkewPoly,
                        TruncatedSeries, idempotent_rank, k0_rank_check,
                        random_idempotent, random_invertible,
                        serre_transfer_check, series_from_poly,
                        stable_iso_witness, stably_free_witness,
                        unimodular_complete)
from skewseries.k0 import mat_diag, mat_direct_sum, mat_identity, mat_mul


def all_2x2_idempotents(scalars):
    elems = sorted(scalars.ctx.elements())
    found = []
    for a, b, c, d in itertools.product(elems, repeat=4):
        m = ((a, b), (c, d))
        if mat_mul(scalars, m, m) == m:
            found.append(m)
    return found


def all_2x2_invertibles(scalars):
    elems = sorted(scalars.ctx.elements())
    mats = [((a, b), (c, d))
            for a, b, c, d in itertools.product(elems, repeat=4)]
    ident = mat_identity(scalars, 2)
    table = {}
    for m in mats:
        for w in mats:
            if mat_mul(scalars, m, w) == ident and mat_mul(scalars, w, m) == ident:
                table[m] = w
                break
    return table


class TestRank:
    def test_identity_and_zero(self, z8):
        scalars = BaseScalars(z8)
        for n in (1, 2, 3):
            w = idempotent_rank(IdempotentMatrix(scalars, mat_identity(scalars, n)))
            assert w.rank == n and w.verify()
            assert w.conjugator == mat_identity(scalars, n)
            w0 = idempotent_rank(IdempotentMatrix(
                scalars, mat_diag(scalars, [0] * n)))
            assert w0.rank == 0 and w0.verify()

    def test_handworked_rank_one(self, z8):
        scalars = BaseScalars(z8)
        e = IdempotentMatrix(scalars, ((1, 2), (0, 0)))
        w = idempotent_rank(e)
        assert w.rank == 1
        assert w.verify()

    def test_not_idempotent_rejected(self, z8):
        with pytest.raises(ValueError, match="not idempotent"):
            IdempotentMatrix(BaseScalars(z8), ((1, 1), (1, 1)))

    def test_non_local_base_rejected(self, z8):
        class NonLocal(BaseScalars):
            def is_local(self):
                return False

        scalars = NonLocal(z8)
        e = IdempotentMatrix(scalars, mat_identity(scalars, 2))
        with pytest.raises(ValueError, match="unsupported base"):
            idempotent_rank(e)

    def test_radical_diagonal_idempotent(self, z8):
        # genuine idempotent over Z/8 whose whole diagonal lies in J = (2):
        # the unit pivot must be dragged in from off the diagonal
        scalars = BaseScalars(z8)
        entries = ((6, 5, 5), (5, 6, 5), (5, 5, 6))
        e = IdempotentMatrix(scalars, entries)
        assert all(entries[i][i] % 2 == 0 for i in range(3))
        w = idempotent_rank(e)
        assert w.rank == 2 and w.verify()

    def test_conjugation_invariance(self, z8, f27):
        rng = random.Random(51)
        for ctx in (z8, f27):
            scalars = BaseScalars(ctx)
            for _ in range(20):
                e, ones = random_idempotent(scalars, 3, rng)
                v, vinv = random_invertible(scalars, 3, rng)
                conj = IdempotentMatrix(
                    scalars, mat_mul(scalars, mat_mul(scalars, v, e.entries), vinv))
                assert idempotent_rank(conj).rank == ones

    def test_rank_additive(self, z8):
        rng = random.Random(53)
        scalars = BaseScalars(z8)
        for _ in range(20):
            e1, r1 = random_idempotent(scalars, 2, rng)
            e2, r2 = random_idempotent(scalars, 3, rng)
            direct = IdempotentMatrix(
                scalars, mat_direct_sum(scalars, e1.entries, e2.entries))
            assert idempotent_rank(direct).rank == r1 + r2

    def test_suite(self, z8, f27):
        for ctx in (z8, f27):
            report = k0_rank_check(ctx, 25, seed=55)
            assert report.passed, report.counterexample


class TestExhaustiveZ4:
    def test_classification(self, z4):
        scalars = BaseScalars(z4)
        idempotents = all_2x2_idempotents(scalars)
        assert ((0, 0), (0, 0)) in idempotents
        assert ((1, 0), (0, 1)) in idempotents
        ranks = {}
        for e in idempotents:
            w = idempotent_rank(IdempotentMatrix(scalars, e))
            assert w.verify()
            ranks[e] = w.rank
        assert set(ranks.values()) == {0, 1, 2}
        # rank 0 and rank 2 are the trivial classes
        assert [e for e, r in ranks.items() if r == 0] == [((0, 0), (0, 0))]
        assert [e for e, r in ranks.items() if r == 2] == [((1, 0), (0, 1))]
        # conjugacy orbits computed by brute force match the rank classes
        invertibles = all_2x2_invertibles(scalars)
        for e in idempotents:
            orbit = set()
            for v, vinv in invertibles.items():
                orbit.add(mat_mul(scalars, mat_mul(scalars, v, e), vinv))
            assert orbit == {f for f in idempotents if ranks[f] == ranks[e]}


class TestStableIso:
    def test_equal_matrices(self, z8):
        scalars = BaseScalars(z8)
        e = IdempotentMatrix(scalars, ((1, 2), (0, 0)))
        w = stable_iso_witness(e, e)
        assert w is not None and w.t == 0 and w.verify()

    def test_equal_rank_different_shape(self, z8):
        scalars = BaseScalars(z8)
        e1 = IdempotentMatrix(scalars, ((1, 2), (0, 0)))
        e2 = IdempotentMatrix(scalars, ((1, 0), (0, 0)))
        w = stable_iso_witness(e1, e2)
        assert w is not None and w.t == 0 and w.verify()

    def test_rank_gap_has_no_witness(self, z8):
        scalars = BaseScalars(z8)
        one = IdempotentMatrix(scalars, ((1,),))
        zero = IdempotentMatrix(scalars, ((0,),))
        assert stable_iso_witness(one, zero, t_max=6) is None

    def test_size_padding(self, z8):
        scalars = BaseScalars(z8)
        e1 = IdempotentMatrix(scalars, ((1,),))
        e2 = IdempotentMatrix(scalars, ((1, 0, 0), (0, 0, 0), (0, 0, 0)))
        w = stable_iso_witness(e1, e2)
        assert w is not None and w.verify()

    def test_base_mismatch(self, z8, f27):
        e1 = IdempotentMatrix(BaseScalars(z8), ((1,),))
        e2 = IdempotentMatrix(BaseScalars(f27), ((f27.one(),),))
        with pytest.raises(ValueError, match="base mismatch"):
            stable_iso_witness(e1, e2)


class TestStablyFree:
    def test_zero_module_with_padding(self, z8):
        scalars = BaseScalars(z8)
        e = IdempotentMatrix(scalars, ((0,),))
        w = stably_free_witness(e, 1)
        assert (w.rank, w.s, w.t) == (0, 1, 0)
        assert w.verify()

    def test_identity_no_padding(self, z8):
        scalars = BaseScalars(z8)
        e = IdempotentMatrix(scalars, mat_identity(scalars, 2))
        w = stably_free_witness(e, 0)
        assert w.rank == 2 and w.verify()

    def test_rank_one_with_padding(self, z8):
        scalars = BaseScalars(z8)
        e = IdempotentMatrix(scalars, ((1, 2), (0, 0)))
        w = stably_free_witness(e, 1)
        assert w.rank == 1 and w.verify()
        # shapes: forward (n+s) x (r+s), backward (r+s) x (n+s)
        assert len(w.forward) == 3 and len(w.forward[0]) == 2
        assert len(w.backward) == 2 and len(w.backward[0]) == 3


class TestUnimodular:
    def test_standard_basis_row(self, z8):
        scalars = BaseScalars(z8)
        c = unimodular_complete(scalars, (1, 0, 0))
        assert c.matrix == mat_identity(scalars, 3)
        assert c.verify()

    def test_handworked_completion(self, z8):
        c = unimodular_complete(BaseScalars(z8), (3, 2))
        assert c.matrix == ((3, 2), (0, 1))
        assert c.inverse == ((3, 2), (0, 1))
        assert c.verify()

    def test_unit_in_second_position(self, z8):
        c = unimodular_complete(BaseScalars(z8), (2, 3, 4))
        assert c.matrix[0] == (2, 3, 4)
        assert c.verify()

    def test_radical_row_rejected(self, z8):
        with pytest.raises(ValueError, match="not unimodular"):
            unimodular_complete(BaseScalars(z8), (2, 4))

    def test_series_row(self, z8):
        scalars = SeriesScalars(z8, 3)
        row = (series_from_poly(SkewPoly(z8, (1, 2)), 3),
               series_from_poly(SkewPoly(z8, (2,)), 3))
        c = unimodular_complete(scalars, row)
        assert c.verify()


class TestSeriesScalars:
    def test_unit_test_and_inverse(self, z8, f27):
        rng = random.Random(61)
        for ctx in (z8, f27):
            scalars = SeriesScalars(ctx, 4)
            for _ in range(20):
                a = scalars.sample(rng)
                if scalars.is_unit(a):
                    inv = scalars.inv(a)
                    assert a * inv == scalars.one()
                    assert inv * a == scalars.one()
                else:
                    with pytest.raises(ValueError, match="not a unit"):
                        scalars.inv(a)

    def test_nilpotent_part_is_not_unit(self, z8):
        scalars = SeriesScalars(z8, 3)
        x = TruncatedSeries.var(z8, 3)
        assert not scalars.is_unit(x)


class TestSerreTransfer:
    def test_explicit_conjugation_over_series(self, z8):
        # diag(1, 0) conjugated by I + (2x)E_12 over S/G_3
        scalars = SeriesScalars(z8, 3)
        two_x = series_from_poly(SkewPoly(z8, (0, 2)), 3)
        v = ((scalars.one(), two_x), (scalars.zero(), scalars.one()))
        vinv = ((scalars.one(), -two_x), (scalars.zero(), scalars.one()))
        d = mat_diag(scalars, [1, 0])
        e = IdempotentMatrix(scalars, mat_mul(scalars, mat_mul(scalars, v, d), vinv))
        w = idempotent_rank(e)
        assert w.rank == 1 and w.verify()

    def test_suite(self, f27):
        report = serre_transfer_check(f27, 4, size_limit=3, samples=10, seed=67)
        assert report.passed, report.counterexample

import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from isct.errors import InputError, ResourceGuardError, TheoremViolation
from isct.exactq import RationalMatrix, rank
from isct.singularity import (
    GUARD_ENV,
    SingularityGerm,
    bp_eigenvalue_residues,
    companion_matrix,
    cyclotomic_factorization,
    cyclotomic_polynomial,
    euler_phi,
    milnor_number_bp_oracle,
    milnor_number_wh,
    monodromy_data,
    monodromy_from_cyclotomic,
    monodromy_model,
)

from conftest import CORPUS, md_for

t = sympy.Symbol("t")


def brute_residues(exponents):
    """Literal enumeration of every tuple ``j``."""
    out = Counter()
    for js in itertools.product(*(range(1, a) for a in exponents)):
        s = sum(Fraction(j, a) for j, a in zip(js, exponents))
        out[s - math.floor(s)] += 1
    return out


def charpoly(M):
    S = sympy.Matrix(M.rows, M.cols, [sympy.Rational(x.numerator, x.denominator) for x in M.entries])
    return sympy.Poly(S.charpoly(t).as_expr(), t)


def expected_charpoly(cyc):
    p = sympy.Integer(1)
    for m, e in cyc.items():
        p *= sympy.cyclotomic_poly(m, t) ** e
    return sympy.Poly(p, t)


class TestGerm:
    def test_n_at_least_three(self):
        with pytest.raises(InputError, match="n must be >= 3"):
            SingularityGerm.brieskorn_pham([2, 2, 2])

    def test_exponent_bound(self):
        with pytest.raises(InputError):
            SingularityGerm.brieskorn_pham([1, 2, 2, 2])

    def test_weight_bound(self):
        with pytest.raises(InputError):
            SingularityGerm.weighted_homogeneous([30, 10, 6, 15], 30)


class TestMilnor:
    @pytest.mark.parametrize("exps, mu", [([2, 2, 2, 2], 1), ([3, 3, 3, 3], 16), ([2, 3, 5, 2], 8)])
    def test_examples(self, exps, mu):
        assert milnor_number_wh(SingularityGerm.brieskorn_pham(exps)) == mu
        assert milnor_number_bp_oracle(exps) == mu

    def test_weighted(self):
        germ = SingularityGerm.weighted_homogeneous([15, 10, 6, 15], 30)
        assert milnor_number_wh(germ) == 8 == milnor_number_bp_oracle([2, 3, 5, 2])

    def test_weighted_non_integral(self):
        germ = SingularityGerm.weighted_homogeneous([2, 2, 2, 4], 7)
        with pytest.raises(InputError, match="not a valid weighted-homogeneous isolated singularity"):
            milnor_number_wh(germ)

    def test_bp_as_weighted(self):
        # x_i^a_i is weighted homogeneous with w_i = L / a_i, degree L
        for exps in CORPUS[::17]:
            L = math.lcm(*exps)
            wh = SingularityGerm.weighted_homogeneous([L // a for a in exps], L)
            assert milnor_number_wh(wh) == milnor_number_wh(SingularityGerm.brieskorn_pham(exps))

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            milnor_number_bp_oracle([11, 11, 11, 11, 11, 11, 11])
        with pytest.raises(ResourceGuardError):
            bp_eigenvalue_residues([3, 3, 3, 3], guard=15)
        assert milnor_number_bp_oracle([3, 3, 3, 3], guard=16) == 16

    def test_guard_env(self, monkeypatch):
        monkeypatch.setenv(GUARD_ENV, "10")
        with pytest.raises(ResourceGuardError):
            milnor_number_bp_oracle([3, 3, 3, 3])
        monkeypatch.setenv(GUARD_ENV, "nonsense")
        with pytest.raises(InputError):
            milnor_number_bp_oracle([3, 3, 3, 3])


class TestResidues:
    def test_node(self):
        assert bp_eigenvalue_residues([2, 2, 2, 2]) == Counter({Fraction(0): 1})

    def test_two_cubics(self):
        assert bp_eigenvalue_residues([3, 3]) == Counter({Fraction(0): 2, Fraction(1, 3): 1, Fraction(2, 3): 1})

    def test_e8_type_has_no_zero(self):
        r = bp_eigenvalue_residues([2, 3, 5, 2])
        assert Fraction(0) not in r and sum(r.values()) == 8

    @pytest.mark.parametrize("exps", CORPUS[::7] + ((2, 3, 4), (6, 7, 2, 3, 2)))
    def test_against_enumeration(self, exps):
        assert bp_eigenvalue_residues(exps) == brute_residues(exps)

    @given(st.lists(st.integers(2, 7), min_size=1, max_size=4))
    def test_count_is_mu(self, exps):
        r = bp_eigenvalue_residues(exps)
        assert sum(r.values()) == math.prod(a - 1 for a in exps)
        assert all(0 <= x < 1 for x in r)


class TestCyclotomic:
    def test_examples(self):
        assert cyclotomic_factorization({Fraction(0): 1}) == {1: 1}
        assert cyclotomic_factorization(bp_eigenvalue_residues([3, 3, 3, 3])) == {1: 6, 3: 5}
        cyc = cyclotomic_factorization(bp_eigenvalue_residues([2, 3, 5, 2]))
        assert cyc.get(1, 0) == 0
        assert sum(e * euler_phi(m) for m, e in cyc.items()) == 8

    def test_unbalanced_orbit(self):
        with pytest.raises(InputError, match="not defined over Q"):
            cyclotomic_factorization({Fraction(1, 3): 1})

    @pytest.mark.parametrize("m", range(1, 40))
    def test_polynomial_matches_sympy(self, m):
        assert list(cyclotomic_polynomial(m)) == sympy.Poly(sympy.cyclotomic_poly(m, t), t).all_coeffs()[::-1]

    @pytest.mark.parametrize("m", range(1, 60))
    def test_totient(self, m):
        assert euler_phi(m) == sympy.totient(m)

    def test_companion(self):
        assert companion_matrix([1, 1, 1]) == RationalMatrix([[0, -1], [1, -1]])
        assert monodromy_model({1: 1}) == RationalMatrix([[1]])
        assert monodromy_model({3: 1}) == RationalMatrix([[0, -1], [1, -1]])

    def test_model_block_order(self):
        M = monodromy_model({3: 1, 1: 2})
        assert M.select_rows([0, 1]).select_columns([0, 1]).is_identity()

    @settings(max_examples=40, deadline=None)
    @given(st.dictionaries(st.integers(1, 12), st.integers(1, 3), min_size=1, max_size=4))
    def test_charpoly(self, cyc):
        M = monodromy_model(cyc)
        assert charpoly(M) == expected_charpoly(cyc)


class TestMonodromyData:
    @pytest.mark.parametrize("exps, mu, one, r", [
        ([2, 2, 2, 2], 1, 1, 0),
        ([3, 3, 3, 3], 16, 6, 10),
        ([2, 3, 5, 2], 8, 0, 8),
    ])
    def test_examples(self, exps, mu, one, r):
        md = monodromy_data(SingularityGerm.brieskorn_pham(exps))
        assert (md.mu, md.mult_one, md.rank_T_minus_1) == (mu, one, r)

    def test_model_rank_example(self):
        md = md_for((3, 3, 3, 3))
        assert rank(md.model - RationalMatrix.identity(16)) == 10
        assert charpoly(md.model) == expected_charpoly({1: 6, 3: 5})

    def test_weighted_rejected(self):
        with pytest.raises(InputError):
            monodromy_data(SingularityGerm.weighted_homogeneous([15, 10, 6, 15], 30))

    def test_validate_catches_tampering(self):
        md = md_for((3, 3, 3, 3))
        bad = type(md)(md.mu, md.residues, md.cyclotomic, md.mult_one + 1, md.rank_T_minus_1 - 1, md.model)
        with pytest.raises(TheoremViolation):
            bad.validate()

    @pytest.mark.parametrize("exps", CORPUS[::5])
    def test_invariants(self, exps):
        md = md_for(exps)
        assert sum(md.residues.values()) == md.mu
        assert sum(e * euler_phi(m) for m, e in md.cyclotomic.items()) == md.mu
        assert md.mult_one == md.residues.get(Fraction(0), 0) == md.cyclotomic.get(1, 0)
        assert rank(md.model) == md.mu

    def test_from_cyclotomic(self):
        md = monodromy_from_cyclotomic({3: 1})
        assert (md.mu, md.mult_one, md.rank_T_minus_1) == (2, 0, 2)

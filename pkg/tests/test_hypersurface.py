import pytest
import sympy

from isct.errors import InputError
from isct.hypersurface import HypersurfaceFamily, euler_characteristic_oracle, smooth_betti
from isct.singularity import SingularityGerm


def chern_euler(n, d):
    """Independent oracle: top Chern class via sympy series."""
    h = sympy.Symbol("h")
    series = sympy.series((1 + h) ** (n + 2) / (1 + d * h), h, 0, n + 1).removeO()
    return int(d * sympy.Poly(series, h).coeff_monomial(h ** n))


def test_projective_space():
    assert smooth_betti(3, 1) == [1, 0, 1, 0, 1, 0, 1]


def test_quartic_surface():
    b = smooth_betti(2, 4)
    assert b[2] == 22
    assert sum((-1) ** i * x for i, x in enumerate(b)) == 24


def test_quintic_threefold():
    assert smooth_betti(3, 5)[3] == 204
    assert euler_characteristic_oracle(3, 5) == -200


@pytest.mark.parametrize("n, d, chi", [(2, 1, 3), (1, 3, 0), (3, 5, -200), (2, 4, 24)])
def test_euler_examples(n, d, chi):
    assert euler_characteristic_oracle(n, d) == chi


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("d", range(1, 9))
def test_betti_shape_and_euler(n, d):
    b = smooth_betti(n, d)
    assert len(b) == 2 * n + 1
    assert b == b[::-1]
    assert all(x in (0, 1) for i, x in enumerate(b) if i != n)
    chi = euler_characteristic_oracle(n, d)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == chi == chern_euler(n, d)


def test_bad_arguments():
    with pytest.raises(InputError):
        smooth_betti(0, 3)
    with pytest.raises(InputError):
        euler_characteristic_oracle(2, 0)


class TestFamily:
    def test_valid(self):
        f = HypersurfaceFamily(3, 5, SingularityGerm.brieskorn_pham([2, 2, 2, 2]))
        assert f.as_dict() == {
            "n": 3, "degree": 5,
            "singularity": {"kind": "brieskorn_pham", "exponents": [2, 2, 2, 2]},
        }

    def test_variable_count(self):
        with pytest.raises(InputError, match="expected 5 variables"):
            HypersurfaceFamily(4, 5, SingularityGerm.brieskorn_pham([2, 2, 2, 2]))

    def test_degree(self):
        with pytest.raises(InputError):
            HypersurfaceFamily(3, 0, SingularityGerm.brieskorn_pham([2, 2, 2, 2]))

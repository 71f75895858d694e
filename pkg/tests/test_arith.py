import random

import pytest
from sympy import factorint

from residua.arith import FactorBoundError, factor_int


def test_matches_sympy():
    rng = random.Random(0)
    for _ in range(500):
        n = rng.randint(1, 10**12)
        assert factor_int(n) == factorint(n)
    assert factor_int(-12) == {2: 2, 3: 1}
    assert factor_int(1) == {}


def test_large_numbers_with_small_factors():
    n = 3**4 * 5**2 * 11**4 * 13**4 * 19**4
    assert n > 10**15 and factor_int(n) == {3: 4, 5: 2, 11: 4, 13: 4, 19: 4}
    assert factor_int(2**61 - 1) == {2**61 - 1: 1}


def test_hard_cofactor_is_refused():
    with pytest.raises(FactorBoundError):
        factor_int((2**61 - 1) * (2**89 - 1))
    with pytest.raises(ValueError):
        factor_int(0)

import numpy as np
import pytest

from bephase import criteria
from bephase.fixtures import (
    FIXTURE_PARAMETER,
    fixture_is_valid,
    ppt_entangled_family,
    ppt_entangled_fixture,
    search_fixture_parameter,
)


def test_search_reproduces_frozen_parameter():
    assert search_fixture_parameter() == FIXTURE_PARAMETER


def test_fixture_is_ppt_and_realignment_entangled():
    sigma = ppt_entangled_fixture()
    assert criteria.ppt_check(sigma)
    assert criteria.realignment_value(sigma) > 1 + 1e-6
    assert fixture_is_valid(sigma)


@pytest.mark.parametrize("t", [0.05, 0.3, 0.6, 0.95])
def test_family_is_ppt(t):
    assert criteria.ppt_check(ppt_entangled_family(t))


def test_family_parameter_range():
    with pytest.raises(ValueError):
        ppt_entangled_family(1.0)


def test_fixture_ranks():
    sigma = ppt_entangled_fixture()
    assert np.linalg.matrix_rank(sigma.mat, tol=1e-10) == 7
    assert np.linalg.matrix_rank(criteria.partial_transpose(sigma, side="A"), tol=1e-10) == 6

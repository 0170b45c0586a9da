import numpy as np
import pytest

from pesym import generators as gen
from pesym.fields import PhysConsts
from pesym.liealg import TruncatedAlgebra, isomorphism_check, realize, redefined, sample_states


def test_isomorphism_at_f1():
    assert isomorphism_check(1.0, n_points=40) < 1e-6


@pytest.mark.parametrize("f", [0.0, -0.6, 2.0])
def test_isomorphism_other_f(f):
    assert isomorphism_check(f, n_points=30, seed=2) < 1e-6


def test_corrupted_redefinition_fails():
    assert isomorphism_check(1.0, n_points=40, corrupt=True) > 1e-2


def test_corrupt_is_harmless_at_f0():
    assert isomorphism_check(0.0, n_points=30, corrupt=True) < 1e-6


def test_redefined_p_includes_rotation_correction():
    consts = PhysConsts(f=1.0)
    alg = TruncatedAlgebra(2)
    z = sample_states(1, 10)
    np.testing.assert_allclose(redefined(alg.scalar("P"), consts)(z), (gen.P() - 0.5 * gen.J())(z), atol=1e-15)
    np.testing.assert_allclose(redefined(alg.scalar("P"), consts, corrupt=True)(z), gen.P()(z), atol=1e-15)


def test_realize_gf_uses_rotating_generators():
    consts = PhysConsts(f=1.0)
    alg = TruncatedAlgebra(2)
    z = sample_states(2, 10)
    np.testing.assert_allclose(realize(alg.scalar("D1"), "gf", consts)(z), gen.D1(1.0)(z))
    np.testing.assert_allclose(realize(alg.scalar("D1"), "g0", consts)(z), gen.D1(0.0)(z))


def test_sample_states_deterministic():
    np.testing.assert_array_equal(sample_states(4, 7), sample_states(4, 7))
    assert np.all(sample_states(4, 50)[3] > 0)

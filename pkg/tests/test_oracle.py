import numpy as np
import pytest

from helpers import random_normalized
from manybody import (
    OracleOptions,
    SolverOptions,
    cyclic_set,
    ipf_project,
    kl_divergence,
    m_body_set,
    marginal,
    project,
)
from manybody.errors import BadModesError, NotConvergedError, NotNormalizedError

P22 = np.array([[0.4, 0.1], [0.2, 0.3]])


def test_marginal_examples():
    assert np.allclose(marginal(P22, (0,)), [0.5, 0.5])
    assert np.allclose(marginal(P22, (1,)), [0.6, 0.4])
    assert np.allclose(marginal(P22, (0, 1)), P22)


def test_marginals_commute():
    rng = np.random.default_rng(0)
    p = random_normalized(rng, (3, 4, 2))
    assert np.allclose(marginal(marginal(p, (0, 1)), (0,)), marginal(p, (0,)))


def test_marginal_bad_modes():
    with pytest.raises(BadModesError):
        marginal(P22, ())
    with pytest.raises(BadModesError):
        marginal(P22, (2,))


def test_ipf_one_body_closed_form():
    q = ipf_project(P22, m_body_set(2, 1))
    assert np.allclose(q, [[0.3, 0.2], [0.3, 0.2]], atol=1e-12)


def test_ipf_full_set_returns_input():
    rng = np.random.default_rng(1)
    p = random_normalized(rng, (3, 3))
    q = ipf_project(p, m_body_set(2, 2))
    assert np.allclose(q, p, atol=1e-12)


def test_ipf_requires_normalized():
    with pytest.raises(NotNormalizedError):
        ipf_project(2 * P22, m_body_set(2, 1))


def test_ipf_matches_every_model_marginal():
    rng = np.random.default_rng(2)
    p = random_normalized(rng, (3, 2, 4))
    iset = cyclic_set(3)
    opts = OracleOptions()
    q = ipf_project(p, iset, opts)
    # downward closure: lower-order marginals match too, within 10x tolerance
    for subset in iset.subsets:
        assert np.abs(marginal(q, subset) - marginal(p, subset)).max() < 10 * opts.tolerance


def test_ipf_positive_from_uniform_start():
    rng = np.random.default_rng(3)
    p = random_normalized(rng, (3, 3, 3))
    q = ipf_project(p, cyclic_set(3))
    assert (q > 0).all()


def test_ipf_agrees_with_newton_projection():
    rng = np.random.default_rng(4)
    newton_opts = SolverOptions(tolerance=1e-9, max_iterations=300)
    for dims, iset in [
        ((2, 2, 2), m_body_set(3, 2)),
        ((3, 2, 4), cyclic_set(3)),
        ((3, 3, 3), m_body_set(3, 1)),
    ]:
        p = random_normalized(rng, dims)
        newton = project(p, iset, newton_opts)
        ipf = ipf_project(p, iset)
        assert np.abs(newton.tensor - ipf).max() < 1e-5
        assert abs(kl_divergence(p, newton.tensor) - kl_divergence(p, ipf)) < 1e-6


def test_ipf_not_converged_raises():
    rng = np.random.default_rng(5)
    p = random_normalized(rng, (3, 3, 3))
    with pytest.raises(NotConvergedError):
        ipf_project(p, cyclic_set(3), OracleOptions(tolerance=1e-14, max_sweeps=1))

import numpy as np
import pytest

from netab.ggm import (GgmModel, GgmParams, ggm_conditional_mean,
                       ggm_sample_node, validate_real_response)
from netab.graph import Graph
from netab.seeds import spawn_rng


@pytest.fixture
def params():
    return GgmParams(alpha0=1.0, alpha1=1.5, beta=0.2, gamma=0.4, sigma=0.8)


class TestParams:
    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            GgmParams(0, 0, 0, 0, 0.0)
        with pytest.raises(ValueError):
            GgmParams(0, 0, 0, 0, -1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            GgmParams(float("nan"), 0, 0, 0, 1.0)

    def test_dict_roundtrip(self, params):
        assert GgmParams.from_dict(params.as_dict()) == params

    def test_coercion(self):
        p = GgmParams(np.float64(1), 0, 0, 0, np.float64(2))
        assert type(p.alpha0) is float and type(p.sigma) is float


class TestConditionalMean:
    def test_hand_computed_path(self, params, path_graph):
        # node 1 treated, neighbors 0 (control) and 2 (treated)
        z = np.array([0, 1, 1], dtype=np.int8)
        y = np.array([2.0, 0.0, -1.0])
        # alpha1 + beta*[treated nbrs: node 2] + gamma*mean(y0, y2)
        want = 1.5 + 0.2 * 1 + 0.4 * (2.0 + -1.0) / 2
        got = ggm_conditional_mean(params, path_graph, z, y, 1)
        assert got == pytest.approx(want, abs=1e-12)

    def test_control_node(self, params, path_graph):
        z = np.array([0, 1, 1], dtype=np.int8)
        y = np.array([0.0, 3.0, 0.0])
        # node 0: alpha0 + beta*1 treated neighbor + gamma*y1
        want = 1.0 + 0.2 + 0.4 * 3.0
        assert ggm_conditional_mean(params, path_graph, z, y, 0) == \
            pytest.approx(want, abs=1e-12)

    def test_isolated_node_has_no_neighbor_terms(self, params):
        g = Graph(num_nodes=2, edges=())
        z = np.array([0, 1], dtype=np.int8)
        y = np.array([9.0, 9.0])
        assert ggm_conditional_mean(params, g, z, y, 0) == 1.0
        assert ggm_conditional_mean(params, g, z, y, 1) == 1.5

    def test_bad_index(self, params, path_graph):
        z = np.zeros(3, dtype=np.int8)
        y = np.zeros(3)
        with pytest.raises(IndexError):
            ggm_conditional_mean(params, path_graph, z, y, 5)


def test_sample_node_is_mean_plus_scaled_noise(params, path_graph):
    z = np.array([0, 1, 1], dtype=np.int8)
    y = np.array([2.0, 0.0, -1.0])
    draw = ggm_sample_node(params, path_graph, z, y, 1, spawn_rng(9))
    eps = spawn_rng(9).standard_normal()
    want = ggm_conditional_mean(params, path_graph, z, y, 1) + params.sigma * eps
    assert draw == pytest.approx(want, abs=1e-12)


def test_validate_real_response():
    validate_real_response(np.array([0.5, -2.0]), 2)
    with pytest.raises(Exception):
        validate_real_response(np.array([np.nan, 0.0]), 2)
    with pytest.raises(Exception):
        validate_real_response(np.array([1.0]), 2)


def test_model_protocol_basics(params):
    m = GgmModel(params)
    assert m.response_dtype == np.float64
    g = Graph(num_nodes=4, edges=((0, 1), (2, 3)))
    rng = spawn_rng(2)
    # the real-valued model starts chains at zero for both string modes
    assert np.array_equal(m.initial_state(g, "random", rng), np.zeros(4))
    assert np.array_equal(m.initial_state(g, "all-positive", rng), np.zeros(4))
    explicit = np.array([1.0, -2.0, 0.0, 3.5])
    s = m.initial_state(g, explicit, rng)
    assert np.array_equal(s, explicit)
    s[0] = 99.0
    assert explicit[0] == 1.0

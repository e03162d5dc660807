import math

import numpy as np
import pytest

import extree


def chain_model(d=5, gamma=0.3):
    return extree.Model.husler_reiss(d, [(i, i + 1) for i in range(d - 1)], gamma)


def test_version():
    assert extree.version().startswith("extree ")
    assert extree.version().endswith(extree.__version__)


def test_trees_and_mst():
    assert extree.validate_tree(3, [(1, 2), (0, 1)]) == [(0, 1), (1, 2)]
    with pytest.raises(extree.ExtreeError):
        extree.validate_tree(3, [(0, 1), (0, 1)])
    with pytest.raises(ValueError):
        extree.validate_tree(3, [(0, 1)])
    t = extree.random_tree(6, seed=3)
    assert len(t) == 5
    assert t == extree.random_tree(6, seed=3)
    w = np.array([[0, 1, 4, 3], [1, 0, 2, 5], [4, 2, 0, 6], [3, 5, 6, 0]], dtype=float)
    assert extree.mst(w) == [(0, 1), (0, 3), (1, 2)]


def test_closed_forms():
    assert extree.hr_chi_from_gamma(1.0) == pytest.approx(0.6170750774519738, abs=1e-12)
    model = chain_model(4, 0.5)
    g = extree.model_variogram(model, 0)
    assert g.shape == (4, 4)
    assert g[0, 3] == pytest.approx(1.5)
    assert extree.is_conditionally_negative_definite(g)
    assert model.edges == [(0, 1), (1, 2), (2, 3)]
    again = extree.Model.from_json(model.to_json())
    assert again.to_json() == model.to_json()


def test_sampling_and_learning():
    model = chain_model()
    x = extree.sample_domain_of_attraction(model, 5000, seed=1)
    assert x.shape == (5000, 5)
    assert np.array_equal(x, extree.sample_domain_of_attraction(model, 5000, seed=1, threads=2))
    z = extree.sample_max_stable(model, 100, seed=2)
    assert (z > 0).all()
    u = extree.rank_transform(x)
    assert u.min() == pytest.approx(1 / 5001)
    assert extree.default_k(2000) == 437
    chi = extree.chi_hat_matrix(x)
    assert np.allclose(chi, chi.T)
    gam = extree.gamma_hat(x)
    assert np.all(np.diag(gam) == 0)
    assert extree.gamma_hat(x, root=0).shape == (5, 5)
    for method in ("chi", "gamma", "gamma-root"):
        assert extree.learn_tree(x, method=method) == model.edges
    fit = extree.fit_hr_tree(x)
    assert len(fit["edge_gamma"]) == 4
    assert "version" in fit


def test_pipeline_and_experiment():
    model = chain_model(4)
    x = extree.sample_domain_of_attraction(model, 3790, seed=5)
    report = extree.run_pipeline(x, names=list("abcd"), bootstrap=2, seed=1)
    assert report["k"] == 190
    assert report["input"]["names"] == list("abcd")
    assert "bootstrap" in report
    assert len(report["chi_table"]) == 6
    rows = extree.run_experiment({"d": 4, "n_list": [200], "repetitions": 2})
    assert len(rows) == 1
    assert 0.0 <= float(rows[0]["srr_mean"]) <= 1.0
    with pytest.raises(extree.ExtreeError):
        extree.run_experiment({"d": 4, "n_list": [200], "repetitions": 0})


def test_parse_csv():
    values, names = extree.parse_csv("a,b\n1,-2\n3,4\n", absolute=True)
    assert names == ["a", "b"]
    assert values[0, 1] == 2.0
    with pytest.raises(extree.ExtreeError):
        extree.parse_csv("a,b\n1,2\n3\n4,5\n")
    assert not math.isnan(values.sum())

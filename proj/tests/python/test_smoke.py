import json
import math

import numpy as np
import pytest

import penlevel


def standardized_instance(seed, n, p):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    Y = rng.standard_normal(n)
    return penlevel.standardize(penlevel.Dataset(X, Y))


def test_module_metadata():
    assert penlevel.RNG_NAME == "splitmix64-1.0"


def test_dataset_roundtrip_and_standardize():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((30, 4))
    Y = rng.standard_normal(30)
    d = penlevel.Dataset(X, Y)
    assert d.n == 30 and d.p == 4
    assert not d.standardized

    s = penlevel.standardize(d)
    assert s.standardized
    s.validate_standardization()
    cols = np.asarray(s.X)
    assert np.abs(cols.mean(axis=0)).max() < 1e-12
    assert np.abs((cols**2).mean(axis=0) - 1.0).max() < 1e-12
    # centers/scales reconstruct the original design
    back = cols * np.asarray(s.scales) + np.asarray(s.centers)
    assert np.abs(back - X).max() < 1e-12


def test_dataset_validation_raises():
    with pytest.raises(penlevel.PenlevelError):
        penlevel.Dataset(np.eye(3), np.zeros(2))
    with pytest.raises(penlevel.PenlevelError):
        penlevel.Dataset(np.full((3, 1), np.nan), np.zeros(3))


def test_lambda_mdt_matches_frozen_value():
    est = penlevel.lambda_mdt("lasso", 200, 1000, alpha=0.1, c=1.01)
    assert est["method"] == "mdt"
    assert est["lambda"] == pytest.approx(0.27785745447692, abs=1e-12)
    assert est["lambda"] == pytest.approx(
        1.01 * penlevel.phi_inv(1.0 - 0.1 / 2000.0) / math.sqrt(200.0), abs=1e-15
    )


def test_lambda_stein_is_deterministic():
    d = standardized_instance(3, 60, 10)
    a = penlevel.lambda_stein("lasso", d, draws=500, seed=11)
    b = penlevel.lambda_stein("lasso", d, draws=500, seed=11)
    assert a == b
    assert a["method"] == "stein_mc"
    assert a["draws"] == 500 and a["seed"] == 11
    assert a["lambda"] == pytest.approx(1.01 * a["quantile"] / math.sqrt(60.0), rel=1e-15)
    c = penlevel.lambda_stein("lasso", d, draws=500, seed=12)
    assert c["lambda"] != a["lambda"]


def test_fit_roundtrip_with_kkt():
    d = standardized_instance(5, 50, 8)
    lam = 0.4 * np.abs(penlevel.gradient("lasso", d, np.zeros(8))).max()
    res = penlevel.fit("lasso", d, lam, tol=1e-9)
    assert res["converged"]
    beta = np.asarray(res["beta"])
    assert penlevel.kkt_residual("lasso", d, beta, lam) <= 1e-9
    assert res["iterations"] >= 1


def test_fit_rejects_unstandardized():
    rng = np.random.default_rng(9)
    d = penlevel.Dataset(rng.standard_normal((20, 3)), rng.standard_normal(20))
    with pytest.raises(penlevel.PenlevelError):
        penlevel.fit("lasso", d, 0.1)


def test_phi_functions_vectorize():
    x = np.array([-2.0, 0.0, 1.0, 3.0])
    q = penlevel.phi_cdf(x)
    assert np.abs(penlevel.phi_inv(q) - x).max() < 1e-9
    assert penlevel.phi_inv(0.95) == pytest.approx(1.6448536269514722, abs=1e-12)


def test_generators_and_prediction_error():
    X = penlevel.gen_design(500, 4, 0.5, 42)
    assert X.shape == (500, 4)
    assert np.array_equal(X, penlevel.gen_design(500, 4, 0.5, 42))
    beta = penlevel.gen_beta(4, 2, 77)
    assert np.count_nonzero(beta) == 2
    Y = penlevel.gen_response(X, beta, "lasso", 0.0, 5)
    assert np.abs(Y - X @ beta).max() == 0.0

    Xs = np.asarray(penlevel.standardize(penlevel.Dataset(X, Y)).X)
    bhat = beta.copy()
    bhat[0] += 1.0
    pe = penlevel.prediction_error(Xs, bhat, beta)
    assert pe == pytest.approx(1.0, abs=1e-12)


def test_cv_select_shape():
    d = standardized_instance(8, 60, 6)
    out = penlevel.cv_select("lasso", d, folds=3, grid_size=8, seed=4)
    assert out["method"] == "cv"
    assert len(out["grid"]) == 8
    assert len(out["mean_loss"]) == 8
    assert out["lambda"] in out["grid"]


def test_run_experiment_tiny():
    config = {
        "n": 40,
        "p": 8,
        "sparsity": 3,
        "family": "lasso",
        "replications": 2,
        "base_seed": 99,
        "methods": ["mdt", "stein_mc"],
        "stein_draws": 100,
    }
    out = penlevel.run_experiment(json.dumps(config))
    assert len(out["records"]) == 4
    summary = json.loads(out["summary_json"])
    assert summary["rng"] == "splitmix64-1.0"
    assert summary["design"]["n"] == 40
    assert {s["method"] for s in summary["summaries"]} == {"mdt", "stein_mc"}

    again = penlevel.run_experiment(json.dumps(config))
    assert [r["lambda"] for r in again["records"]] == [r["lambda"] for r in out["records"]]


def test_run_experiment_rejects_unknown_key():
    with pytest.raises(penlevel.PenlevelError):
        penlevel.run_experiment(json.dumps({"bogus": 1}))


def test_csv_reader(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("a,b\n1,2\n3,4\n")
    m = penlevel.read_csv_matrix(str(path))
    assert m.shape == (2, 2)
    assert m[1, 1] == 4.0
    with pytest.raises(penlevel.PenlevelError):
        penlevel.read_csv_matrix(str(tmp_path / "missing.csv"))

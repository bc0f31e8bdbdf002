import math

import numpy as np
import pytest

from jacobilab.client import ServiceClient, ServiceError


@pytest.fixture(scope="module")
def client():
    with ServiceClient() as c:
        yield c


def test_health(client):
    response = client._client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_expand_mode(client):
    result = client.post(
        "/expand",
        {"spec": "mode:1,0", "alpha": [0.0, 0.0], "beta": [0.0, 0.0], "degree": 4},
    )
    coeffs = result["expansion"]["coeffs"]
    assert coeffs == [{"k": [1, 0], "v": 1.0}]
    assert result["config"]["spec"] == "mode:1,0"


def test_expand_poly_product(client):
    result = client.post(
        "/expand",
        {
            "spec": 'poly:{"terms":[{"e":[1,1],"c":1.0}]}',
            "alpha": [0.0, 0.0],
            "beta": [0.0, 0.0],
            "degree": 3,
        },
    )
    nonzero = [row for row in result["expansion"]["coeffs"] if abs(row["v"]) > 1e-12]
    assert len(nonzero) == 1
    assert nonzero[0]["k"] == [1, 1]
    assert abs(nonzero[0]["v"] - 1.0) < 1e-12


def test_expand_bump_is_mean_one_scale(client):
    result = client.post(
        "/expand",
        {"spec": "bump:0.0,0.5", "alpha": [0.0], "beta": [0.0], "degree": 8},
    )
    rows = {tuple(r["k"]): r["v"] for r in result["expansion"]["coeffs"]}
    assert rows[(0,)] > 0.0


def test_expand_bad_spec(client):
    with pytest.raises(ServiceError) as err:
        client.post("/expand", {"spec": "nope:1", "alpha": [0.0], "beta": [0.0]})
    assert err.value.status_code == 400


def test_apply_riesz_roundtrip(client):
    mode = client.post(
        "/expand", {"spec": "mode:1", "alpha": [0.0], "beta": [0.0], "degree": 3}
    )["expansion"]
    out = client.post("/apply", {"operator": "riesz-1", "expansion": mode})
    coeffs = out["expansion"]["coeffs"]
    assert out["expansion"]["basis"] == {"shifted": 1}
    assert abs(coeffs[0]["v"] - 1.0 / math.sqrt(2.0)) < 1e-15


def test_apply_poisson_requires_t(client):
    mode = client.post(
        "/expand", {"spec": "mode:1", "alpha": [0.0], "beta": [0.0], "degree": 3}
    )["expansion"]
    with pytest.raises(ServiceError) as err:
        client.post("/apply", {"operator": "poisson", "expansion": mode})
    assert err.value.status_code == 400
    out = client.post("/apply", {"operator": "poisson", "t": 1.0, "expansion": mode})
    assert abs(out["expansion"]["coeffs"][0]["v"] - math.exp(-math.sqrt(2.0))) < 1e-14


def test_apply_chain_matches_composition(client):
    mode = client.post(
        "/expand", {"spec": "mode:2,1", "alpha": [0.5, 0.5], "beta": [0.0, 0.0], "degree": 4}
    )["expansion"]
    step1 = client.post("/apply", {"operator": "poisson", "t": 0.5, "expansion": mode})
    step2 = client.post(
        "/apply", {"operator": "riesz-2", "expansion": step1["expansion"]}
    )
    direct = client.post(
        "/apply", {"operator": "conjugate-poisson-2", "t": 0.5, "expansion": mode}
    )
    a = step2["expansion"]["coeffs"]
    b = direct["expansion"]["coeffs"]
    assert len(a) == len(b) == 1
    assert a[0]["k"] == b[0]["k"]
    assert abs(a[0]["v"] - b[0]["v"]) <= 1e-15 * abs(b[0]["v"])


def test_apply_unknown_operator(client):
    mode = client.post(
        "/expand", {"spec": "mode:1", "alpha": [0.0], "beta": [0.0], "degree": 2}
    )["expansion"]
    with pytest.raises(ServiceError) as err:
        client.post("/apply", {"operator": "warp", "expansion": mode})
    assert err.value.status_code == 400


def test_verify_kernels_endpoint(client):
    result = client.post(
        "/verify", {"suite": "kernels", "t": [0.5], "grid": 31}
    )
    assert result["passed"] is True
    assert result["report"]["suite"] == "kernels"


def test_verify_kernels_expected_violation(client):
    result = client.post(
        "/verify",
        {
            "suite": "kernels",
            "alpha": [-0.9],
            "beta": [-0.9],
            "t": [0.01],
            "grid": 31,
            "expect_violation": True,
        },
    )
    assert result["passed"] is True


def test_kernels_table_endpoint(client):
    result = client.post(
        "/kernels",
        {"variant": "heat", "alpha": [0.0], "beta": [0.0], "t": 0.5, "grid": 9},
    )
    table = result["table"]
    assert table["converged"] is True
    assert len(table["rows"]) == 81
    assert result["csv"].splitlines()[0] == "x,y,value,residual_flag"
    values = np.array([row["value"] for row in table["rows"]])
    assert np.all(values > 0.0)


def test_gfun_endpoint(client):
    mode = client.post(
        "/expand", {"spec": "mode:2", "alpha": [0.0], "beta": [0.0], "degree": 3}
    )["expansion"]
    result = client.post("/gfun", {"expansion": mode, "variant": "full", "grid": 9})
    assert len(result["values"]) == 9
    assert result["cross_residual"] <= 1e-7
    assert all(v >= 0.0 for v in result["values"])


def test_gfun_tilde_variant(client):
    mode = client.post(
        "/expand", {"spec": "mode:1", "alpha": [0.0], "beta": [0.0], "degree": 3}
    )["expansion"]
    shifted = client.post("/apply", {"operator": "riesz-1", "expansion": mode})["expansion"]
    result = client.post("/gfun", {"expansion": shifted, "variant": "tilde", "grid": 7})
    assert result["cross_residual"] <= 1e-7
    assert all(v > 0.0 for v in result["values"])
    with pytest.raises(ServiceError) as err:
        client.post("/gfun", {"expansion": mode, "variant": "tilde", "grid": 7})
    assert err.value.status_code == 400


def test_normprobe_endpoint(client):
    payload = {
        "op": "poisson",
        "p": [2.0],
        "d": [1, 2],
        "degree": 3,
        "samples": 4,
        "seed": 42,
        "t": 0.5,
    }
    result = client.post("/normprobe", payload)
    assert len(result["rows"]) == 2
    assert all(row["best_ratio"] <= 1.0 + 1e-10 for row in result["rows"])
    again = client.post("/normprobe", payload)
    assert result["csv"] == again["csv"]


def test_normprobe_rejects_small_p(client):
    with pytest.raises(ServiceError) as err:
        client.post("/normprobe", {"op": "poisson", "p": [0.5], "d": [1], "samples": 1})
    assert err.value.status_code == 400

import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def test_root_and_health(client):
    body = client.get("/").json()
    assert body["status"] == "ok"
    assert body["endpoints"]["rank"] == "/api/rank"
    assert client.get("/health").json()["status"] == "healthy"


@pytest.mark.parametrize("disc, h", [(-3, 1), (-4, 1), (-23, 3), (-47, 5), (-71, 7)])
def test_classno(client, disc, h):
    response = client.get("/api/classno", params={"disc": disc})
    assert response.status_code == 200
    assert response.json() == {"discriminant": disc, "class_number": h}


@pytest.mark.parametrize("disc", [5, -2, 0])
def test_classno_rejects_bad_discriminants(client, disc):
    response = client.get("/api/classno", params={"disc": disc})
    assert response.status_code == 400
    assert response.json()["detail"]["message"] == "Invalid discriminant"


def test_conjecture(client):
    response = client.get("/api/conjecture", params={"bound": 30, "residue": 1, "modulus": 4})
    assert response.status_code == 200
    assert response.json()["count"] == 3
    assert client.get("/api/conjecture", params={"bound": 30, "residue": 2, "modulus": 4}).status_code == 400
    assert client.get("/api/conjecture", params={"bound": 1, "residue": 1, "modulus": 4}).status_code == 422


def test_rank(client):
    response = client.get("/api/rank", params={"level": 11, "prime": 1009, "check": True})
    assert response.status_code == 200
    body = response.json()
    assert body["conductor"] == 11 * 1009 ** 2
    assert body["sign"] == -1
    assert body["parity"] == "odd"
    assert body["estimate"] == "1"
    assert body["L1"] == 0
    assert body["defect"] is not None and body["defect"] < 1e-6


def test_rank_even_sign(client):
    body = client.get("/api/rank", params={"level": 11, "prime": 47}).json()
    assert body["sign"] == 1
    assert body["estimate"] == "apparent-even-≥2"
    assert body["defect"] is None


@pytest.mark.parametrize("params", [
    {"level": 17, "prime": 5},
    {"level": 11, "prime": 5},
    {"level": 11, "prime": 11},
    {"level": 11, "prime": 47, "tau": -1},
])
def test_rank_rejects(client, params):
    assert client.get("/api/rank", params=params).status_code in (400, 422)


def test_local_insoluble_with_certificate(client):
    response = client.get("/api/local", params={"prime": 5, "at": "17", "oracle": True})
    assert response.status_code == 200
    body = response.json()
    assert body["solvable"] is False
    assert body["place"] == "17"
    assert body["certificate"]
    assert all(node["status"] in ("nonsquare", "split") for node in body["certificate"])
    assert body["precision"] >= 1
    assert body["oracle"] is not False
    assert body["witness"] is None


def test_local_soluble_and_real(client):
    body = client.get("/api/local", params={"prime": 5, "at": "3"}).json()
    assert body["solvable"] is True
    assert body["witness"]["status"] in ("square", "root", "hensel")
    assert body["precision"] is None

    real = client.get("/api/local", params={"prime": 5, "at": "inf"}).json()
    assert real == {**real, "place": "inf", "solvable": True, "certificate": []}


@pytest.mark.parametrize("params", [
    {"prime": 13, "at": "17"},
    {"prime": 5, "at": "4"},
    {"prime": 5, "at": "x"},
])
def test_local_rejects(client, params):
    assert client.get("/api/local", params=params).status_code == 400


def test_local_only_knows_c17(client):
    assert client.get("/api/local", params={"prime": 5, "at": "17", "quartic": "c11"}).status_code == 422


def test_deficiency(client):
    response = client.get("/api/deficiency", params={"level": 17, "prime": 5})
    assert response.status_code == 200
    body = response.json()
    assert body["genus"] == 1
    assert body["obstruction_constant"] == 17 ** 3
    assert body["deficient"] == ["5", "17"]
    by_place = {entry["place"]: entry for entry in body["places"]}
    assert by_place["inf"]["status"] == "NotDeficient"
    assert by_place["5"]["provenance"] == "quaternion-obstruction"


def test_deficiency_rejects(client):
    assert client.get("/api/deficiency", params={"level": 12, "prime": 5}).status_code == 400
    assert client.get("/api/deficiency", params={"level": 17, "prime": 13}).status_code == 400


def test_survey(client, output_dir):
    response = client.post("/api/survey", json={"bound": 1009, "stratum": "A"})
    assert response.status_code == 200
    body = response.json()
    assert body["total"] == 1
    assert body["smallest"] == 1009
    assert body["primes"] == [1009]
    assert body["counts"]["A"]["pending"] == 1
    assert (output_dir / "census.csv").exists()


def test_survey_validation(client, output_dir):
    assert client.post("/api/survey", json={"bound": 1, "stratum": "A"}).status_code == 422
    assert client.post("/api/survey", json={"bound": 100, "stratum": "C"}).status_code == 422


def test_verify_examples(client):
    body = client.get("/api/verify-examples").json()
    assert body["passed"] is True
    assert [e["name"] for e in body["examples"]] == ["C(11,4079)", "C(19,5591)"]

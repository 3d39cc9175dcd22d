import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_solve_endpoint(client):
    response = client.get("/api/v1/hbm/solve", params={"m": 0, "order": 2, "digits": 12})
    assert response.status_code == 200
    body = response.json()
    assert body["success"] is True
    assert body["data"]["status"] == "solved"
    assert abs(float(body["data"]["omega_decimal"]) - 18 / 218 ** 0.5) < 1e-10


def test_solve_endpoint_caps_order(client):
    response = client.get("/api/v1/hbm/solve", params={"m": 0, "order": 5})
    assert response.status_code == 422
    assert response.json()["error_code"] == "VALIDATION_ERROR"


@pytest.mark.parametrize("params", [
    {"m": 1, "order": 4},
    {"m": 0, "order": 5},
    {"m": 2, "order": 4},
    {"m": 3, "order": 1},
])
def test_solve_endpoint_serves_vetted_cells_only(client, params):
    response = client.get("/api/v1/hbm/solve", params=params)
    assert response.status_code == 422
    assert response.json()["error_code"] == "VALIDATION_ERROR"


def test_table_endpoint_rejects_stretch_cell(client):
    response = client.get("/api/v1/hbm/table", params={"max_m": 1, "max_order": 4})
    assert response.status_code == 422
    assert response.json()["error_code"] == "VALIDATION_ERROR"


def test_solve_endpoint_rejects_bad_query(client):
    response = client.get("/api/v1/hbm/solve", params={"m": -1, "order": 2})
    assert response.status_code == 422


def test_table_endpoint(client):
    response = client.get("/api/v1/hbm/table", params={"max_m": 0, "max_order": 1})
    assert response.status_code == 200
    cells = response.json()["data"]
    assert cells == [{
        "m": 0, "N": 1, "status": "solved",
        "period_coefficient_decimal": cells[0]["period_coefficient_decimal"],
        "error_percent": "11.38"
    }]
    assert cells[0]["period_coefficient_decimal"].startswith("4.44288293")


def test_reference_period(client):
    response = client.get("/api/v1/reference/period", params={"amplitude": "1"})
    assert response.status_code == 200
    data = response.json()["data"]
    assert data["method"] == "closed-form"
    assert data["value"].startswith("5.0132565492")


def test_reference_period_needs_k(client):
    response = client.get("/api/v1/reference/period", params={"amplitude": "1", "method": "quadrature"})
    assert response.status_code == 422


def test_weak_solution(client):
    response = client.get("/api/v1/reference/weak-solution", params={"t": "0", "amplitude": "1"})
    assert response.status_code == 200
    assert float(response.json()["data"]["x"]) == 1.0

import math

import pytest
from fastapi.testclient import TestClient

from mzqfi import __version__
from mzqfi.service.app import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["version"] == __version__


def test_qfi_endpoint(client):
    resp = client.post("/qfi", json={"a": "coherent:2i", "b": "fock:3"})
    assert resp.status_code == 200
    body = resp.json()
    assert abs(body["f_numeric"] - 31.0) < 1e-6
    assert body["pmc_vacuous"] is True
    assert body["parity_b"] == "odd"
    assert body["dim_a"] > 0 and body["dim_b"] > 0


def test_qfi_lossy_endpoint(client):
    resp = client.post("/qfi", json={"a": "coherent:1i", "b": "cat+:1", "loss_T": 0.8})
    assert resp.status_code == 200
    body = resp.json()
    assert body["rel_discrepancy"] < 1e-8
    assert body["support_rank"] > 1


def test_bad_state_spec_maps_to_400(client):
    resp = client.post("/qfi", json={"a": "coherent:zz", "b": "fock:3"})
    assert resp.status_code == 400
    detail = resp.json()["detail"]
    assert detail["kind"] == "usage"
    assert "complex" in detail["message"]


def test_truncation_maps_to_500(client):
    resp = client.post("/qfi", json={"a": "coherent:1:4", "b": "fock:0"})
    assert resp.status_code == 500
    assert resp.json()["detail"]["kind"] == "truncation"


def test_validation_maps_to_422(client):
    resp = client.post("/qfi", json={"a": "coherent:1", "b": "fock:0", "loss_T": 1.7})
    assert resp.status_code == 422
    resp = client.post("/scan/phase", json={"a": "coherent:1", "b": "cat+:1", "points": 1})
    assert resp.status_code == 422
    resp = client.post("/heatmap", json={"family": "thermal"})
    assert resp.status_code == 422


def test_phase_scan_endpoint(client):
    resp = client.post(
        "/scan/phase", json={"a": "coherent:1", "b": "cat+:1", "points": 24}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"] == ["phi", "f_numeric", "f_analytic", "rel_discrepancy", "trunc_warn"]
    assert len(body["rows"]) == 24
    assert abs(body["footer"]["argmax_phi_numeric"] - math.pi / 2) < 1e-9
    assert body["meta"]["a"] == "coherent:1"
    assert body["meta"]["version"] == __version__


def test_loss_scan_endpoint(client):
    resp = client.post(
        "/scan/loss", json={"a": "coherent:1i", "b": "cat+:1", "points": 3, "t_min": 0.6}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"][:3] == ["transmission", "f_numeric", "f_closed_form"]
    assert len(body["rows"]) == 3
    assert "critical_reflection" in body["footer"]


def test_heatmap_endpoint(client):
    resp = client.post("/heatmap", json={"family": "cat", "points": 6, "n_min": 1.0, "n_max": 6.0})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["rows"]) == 36
    assert all(flag == 1 for flag in body["footer"]["antidiagonal_within_one_cell"])


def test_phase_scan_usage_error(client):
    resp = client.post(
        "/scan/phase", json={"a": "fock:2", "b": "cat+:1", "points": 8}
    )
    assert resp.status_code == 400
    assert resp.json()["detail"]["kind"] == "usage"

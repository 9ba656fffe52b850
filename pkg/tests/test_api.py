import json

import pytest
from fastapi.testclient import TestClient

from splitchip.model import constraints_to_doc
from splitchip.workbench import RunStore, create_app, run_once


@pytest.fixture(scope="module")
def client(example_spec, example_constraints):
    app = create_app(example_spec, example_constraints, store=RunStore())
    with TestClient(app) as c:
        yield c


def test_get_system_echoes_loaded_file(client, example_spec, example_constraints):
    res = client.get("/system")
    assert res.status_code == 200
    doc = res.json()
    assert [m["id"] for m in doc["modules"]] == [m.id for m in example_spec.modules]
    assert [d["id"] for d in doc["domains"]] == [d.id for d in example_spec.domains]
    assert len(doc["channels"]) == len(example_spec.channels)
    assert doc["constraints"] == json.loads(
        json.dumps(constraints_to_doc(example_constraints, example_spec))
    )


def test_post_run_baseline_is_all_untrusted(client):
    res = client.post("/runs", json={"enabled_configs": ["TRUSTED", "UNTRUSTED"]})
    assert res.status_code == 200
    doc = res.json()
    assert set(doc["result"]["best"].values()) == {"UNTRUSTED"}
    assert doc["eval"]["feasible"] is True
    assert doc["run_id"] == 0


def test_run_lifecycle(client):
    created = client.post("/runs", json={}).json()
    rid = created["run_id"]
    listed = client.get("/runs").json()
    assert any(r["run_id"] == rid for r in listed)
    fetched = client.get(f"/runs/{rid}")
    assert fetched.status_code == 200
    assert fetched.json() == created
    assert client.delete(f"/runs/{rid}").status_code == 200
    assert client.get(f"/runs/{rid}").status_code == 404
    assert client.delete(f"/runs/{rid}").status_code == 404


def test_malformed_body_is_400_with_field(client):
    res = client.post("/runs", json={"constraints": {"p_total_max": -1}})
    assert res.status_code == 400
    assert "p_total_max" in res.json()["detail"]

    res = client.post("/runs", json={"enabled_configs": ["TRUSTED"]})
    assert res.status_code == 400  # UNTRUSTED missing

    res = client.post("/runs", json={"enabled_configs": ["NOPE"]})
    assert res.status_code == 400

    res = client.post(
        "/runs", content=b"{not json", headers={"content-type": "application/json"}
    )
    assert res.status_code == 400

    res = client.post("/runs", json=[1, 2, 3])
    assert res.status_code == 400


def test_api_matches_cli_run(client, example_spec, example_constraints):
    api_doc = client.post("/runs", json={}).json()
    record = run_once(example_spec, example_constraints)
    cli_doc = record.to_doc(example_spec)
    assert api_doc["eval"] == json.loads(json.dumps(cli_doc["eval"]))
    assert api_doc["result"] == json.loads(json.dumps(cli_doc["result"]))


def test_unknown_run_404(client):
    assert client.get("/runs/99999").status_code == 404


def test_placement_locks_in_request_body(client, example_spec, example_constraints):
    cdoc = constraints_to_doc(example_constraints, example_spec)
    cdoc["p_total_max"] = example_constraints.p_total_max * 1.5
    res = client.post(
        "/runs",
        json={"constraints": cdoc, "placements": {"jtag": "UNTRUSTED_KEY_LOCKED"}},
    )
    assert res.status_code == 200
    doc = res.json()
    assert doc["result"]["best"]["jtag"] == "UNTRUSTED_KEY_LOCKED"
    assert doc["eval"]["feasible"] is True

    assert (
        client.post("/runs", json={"placements": {"ghost": "TRUSTED"}}).status_code
        == 400
    )
    assert (
        client.post("/runs", json={"placements": {"jtag": "NOPE"}}).status_code == 400
    )

#!/usr/bin/env python3
"""Record request/response pairs from the service for the frontend tests.

Writes frontend/tests/fixtures/recorded_service.json with the three standard
gadgets (valid) and the bare-edge gadget (invalid with a 4-node path).
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from fastapi.testclient import TestClient

from redukt.service import create_app

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def load(name):
    return json.loads((FIXTURES / name).read_text())


def main() -> int:
    client = TestClient(create_app(max_n=6, log_path=None))
    cases = [
        (
            "triangle-vc-fvs",
            {
                "gadget": load("vc_fvs_triangle_gadget.json"),
                "source_problem": {"kind": "vertex-cover", "k": 2},
                "target_problem": {"kind": "feedback-vertex-set", "k": 2},
            },
        ),
        (
            "path-hamcycle",
            {
                "gadget": load("hamcycle_path_gadget.json"),
                "source_problem": {"kind": "hamcycle-d"},
                "target_problem": {"kind": "hamcycle-u"},
            },
        ),
        (
            "global-clique",
            {
                "gadget": load("clique_global_gadget.json"),
                "source_problem": {"kind": "clique", "k": 3},
                "target_problem": {"kind": "clique", "k": 4},
            },
        ),
        (
            "bare-edge-vc-fvs",
            {
                "gadget": load("bare_edge_gadget.json"),
                "source_problem": {"kind": "vertex-cover", "k": 1},
                "target_problem": {"kind": "feedback-vertex-set", "k": 1},
            },
        ),
    ]
    recorded = {}
    for name, body in cases:
        r = client.post("/api/validate", json=body)
        assert r.status_code == 200, (name, r.status_code, r.text)
        verdict = r.json()
        entry = {"request": body, "response": verdict}
        if verdict.get("status") == "invalid":
            apply_r = client.post(
                "/api/apply",
                json={"gadget": body["gadget"], "structure": verdict["counterexample"]},
            )
            assert apply_r.status_code == 200
            entry["applied_counterexample"] = apply_r.json()
        recorded[name] = entry
    out = ROOT / "frontend" / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    (out / "recorded_service.json").write_text(json.dumps(recorded, indent=2, sort_keys=True) + "\n")
    gadget_docs = {
        "triangle": load("vc_fvs_triangle_gadget.json"),
        "hamcycle": load("hamcycle_path_gadget.json"),
        "global": load("clique_global_gadget.json"),
        "bare_edge": load("bare_edge_gadget.json"),
    }
    (out / "gadget_docs.json").write_text(json.dumps(gadget_docs, indent=2, sort_keys=True) + "\n")
    print("recorded", len(recorded), "cases ->", out / "recorded_service.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())

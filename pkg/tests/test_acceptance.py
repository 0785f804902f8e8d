"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line. Runs headless against the HTTP surface and the library;
no frontend involved.
"""

import itertools
import json
import os
import random
import signal
import socket
import string
import subprocess
import sys
import time
import xml.etree.ElementTree as ET
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

import httpx
from fastapi.testclient import TestClient

from indicards.api import create_app
from indicards.errors import CsvError, CsvTooLargeError
from indicards.ingest import parse_csv, serialize_csv
from indicards.model import (
    DataSignature,
    IdiomType,
    TaskType,
    parse_card,
    serialize_card,
)
from indicards.recommend import recommend_idioms
from indicards.workflow import (
    SetBinding,
    SetIdiom,
    SetTable,
    SetTask,
    apply_step,
    finalize,
    start_draft,
)

from genutil import (
    binding_for,
    rand_card,
    rand_chart_spec,
    rand_goal_question,
    table_for_idiom,
)
from test_recommend import oracle_recommend, raw_rules

GQ_BODY = {
    "goal": "monitor grades",
    "question": "how are grades distributed?",
    "idea": "",
    "requirements": [
        {"name": "student", "dtype": "categorical"},
        {"name": "grade", "dtype": "numerical"},
    ],
}


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"[ACCEPTANCE] {name}: PASS")


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def start_server(data_dir: Path, port: int) -> subprocess.Popen:
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "indicards",
            "--port",
            str(port),
            "--data-dir",
            str(data_dir),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    deadline = time.monotonic() + 20
    while time.monotonic() < deadline:
        try:
            if httpx.get(f"{base}/api/health", timeout=1).status_code == 200:
                return proc
        except httpx.HTTPError:
            pass
        if proc.poll() is not None:
            raise RuntimeError("server exited during startup")
        time.sleep(0.1)
    proc.kill()
    raise RuntimeError("server did not become ready")


class TestScenarioA:
    """Study task 1: a student charts the distribution of grades, end to end
    over live HTTP, in under five seconds."""

    def test_scenario_a(self, tmp_path):
        with criterion("scenario A (grade distribution over HTTP, < 5 s)"):
            port = free_port()
            proc = start_server(tmp_path / "data", port)
            base = f"http://127.0.0.1:{port}"
            try:
                with httpx.Client(base_url=base, timeout=10) as http:
                    started = time.monotonic()

                    draft = http.post("/api/drafts", json=GQ_BODY)
                    assert draft.status_code == 201
                    did = draft.json()["id"]

                    r = http.post(
                        f"/api/drafts/{did}/steps",
                        json={"type": "set_task", "task": "distribution"},
                    )
                    assert r.status_code == 200

                    recs = http.get(f"/api/drafts/{did}/recommendations").json()[
                        "recommendations"
                    ]
                    bar = next(x for x in recs if x["idiom"] == "bar_chart")
                    assert bar["task_fit"] is True
                    assert bar["data_fit"] is True
                    assert bar["rank"] == 1

                    students = [f"student {c}" for c in string.ascii_uppercase[:10]]
                    grades = [85, 92, 77, 68, 95, 73, 88, 81, 64, 90]
                    csv_body = "student,grade\n" + "\n".join(
                        f"{s},{g}" for s, g in zip(students, grades)
                    )
                    r = http.post(
                        f"/api/drafts/{did}/table:upload",
                        files={"file": ("grades.csv", csv_body.encode(), "text/csv")},
                    )
                    assert r.status_code == 200
                    assert r.json()["table"]["row_count"] == 10

                    r = http.post(
                        f"/api/drafts/{did}/steps",
                        json={"type": "set_idiom", "idiom": "bar_chart"},
                    )
                    assert r.status_code == 200
                    r = http.post(
                        f"/api/drafts/{did}/steps",
                        json={
                            "type": "set_binding",
                            "binding": {
                                "x_column": "student",
                                "y_columns": ["grade"],
                                "labels": {"title": "", "x_label": "", "y_label": ""},
                            },
                        },
                    )
                    assert r.status_code == 200

                    r = http.post(
                        f"/api/drafts/{did}/finalize",
                        json={"name": "Grade distribution"},
                    )
                    assert r.status_code == 201
                    card_id = r.json()["id"]

                    spec = http.get(f"/api/cards/{card_id}/chart-spec").json()
                    assert spec["categories"] == students
                    assert spec["series"] == [
                        {"name": "grade", "points": [float(g) for g in grades]}
                    ]

                    elapsed = time.monotonic() - started
                    assert elapsed < 5.0, f"scenario took {elapsed:.2f}s"
            finally:
                proc.kill()
                proc.wait()


class TestScenarioB:
    """Data-driven path: CSV upload with automatic type detection and
    axis candidates split by column type."""

    def test_scenario_b(self, tmp_path):
        with criterion("scenario B (data-driven CSV upload and axis candidates)"):
            client = TestClient(create_app(tmp_path / "data"))
            gq = dict(
                GQ_BODY,
                requirements=[
                    {"name": "name", "dtype": "categorical"},
                    {"name": "quiz", "dtype": "numerical"},
                ],
            )
            did = client.post("/api/drafts", json=gq).json()["id"]
            csv_body = b"name,quiz,forum\nAda,9,14\nBo,7,3\nCy,8,11"
            r = client.post(
                f"/api/drafts/{did}/table:upload",
                files={"file": ("activity.csv", csv_body, "text/csv")},
            )
            assert r.status_code == 200
            dtypes = [c["dtype"] for c in r.json()["table"]["columns"]]
            assert dtypes == ["categorical", "numerical", "numerical"]

            r = client.get(
                f"/api/drafts/{did}/axis-candidates", params={"idiom": "bar_chart"}
            )
            assert r.json()["x"] == ["name"]
            assert r.json()["y"] == ["quiz", "forum"]


class TestRulesOracle:
    """recommend_idioms must agree with an independently written brute-force
    evaluator on the whole small signature space."""

    def test_oracle_equivalence(self, rules):
        with criterion("rules-oracle equivalence (tasks x signatures <= 3)"):
            raw = raw_rules()
            cases = 0
            for task in TaskType:
                for cat, num, order in itertools.product(range(4), repeat=3):
                    sig = DataSignature(
                        categorical=cat, numerical=num, categorical_ordered=order
                    )
                    got = [
                        (r.idiom.value, r.task_fit, r.data_fit, r.rank)
                        for r in recommend_idioms(task, sig, rules)
                    ]
                    expected = oracle_recommend(task.value, sig.to_dict(), raw)
                    assert got == expected, (task, sig)
                    cases += 1
            assert cases == 7 * 64


class TestWorkflowCommutativity:
    """Every step order (binding last) finalizes to the same card, over at
    least 1000 generated tuples."""

    def test_commutativity(self, rules):
        with criterion("workflow commutativity (>= 1000 tuples)"):
            r = random.Random(2024)
            tuples = 0
            while tuples < 1000:
                idiom = r.choice(list(IdiomType))
                table = table_for_idiom(r, idiom, rules, rows=r.randint(1, 6))
                binding = binding_for(r, idiom, table, rules)
                if binding is None:
                    continue
                task = r.choice([None, *TaskType])
                steps = [SetIdiom(idiom), SetTable(table)]
                if task is not None:
                    steps.append(SetTask(task))
                gq = rand_goal_question(r, r.randint(2, 3))
                payloads = set()
                for perm in itertools.permutations(steps):
                    draft = start_draft(gq)
                    for step in perm:
                        draft = apply_step(draft, step, rules)
                    draft = apply_step(draft, SetBinding(binding), rules)
                    card = finalize(draft, "commutativity probe", rules)
                    payload = card.to_dict()
                    for key in ("id", "created_at", "updated_at"):
                        payload.pop(key)
                    payloads.add(json.dumps(payload, sort_keys=True))
                assert len(payloads) == 1, (idiom, task)
                tuples += 1


class TestRoundTrips:
    def test_card_json_round_trip(self, rules):
        with criterion("card JSON round-trip (>= 1000 cards)"):
            r = random.Random(11)
            for _ in range(1000):
                card = rand_card(r, rules)
                text = serialize_card(card)
                again = parse_card(text)
                assert again == card
                assert serialize_card(again) == text

    def test_csv_round_trip(self, rules):
        with criterion("CSV round-trip (>= 1000 tables)"):
            r = random.Random(12)
            for _ in range(1000):
                idiom = r.choice(list(IdiomType))
                table = table_for_idiom(r, idiom, rules, rows=r.randint(0, 8))
                back = parse_csv(serialize_csv(table))
                assert back.column_names() == table.column_names()
                assert back.rows() == table.rows()

    def test_csv_fuzz_never_crashes(self):
        with criterion("CSV fuzz safety (>= 10000 inputs)"):
            r = random.Random(13)
            printable = string.printable
            for i in range(10_000):
                mode = i % 4
                if mode == 0:
                    blob = bytes(r.randrange(256) for _ in range(r.randrange(0, 120)))
                elif mode == 1:
                    blob = "".join(
                        r.choice(printable) for _ in range(r.randrange(0, 160))
                    ).encode()
                elif mode == 2:
                    rows = [
                        ",".join(
                            r.choice(['x', '1', '"', '', 'a,b', '\n', 'ü'])
                            for _ in range(r.randrange(0, 5))
                        )
                        for _ in range(r.randrange(0, 6))
                    ]
                    blob = "\n".join(rows).encode()
                else:
                    blob = "".join(
                        chr(r.randrange(32, 0x2FF)) for _ in range(r.randrange(0, 80))
                    ).encode()
                try:
                    parse_csv(blob)
                except (CsvError, CsvTooLargeError):
                    pass


class TestMinimumOfTwo:
    def test_requirement_threshold_over_http(self, tmp_path):
        with criterion("minimum-of-two enforcement at POST /api/drafts"):
            client = TestClient(create_app(tmp_path / "data"))
            for count in (0, 1):
                body = dict(GQ_BODY, requirements=GQ_BODY["requirements"][:count])
                r = client.post("/api/drafts", json=body)
                assert r.status_code == 400
                assert any(
                    d["path"] == "requirements" and "at least 2" in d["message"]
                    for d in r.json()["details"]
                )
            r = client.post("/api/drafts", json=GQ_BODY)
            assert r.status_code == 201


class TestStoreDurability:
    """25 cards must survive a SIGKILL and restart of the real service, and
    stale-version updates must be refused with 409."""

    def test_kill_and_restart(self, tmp_path, rules):
        with criterion("store durability across kill/restart + 409 on stale update"):
            data_dir = tmp_path / "data"
            port = free_port()
            proc = start_server(data_dir, port)
            base = f"http://127.0.0.1:{port}"
            r = random.Random(99)
            posted = {}
            try:
                with httpx.Client(base_url=base, timeout=10) as http:
                    for _ in range(25):
                        card = replace(rand_card(r, rules), version=1)
                        payload = json.loads(serialize_card(card))
                        resp = http.post("/api/cards", json=payload)
                        assert resp.status_code == 201
                        posted[card.id] = payload
            finally:
                os.kill(proc.pid, signal.SIGKILL)
                proc.wait()

            proc = start_server(data_dir, port)
            try:
                with httpx.Client(base_url=base, timeout=10) as http:
                    listed = http.get("/api/cards").json()["cards"]
                    assert len(listed) == 25
                    assert {s["id"] for s in listed} == set(posted)
                    for card_id, payload in posted.items():
                        assert http.get(f"/api/cards/{card_id}").json() == payload

                    victim = next(iter(posted.values()))
                    ok = http.put(f"/api/cards/{victim['id']}", json=victim)
                    assert ok.status_code == 200  # expected version 1 matches
                    stale = http.put(f"/api/cards/{victim['id']}", json=victim)
                    assert stale.status_code == 409
                    assert stale.json()["current_version"] == 2
            finally:
                proc.kill()
                proc.wait()


class TestSvgExport:
    def test_generated_specs(self):
        with criterion("SVG export (100 bar/line/pie specs)"):
            from indicards.svg import export_chart_svg

            r = random.Random(7)
            idioms = [IdiomType.BAR_CHART, IdiomType.LINE_CHART, IdiomType.PIE_CHART]
            for i in range(100):
                spec = rand_chart_spec(r, idioms[i % 3], allow_nulls=False)
                svg = export_chart_svg(spec)
                root = ET.fromstring(svg)  # well-formed XML
                points = sum(1 for s in spec.series for p in s.points if p is not None)
                drawn = [el for el in root.iter() if el.get("class") == "pt"]
                assert len(drawn) == points, spec.idiom
                assert export_chart_svg(spec) == svg

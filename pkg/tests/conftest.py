from __future__ import annotations

import json
import time
from types import SimpleNamespace
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def _load_schemas():
    import jsonschema
    from referencing import Registry, Resource

    pkg = resources.files("arrange") / "schemas"
    docs = {}
    for entry in pkg.iterdir():
        if entry.name.endswith(".schema.json"):
            doc = json.loads(entry.read_text())
            docs[entry.name[: -len(".schema.json")]] = doc
    registry = Registry().with_resources(
        (doc["$id"], Resource.from_contents(doc)) for doc in docs.values())

    def validate(instance, name):
        cls = jsonschema.validators.validator_for(docs[name])
        cls(docs[name], registry=registry).validate(instance)

    return validate


@pytest.fixture(scope="session")
def validate_schema():
    return _load_schemas()


@pytest.fixture(scope="session")
def nk14(tmp_path_factory):
    """The (14_4) search run once per session through the CLI.

    Returns the parsed JSON, the arrangements, the wall time and the file
    the JSON was written to (usable as ``--in`` for later commands).
    """
    from arrange.arrangement import Arrangement
    from arrange.cli import run

    path = tmp_path_factory.mktemp("nk14") / "nk14.json"
    t0 = time.perf_counter()
    code = run(["gen", "nk-search", "--n", "14", "--k", "4", "--json", "--out", str(path)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    data = json.loads(path.read_text())
    arrs = [Arrangement.from_dict(a) for a in data["arrangements"]]
    return SimpleNamespace(data=data, arrangements=arrs, elapsed=elapsed, path=path)


# one PASS/FAIL line per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    num, title = props["criterion"]
    detail = props.get("detail", "")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        if report.skipped:
            status = "SKIP"
        _CRITERIA[num] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[num]
        line = f"criterion {num:2d}: {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)

import subprocess
import sys

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance(request):
    """Call with (ok, detail); records one PASS/FAIL line per criterion."""
    def record(ok: bool, detail: str = ""):
        name = request.node.name
        line = f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
        print(line)
        _ACCEPTANCE.append(line)
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def verify_all_runs(tmp_path_factory):
    """Two independent `verify all --json` runs, as (exit codes, file bytes)."""
    d = tmp_path_factory.mktemp("verify")
    codes, blobs = [], []
    for i in range(2):
        path = d / f"report{i}.json"
        proc = subprocess.run([sys.executable, "-m", "evenlat.cli", "verify", "all",
                               "--json", str(path), "--quiet"], capture_output=True, text=True)
        codes.append(proc.returncode)
        blobs.append(path.read_bytes() if path.exists() else b"")
    return codes, blobs

import pytest

from endslab.explore import explore
from endslab.groups import make_group


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible pass/fail line per acceptance criterion."""
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("test_criterion_", 1)[1]
                outcomes[name] = status
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcomes, key=lambda n: int(n.split("_", 1)[0])):
        verdict = "PASS" if outcomes[name] == "passed" else "FAIL"
        number, label = name.split("_", 1)
        terminalreporter.write_line(
            f"ACCEPTANCE {number} ({label.replace('_', ' ')}): {verdict}")


@pytest.fixture(scope="session")
def z_oracle():
    return make_group({"family": "z"})


@pytest.fixture(scope="session")
def z_table_30(z_oracle):
    return explore(z_oracle, 30)


@pytest.fixture(scope="session")
def z2_oracle():
    return make_group({"family": "z_pow", "k": 2})


@pytest.fixture(scope="session")
def z2_table_22(z2_oracle):
    return explore(z2_oracle, 22)


@pytest.fixture(scope="session")
def f2_oracle():
    return make_group({"family": "free", "k": 2})


@pytest.fixture(scope="session")
def f2_table_8(f2_oracle):
    return explore(f2_oracle, 8)


@pytest.fixture(scope="session")
def lamp_oracle():
    return make_group({"family": "lamplighter", "m": 2})


@pytest.fixture(scope="session")
def dihedral_oracle():
    return make_group({"family": "dihedral_inf"})

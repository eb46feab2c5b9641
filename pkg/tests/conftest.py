import pytest

from dpcbound.scenario import ChannelScenario, GainDistribution, MarginalFamily, NoiseModel

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance line, then assert it."""

    def _record(label: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture
def awgn():
    """gain {(1, 1)}, Z ~ N(0,1), N = W ~ N(0,1), power 1."""
    return ChannelScenario(
        gain=GainDistribution([(1.0, 1.0)]),
        interference=MarginalFamily.gaussian(0, 1),
        noise=NoiseModel(0.0, 0.0, MarginalFamily.gaussian(0, 1)),
        power=1.0,
    )

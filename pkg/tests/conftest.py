import numpy as np
import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, title): tags a test as one numbered acceptance check",
    )
    config._acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, title = marker.args
    results = item.config._acceptance_results
    if report.when == "call" or (report.when == "setup" and not report.passed):
        results[num] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance checks")
    for num in sorted(results):
        title, outcome = results[num]
        word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(
            outcome, outcome.upper()
        )
        terminalreporter.write_line(f"[{word}] {num}. {title}")


@pytest.fixture
def square_image():
    """64x64 black field with a centered 32x32 white square (rows/cols 16..47)."""
    image = np.zeros((64, 64))
    image[16:48, 16:48] = 255.0
    return image


def square_boundary_points() -> np.ndarray:
    """Pixel coordinates of the white square's outline in `square_image`."""
    points = set()
    for c in range(16, 48):
        points.add((16, c))
        points.add((47, c))
    for r in range(16, 48):
        points.add((r, 16))
        points.add((r, 47))
    return np.array(sorted(points))

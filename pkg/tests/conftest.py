import allure
import pytest
from _pytest.fixtures import FixtureRequest
from _pytest.nodes import Item

from utilities.report_helper import ReportHelper, ReportRecord


@pytest.fixture(scope="session")
def report_helper():
    """JSON report renderer without elapsed times, so rendered records compare byte for byte.

    Yields:
        ReportHelper: Shared by every test that renders records.
    """
    yield ReportHelper("json", include_timings=False)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: Item, call):
    """Stores each phase report on the item as ``rep_setup``, ``rep_call`` or ``rep_teardown``.

    The ``records`` fixture reads ``rep_call`` to decide whether to attach a failure summary.
    """
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)


@pytest.fixture(scope="function")
def records(request: FixtureRequest):
    """Collects the ReportRecords a test produces and attaches them to the allure report.

    Records are always attached as JSON; on failure a text summary is attached too.

    Args:
        request: Pytest request object.

    Yields:
        list[ReportRecord]: Records appended by the test.
    """
    collected: list[ReportRecord] = []
    yield collected
    if not collected:
        return
    ReportHelper.attach(collected, name=f"{request.node.name} records")
    if hasattr(request.node, "rep_call") and request.node.rep_call.failed:
        allure.attach(
            body=ReportHelper("text", include_timings=False).render(collected),
            name="Records on failure",
            attachment_type=allure.attachment_type.TEXT,
        )

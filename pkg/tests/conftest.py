import pytest

from aground.cases import case_fixture
from aground.session import Evidence, add_evidence, create_session


@pytest.fixture(scope="session")
def case1_session():
    fx = case_fixture("case1")
    return create_session(fx["ship"], fx["model"], fx["incident"], session_id="case1")


@pytest.fixture(scope="session")
def scenario_b_session():
    fx = case_fixture("scenarioB")
    session = create_session(fx["ship"], fx["model"], fx["incident"], session_id="scenarioB")
    for node, value in fx["evidence"]:
        add_evidence(session, Evidence(node=node, value=value, source="fixture"))
    return session


@pytest.fixture(scope="session")
def scenario_b_blank():
    """Scenario-B configuration with an empty evidence log (shares the compiled
    tree with scenario_b_session through the structure-hash cache)."""
    fx = case_fixture("scenarioB")
    return create_session(fx["ship"], fx["model"], fx["incident"], session_id="scenarioB-blank")

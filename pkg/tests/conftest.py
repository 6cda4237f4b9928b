import pytest

import signalkg as sk


@pytest.fixture(scope="session")
def building_text() -> str:
    return sk.demo_kb_path("building").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def building_kb(building_text):
    return sk.parse_kb(building_text)


@pytest.fixture(scope="session")
def building_bn(building_kb):
    return sk.compile_bn(building_kb)


@pytest.fixture(scope="session")
def chain_text() -> str:
    return sk.demo_kb_path("chain").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def chain_kb(chain_text):
    return sk.parse_kb(chain_text)


@pytest.fixture(scope="session")
def chain_bn(chain_kb):
    return sk.compile_bn(chain_kb)


@pytest.fixture
def glass_evidence(building_bn):
    return {sk.NodeId("detected", ("mic-1", "glass")): True}

import pytest

from etacong.qseries import mod_domain, named_series


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run long sweeps (multi-minute)"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# shared large series, built once per session

@pytest.fixture(scope="session")
def eobar_mod2():
    # covers the 25n+5j+8 family grid up to n=4000 and parity checks to 1e5
    return named_series("eobar", 100_028, mod_domain(2))


@pytest.fixture(scope="session")
def eobar_mod8():
    # covers the density scan of EObar(8n+6) to X=1e5
    return named_series("eobar", 800_006, mod_domain(8))


@pytest.fixture(scope="session")
def eobar_exact_20k():
    return named_series("eobar", 20_001)

import pytest

from techcycle.config import default_data_dir, load_reference
from techcycle.report import load_dataset


@pytest.fixture(scope="session")
def data_dir():
    return default_data_dir()


@pytest.fixture(scope="session")
def dataset(data_dir):
    return load_dataset(
        data_dir / "riaa_revenue.csv",
        data_dir / "cpi.csv",
        data_dir / "groups.cfg",
        base_year=2018,
    )


@pytest.fixture(scope="session")
def reference(data_dir):
    return load_reference(data_dir / "reference.cfg")

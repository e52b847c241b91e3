import pytest

from rigidacm.fieldlinalg import QQ, PrimeField


@pytest.fixture(scope="session")
def gf():
    return PrimeField(1_000_003)


@pytest.fixture(params=["prime", "rational"], scope="session")
def any_field(request):
    return PrimeField(1_000_003) if request.param == "prime" else QQ

import pytest

from finitekey.protocol import ProtocolSpec


@pytest.fixture
def bb84():
    return ProtocolSpec.bb84()


@pytest.fixture
def six_state():
    return ProtocolSpec.six_state()

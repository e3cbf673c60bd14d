import pytest

from modfa import kernels


@pytest.fixture
def restore_backend():
    """Let a test switch kernel backends without leaking the change."""
    before = kernels.active_backend()
    yield
    kernels.set_backend(before)

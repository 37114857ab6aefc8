from .testing import DATA, MultipleTests, fixture, read_fixture
from .stub import StubProvider

import os
import sys

import pytest

# In-tree runs (ctest) point CREWSIM_EXT_DIR at the directory holding the
# freshly built extension; installed wheels need neither hint.
_ext_dir = os.environ.get("CREWSIM_EXT_DIR")
if _ext_dir:
    sys.path.insert(0, _ext_dir)

_source_dir = os.environ.get(
    "CREWSIM_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", "..")
)
sys.path.insert(0, os.path.join(_source_dir, "python"))


@pytest.fixture
def scenarios_dir():
    return os.path.join(_source_dir, "scenarios")


import os
import sys
from pathlib import Path

import numpy as np
import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
if str(SCRIPTS) not in sys.path:
    sys.path.insert(0, str(SCRIPTS))


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    # PROJPROB_* do ambiente do desenvolvedor (ou de um .env local) não entram nos testes
    for k in list(os.environ):
        if k.startswith("PROJPROB_"):
            monkeypatch.delenv(k, raising=False)
    import common
    monkeypatch.setattr(common, "load_dotenv", lambda *a, **k: False, raising=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def outdir(tmp_path):
    d = tmp_path / "outputs"
    d.mkdir()
    return d

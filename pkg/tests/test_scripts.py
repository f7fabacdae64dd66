import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("name, needle", [
    ("reproduce_tables.py", "(4.7, 3.3)"),
    ("composite_sweep.py", "phi/pi = 0.125"),
    ("nmr_end_to_end.py", "fidelity 0.853553391"),
])
def test_script_runs(name, needle):
    out = subprocess.run([sys.executable, str(SCRIPTS / name)], capture_output=True, text=True, timeout=60)
    assert out.returncode == 0, out.stderr
    assert needle in out.stdout

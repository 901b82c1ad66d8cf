import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from somos_sigma.config import SCHEMAS

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "scripts"))

import export_schemas  # noqa: E402


@pytest.mark.parametrize("group", sorted(SCHEMAS))
def test_schema_files_in_sync(group):
    path = ROOT / "docs" / "schemas" / f"{group}.schema.json"
    assert path.read_text() == export_schemas.render(group)
    jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_schema_accepts_documented_example():
    jsonschema.validate({"alpha": 1, "beta": 1, "seeds": [1, 1, 1, 1], "start": -5, "stop": 16}, SCHEMAS["somos4"])
    jsonschema.validate({"curve": ["1", "-4", 0, 0, 0], "d0": {"U": [0, 1, 1], "V": [1]}, "point": [-1, 1]}, SCHEMAS["g2"])
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"seeds": ["1.5", 1, 1, 1]}, SCHEMAS["somos4"])


@pytest.mark.parametrize(
    "script,args",
    [
        ("genus2_fit.py", ["--radius", "12"]),
        ("somos4_closed_form.py", ["--stop", "8"]),
        ("hh_orbit.py", ["--steps", "5"]),
        ("reproduce_all.py", ["--only", "1,3"]),
    ],
)
def test_scripts_run(script, args):
    proc = subprocess.run([sys.executable, str(ROOT / "scripts" / script), *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout

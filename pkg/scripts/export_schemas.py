"""Write the CLI input schemas to docs/schemas/<group>.schema.json."""

import argparse
import json
from pathlib import Path

from somos_sigma.config import SCHEMAS

DEFAULT_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def render(group: str) -> str:
    doc = {"$schema": "https://json-schema.org/draft/2020-12/schema", **SCHEMAS[group]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DEFAULT_DIR)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for group in SCHEMAS:
        path = args.out / f"{group}.schema.json"
        path.write_text(render(group))
        print(path)


if __name__ == "__main__":
    main()

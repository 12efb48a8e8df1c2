"""Validates every shipped config against configs/schema.json."""
import json
import pathlib
import sys

import jsonschema

configs = pathlib.Path(sys.argv[1])
schema = json.loads((configs / "schema.json").read_text())
jsonschema.Draft7Validator.check_schema(schema)
validator = jsonschema.Draft7Validator(schema)
failed = 0
for path in sorted(configs.glob("*.json")):
    if path.name == "schema.json":
        continue
    errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=str)
    for e in errors:
        print(f"{path.name}: {'/'.join(map(str, e.path))}: {e.message}")
    failed += bool(errors)
print(f"{failed} invalid config(s)")
sys.exit(1 if failed else 0)

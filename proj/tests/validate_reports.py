"""Runs the tockcheck binary in every JSON mode and validates the output."""
import json
import subprocess
import sys

import jsonschema

binary, schema_path, model = sys.argv[1:4]
with open(schema_path) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)
jsonschema.Draft202012Validator.check_schema(schema)

runs = [
    (["check", model], 0),
    (["check", model, "--core-int", "-1..1", "--jobs", "3", "--seed", "7"], 1),
    (["check", model, "--max-states", "50"], 2),
    (["stats", model], 0),
    (["trace", model, "A5", "--core-int", "-1..1"], 0),
    (["trace", model, "A7"], 1),
]
failures = 0
for args, expected in runs:
    proc = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
    label = " ".join(args[:1] + args[2:])
    if proc.returncode != expected:
        print(f"FAIL {label}: exit {proc.returncode}, expected {expected}\n{proc.stderr}")
        failures += 1
        continue
    errors = list(validator.iter_errors(json.loads(proc.stdout)))
    for e in errors:
        print(f"FAIL {label}: {e.json_path}: {e.message}")
    failures += bool(errors)
    if not errors:
        print(f"ok   {label}")

# The schema must reject a malformed report.
if validator.is_valid({"command": "check", "results": []}):
    print("FAIL schema accepts a report without required fields")
    failures += 1
sys.exit(1 if failures else 0)

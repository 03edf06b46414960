# Copyright 2026 The qref Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Validates sample configs, resolved configs and emitted strategies against the CLI's JSON schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    cli, config_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = json.loads(subprocess.run([cli, "schema", "all"], check=True, capture_output=True, text=True).stdout)
    config_validator = jsonschema.Draft202012Validator(schemas["config"])
    strategy_validator = jsonschema.Draft202012Validator(schemas["strategy"])
    jsonschema.Draft202012Validator.check_schema(schemas["config"])
    jsonschema.Draft202012Validator.check_schema(schemas["strategy"])

    failures = 0
    for path in sorted(config_dir.glob("*.json")):
        config = json.loads(path.read_text())
        errors = list(config_validator.iter_errors(config))
        with tempfile.TemporaryDirectory() as out:
            run = subprocess.run([cli, "run", "--config", str(path), "--rounds", "10", "--out", out],
                                 capture_output=True, text=True)
            if run.returncode != 0:
                errors.append(f"run exited {run.returncode}: {run.stderr.strip()}")
            else:
                summary = json.loads((pathlib.Path(out) / "summary.json").read_text())
                errors += [f"resolved: {e.message}" for e in config_validator.iter_errors(summary["config"])]
                errors += [f"strategy: {e.message}" for e in strategy_validator.iter_errors(summary["config"]["strategy"])]
        for e in errors:
            print(f"FAIL {path.name}: {getattr(e, 'message', e)}")
        if not errors:
            print(f"PASS {path.name}")
        failures += bool(errors)

    bad = {"rounds": 0, "strategy": {"type": "honest"}}
    if config_validator.is_valid(bad):
        print("FAIL schema accepts rounds = 0")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

"""Run the ssg CLI over the fixtures and validate every JSON report against the schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    exe, fixtures, schema_path = sys.argv[1], Path(sys.argv[2]), sys.argv[3]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    forest = str(fixtures / "forest.ssg")
    lamp = str(fixtures / "lamplighter.ssg")
    bundle = str(fixtures / "bundle.ssg")

    with tempfile.TemporaryDirectory() as tmp:
        broken = Path(tmp) / "broken.ssg"
        text = (fixtures / "forest.ssg").read_text().replace("rule a: e3 -> e6 | b\n", "")
        broken.write_text(text)

        runs = [
            (["validate", forest, "--json"], 0),
            (["validate", bundle, "--json"], 0),
            (["validate", str(broken), "--json"], 1),
            (["orbits", bundle, "--level", "2"], 0),
            (["orbits", forest, "--level", "3"], 0),
            (["transitive", forest, "--up-to", "3"], 0),
            (["transitive", bundle, "--up-to", "3"], 0),
            (["trace", forest, "--lincomb", "1*u"], 0),
            (["trace", forest, "--lincomb", "(0.5+1i)*c b a - 2*v", "--max-level", "5"], 0),
            (["trace", lamp, "--lincomb", "a + b^-1", "--max-level", "6"], 0),
            (["norm", forest, "--lincomb", "a + a^-1", "--max-level", "4"], 0),
            (["check", forest, "--depth", "3", "--samples", "20"], 0),
            (["check", bundle, "--depth", "3", "--samples", "20"], 0),
            (["recursion", forest, "--word", "b", "--json"], 0),
            (["recursion", lamp, "--word", "a b", "--iterate", "2", "--json"], 0),
        ]

        failures = 0
        for args, expected_code in runs:
            proc = subprocess.run([exe, *args], capture_output=True, text=True)
            label = " ".join(args[:1] + [Path(args[1]).name] + args[2:])
            if proc.returncode != expected_code:
                print(f"FAIL {label}: exit {proc.returncode}, expected {expected_code}\n{proc.stderr}")
                failures += 1
                continue
            try:
                validator.validate(json.loads(proc.stdout))
            except json.JSONDecodeError as err:
                print(f"FAIL {label}: not JSON ({err})")
                failures += 1
                continue
            except jsonschema.ValidationError as err:
                print(f"FAIL {label}: {err.json_path}: {err.message}")
                failures += 1
                continue
            print(f"ok   {label}")

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

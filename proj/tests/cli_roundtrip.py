"""Runs every sample config through the cergm binary and checks the outputs.

usage: cli_roundtrip.py BINARY SCHEMA_DIR CONFIG_DIR
"""

import csv
import io
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def run(binary, command, config, *extra):
    return subprocess.run([binary, command, "--config", str(config), *extra], capture_output=True, text=True)


def main():
    binary, schema_dir, config_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    config_schema = json.loads((schema_dir / "run_config.schema.json").read_text())
    result_schema = json.loads((schema_dir / "result.schema.json").read_text())
    failures = []

    def check(ok, what):
        print(("ok   " if ok else "FAIL ") + what)
        if not ok:
            failures.append(what)

    configs = sorted(config_dir.glob("*.json"))
    check(len(configs) >= 7, f"found {len(configs)} sample configs")
    commands_seen = set()
    for path in configs:
        doc = json.loads(path.read_text())
        command = doc["command"]
        commands_seen.add(command)
        try:
            jsonschema.validate(doc, config_schema)
            check(True, f"{path.name}: config matches schema")
        except jsonschema.ValidationError as e:
            check(False, f"{path.name}: config schema: {e.message}")

        first = run(binary, command, path)
        check(first.returncode == 0, f"{path.name}: exit status {first.returncode} {first.stderr.strip()}")
        if first.returncode != 0:
            continue
        result = json.loads(first.stdout)
        try:
            jsonschema.validate(result, result_schema)
            check(True, f"{path.name}: result matches schema")
        except jsonschema.ValidationError as e:
            check(False, f"{path.name}: result schema: {e.message} at {list(e.absolute_path)}")
        check(result["config"]["command"] == command, f"{path.name}: resolved config echoed")
        check("runtime_ms" not in result, f"{path.name}: no runtime_ms without --timing")

        second = run(binary, command, path)
        check(second.stdout == first.stdout, f"{path.name}: byte-identical rerun")

        table = run(binary, command, path, "--format", "csv")
        rows = list(csv.reader(io.StringIO(table.stdout)))
        check(table.returncode == 0 and len(rows) >= 2 and all(len(r) == len(rows[0]) for r in rows),
              f"{path.name}: csv output is rectangular")

    check(commands_seen == {"exact", "variational", "bounds", "sample", "integrate", "compare", "scan"},
          "every command has a sample config")

    exact = config_dir / "exact_edge_triangle.json"
    variational = config_dir / "variational.json"
    timed = run(binary, "exact", exact, "--timing")
    check(timed.returncode == 0 and json.loads(timed.stdout).get("runtime_ms", -1) >= 0, "--timing adds runtime_ms")

    with tempfile.TemporaryDirectory() as tmp:
        target = pathlib.Path(tmp) / "out.json"
        written = run(binary, "exact", exact, "--output", str(target))
        check(written.returncode == 0 and written.stdout == "" and json.loads(target.read_text())["command"] == "exact",
              "--output writes the artifact to a file")

    overridden = run(binary, "exact", exact, "--set", "model.N=4", "model.zetas=[0,0]")
    check(overridden.returncode == 0 and json.loads(overridden.stdout)["model"]["N"] == 4, "--set overrides")

    cases = [
        ("kappa <= 8 is an invalid config", run(binary, "variational", variational, "--set", "kappa=4"), 2),
        ("unknown key is an invalid config", run(binary, "exact", exact, "--set", "bogus=1"), 2),
        ("missing config file", run(binary, "exact", config_dir / "does_not_exist.json"), 2),
        ("empty window is infeasible",
         run(binary, "exact", exact, "--set", "model.N=3", "model.constraint={\"e\":0.9,\"t\":0.001}"), 3),
        ("sampler on an empty window is infeasible",
         run(binary, "sample", config_dir / "sample.json", "--set", "model.constraint.t=0.001",
             "model.constraint.e=0.51"), 3),
        ("N above the exact gate", run(binary, "exact", exact, "--set", "model.N=9"), 2),
        ("unknown subcommand", subprocess.run([binary, "frobnicate"], capture_output=True, text=True), 2),
    ]
    for name, proc, code in cases:
        check(proc.returncode == code, f"{name}: exit {proc.returncode}, expected {code}")

    compare = json.loads(run(binary, "compare", config_dir / "compare.json").stdout)["result"]
    check(abs(compare["exact"] - 0.23661646365970337) < 1e-12, "compare exact value at zeta = 0")
    check(abs(compare["variational"] - 0.34657359027997264) < 1e-12, "compare variational value at zeta = 0")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

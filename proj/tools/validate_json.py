#!/usr/bin/env python3
"""Validate JSON documents against one of the schemas in schemas/.

usage: validate_json.py SCHEMA_DIR SCHEMA_NAME FILE...
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((path.name, Resource.from_contents(doc)))
    return Registry().with_resources(resources)


def main(argv):
    if len(argv) < 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    schema_dir = pathlib.Path(argv[1])
    schema = json.loads((schema_dir / f"{argv[2]}.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema, registry=registry(schema_dir))
    failed = 0
    for name in argv[3:]:
        try:
            doc = json.loads(pathlib.Path(name).read_text())
        except (OSError, ValueError) as e:
            print(f"{name}: {e}", file=sys.stderr)
            failed += 1
            continue
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            print(f"{name}: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
        failed += bool(errors)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

#!/usr/bin/env python3
"""Walk through the validation workflow on the bundled fixtures: apply the
triangle reduction, shrink it to a bare edge, and show the verdicts."""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from redukt.cookbook import apply_reduction, from_gadget, gadget_spec_from_doc
from redukt.problems import ProblemDef
from redukt.structures import structure_from_doc, structure_to_doc
from redukt.validators import validate

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return json.loads((FIXTURES / name).read_text())


def main() -> int:
    triangle = gadget_spec_from_doc(load("vc_fvs_triangle_gadget.json"))
    bare = gadget_spec_from_doc(load("bare_edge_gadget.json"))
    k2 = structure_from_doc(load("k2.json"))

    print("== triangle gadget applied to a single edge ==")
    image = apply_reduction(from_gadget(triangle), k2)
    print(json.dumps(structure_to_doc(image), indent=2))

    p, p_star = ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1)
    print("\n== triangle gadget verdict ==")
    print(json.dumps(validate(triangle, p, p_star).to_doc(), indent=2))

    print("\n== bare edge gadget verdict ==")
    print(json.dumps(validate(bare, p, p_star).to_doc(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Regenerate the JSON fixtures under fixtures/<family>/<name>.json."""
import json
from pathlib import Path

from tanalg.algebra import relabel
from tanalg.catalog import catalog, nonassoc_loop5, serialize

ROOT = Path(__file__).resolve().parent.parent / "fixtures"

# S3 is stored in a shuffled element order so that parsing has to go
# through an isomorphism search to match the generator
S3_ORDER = [3, 0, 5, 1, 4, 2]


def main() -> None:
    C = catalog()
    loop, witness = nonassoc_loop5()
    files = {
        "symmetric/s3.json": relabel(C["S3"], S3_ORDER, "S3"),
        "nonassoc_loop5/loop5.json": loop.renamed("Loop5"),
        "cyclic_group/z2.json": C["Z2"],
        "cyclic_group/z4.json": C["Z4"],
        "klein4/klein4.json": C["Klein4"],
        "dihedral/d4.json": C["D4"],
        "leftzero_monoid_plus_identity/lz3.json": C["LZ3"],
        "idempotent_monoid2/idem2.json": C["Idem2"],
        "ring_trivial_mul/triv_z3.json": C["TrivZ3"],
    }
    for rel, X in files.items():
        path = ROOT / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize(X))
    # associativity witness of the frozen loop
    (ROOT / "nonassoc_loop5/witness.json").write_text(json.dumps({"triple": list(witness)}) + "\n")
    # Z2 with an out-of-range entry in its multiplication table
    broken = json.loads(serialize(C["Z2"]))
    broken["name"] = "broken"
    broken["operations"]["mul"]["table"][1][0] = 7
    (ROOT / "broken").mkdir(exist_ok=True)
    (ROOT / "broken/broken.json").write_text(json.dumps(broken) + "\n")


if __name__ == "__main__":
    main()

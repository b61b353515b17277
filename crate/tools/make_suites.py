"""Build the geometry manifests used by the test suites.

Conformers come from RDKit ETKDG (v3) with a fixed seed. Each manifest line is
{"id", "smiles", "xyz"} where "xyz" is an inline XYZ block in Angstrom.
"""
import json
import sys
from pathlib import Path

from rdkit import Chem
from rdkit.Chem import AllChem

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "crates" / "core" / "tests" / "data"
SEED = 20231015

SMALL = {
    "h2": ("[H][H]", [("H", 0, 0, 0), ("H", 0, 0, 0.7414)]),
    "h2o": ("O", [("O", 0.0, 0.0, 0.1173), ("H", 0.0, 0.7572, -0.4692), ("H", 0.0, -0.7572, -0.4692)]),
    "nh3": ("N", [("N", 0.0, 0.0, 0.1162), ("H", 0.0, 0.9377, -0.2711),
                  ("H", 0.8121, -0.4689, -0.2711), ("H", -0.8121, -0.4689, -0.2711)]),
    "ch4": ("C", [("C", 0.0, 0.0, 0.0), ("H", 0.6276, 0.6276, 0.6276), ("H", -0.6276, -0.6276, 0.6276),
                  ("H", -0.6276, 0.6276, -0.6276), ("H", 0.6276, -0.6276, -0.6276)]),
    "hf": ("F", [("F", 0.0, 0.0, 0.0), ("H", 0.0, 0.0, 0.9168)]),
}


def xyz_block(atoms, comment):
    lines = [str(len(atoms)), comment]
    lines += [f"{s:<2} {x:14.8f} {y:14.8f} {z:14.8f}" for s, x, y, z in atoms]
    return "\n".join(lines) + "\n"


def conformers(smiles, n, seed):
    mol = Chem.AddHs(Chem.MolFromSmiles(smiles))
    params = AllChem.ETKDGv3()
    params.randomSeed = seed
    ids = list(AllChem.EmbedMultipleConfs(mol, numConfs=n, params=params))
    out = []
    for cid in ids:
        pos = mol.GetConformer(cid).GetPositions()
        out.append([(a.GetSymbol(), *map(float, p)) for a, p in zip(mol.GetAtoms(), pos)])
    return out


def write(path, rows):
    with open(path, "w") as fh:
        for r in rows:
            fh.write(json.dumps(r) + "\n")
    print(f"{path.name}: {len(rows)} entries")


def main():
    smiles = (HERE / "smiles_gdb_like.txt").read_text().split()
    DATA.mkdir(parents=True, exist_ok=True)

    suite = []
    for i, smi in enumerate(smiles):
        for k, atoms in enumerate(conformers(smi, 5, SEED + i)):
            cid = f"m{i:03d}-c{k}"
            suite.append({"id": cid, "smiles": smi, "xyz": xyz_block(atoms, f"id={cid}")})
    write(DATA / "conformers_9to11.jsonl", suite)

    oracle = []
    for name, (smi, atoms) in SMALL.items():
        oracle.append({"id": name, "smiles": smi, "xyz": xyz_block(atoms, f"id={name}")})
    nine = [s for s in suite if Chem.MolFromSmiles(s["smiles"]).GetNumHeavyAtoms() == 9]
    picked, seen = [], set()
    for s in nine:
        if s["smiles"] not in seen:
            seen.add(s["smiles"])
            picked.append(s)
        if len(picked) == 15:
            break
    write(DATA / "oracle_suite.jsonl", oracle + picked)
    return 0


if __name__ == "__main__":
    sys.exit(main())

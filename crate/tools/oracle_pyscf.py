"""Reference values from PySCF, frozen as JSON fixtures under
crates/core/tests/data.

Basis data is read from the same .gbs files the Rust crate embeds, and
molecules use Cartesian functions, so AO order and contraction data match
exactly. Stages:

    integrals   S, T, V, canonical ERIs and E_nn for small molecules
    functional  B3LYP exc/vrho/vsigma at random (n, sigma) points
    scf         B3LYP/STO-3G on the oracle suite, on grids dumped by
                `cargo run --release --example dump_grids`
"""
import json
import sys
from pathlib import Path

import numpy as np
from pyscf import dft, gto
from pyscf.data import elements

ROOT = Path(__file__).resolve().parents[1]
CORE = ROOT / "crates" / "core"
DATA = CORE / "tests" / "data"
BOHR = 1.8897259886


def parse_gbs(path):
    """Gaussian .gbs -> {symbol: [[l, [e, c], ...], ...]} in file order."""
    out = {}
    lines = [ln.split("!")[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    i = 0
    while i < len(lines):
        if lines[i] == "****":
            i += 1
            continue
        sym = lines[i].split()[0]
        i += 1
        shells = []
        while i < len(lines) and lines[i] != "****":
            kind, n, scale = lines[i].split()
            n, scale = int(n), float(scale)
            rows = [[float(x.replace("D", "E")) for x in lines[i + 1 + k].split()] for k in range(n)]
            i += 1 + n
            if kind.upper() in ("SP", "L"):
                shells.append([0] + [[r[0] * scale**2, r[1]] for r in rows])
                shells.append([1] + [[r[0] * scale**2, r[2]] for r in rows])
            else:
                shells.append(["SPD".index(kind.upper())] + [[r[0] * scale**2, r[1]] for r in rows])
        out[sym.capitalize()] = shells
    return out


def basis_path(name):
    return {"sto-3g": CORE / "data/basis/sto-3g.gbs", "6-31g": CORE / "data/basis/6-31g.gbs"}.get(name, ROOT / name)


def build(atoms_bohr, basis, charge=0):
    table = parse_gbs(basis_path(basis))
    syms = {elements.ELEMENTS[z] for z, *_ in atoms_bohr}
    mol = gto.Mole()
    mol.atom = [[elements.ELEMENTS[z], tuple(xyz)] for z, *xyz in atoms_bohr]
    mol.unit = "Bohr"
    mol.basis = {s: table[s] for s in syms}
    mol.cart = True
    mol.charge = charge
    mol.verbose = 0
    mol.build()
    return mol


def parse_xyz_block(text):
    lines = text.strip("\n").split("\n")
    n = int(lines[0])
    atoms = []
    for ln in lines[2 : 2 + n]:
        sym, x, y, z = ln.split()
        atoms.append([elements.charge(sym)] + [float(v) * BOHR for v in (x, y, z)])
    return atoms


def suite():
    return [json.loads(ln) for ln in (DATA / "oracle_suite.jsonl").read_text().splitlines() if ln.strip()]


def canonical_eri(eri):
    n = eri.shape[0]
    out = []
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j >= k * (k + 1) // 2 + l:
                        out.append([i, j, k, l, float(eri[i, j, k, l])])
    return out


def stage_integrals():
    entries = {e["id"]: parse_xyz_block(e["xyz"]) for e in suite()}
    cases = [
        ("h2_sto3g", [[1, 0.0, 0.0, 0.0], [1, 0.0, 0.0, 1.4]], "sto-3g", True),
        ("h2o_sto3g", entries["h2o"], "sto-3g", True),
        ("h2o_dshell", entries["h2o"], "crates/core/tests/data/d_shell.gbs", True),
        ("ch4_631g", entries["ch4"], "6-31g", False),
    ]
    out = []
    for name, atoms, basis, with_eri in cases:
        mol = build(atoms, basis)
        rec = {
            "name": name,
            "basis": basis,
            "atoms_bohr": atoms,
            "n_ao": mol.nao,
            "e_nuc": mol.energy_nuc(),
            "s": mol.intor("int1e_ovlp").tolist(),
            "t": mol.intor("int1e_kin").tolist(),
            "v": mol.intor("int1e_nuc").tolist(),
        }
        if with_eri:
            rec["eri"] = canonical_eri(mol.intor("int2e"))
        out.append(rec)
    (DATA / "oracle_integrals.json").write_text(json.dumps(out))


def stage_functional():
    rng = np.random.default_rng(20231015)
    npts = 1000
    n = 10.0 ** rng.uniform(-8, 2.5, npts)
    # reduced gradient x = |grad n_s| / n_s^{4/3} spread over the physical range
    x = 10.0 ** rng.uniform(-3, 2, npts)
    x[:50] = 0.0
    sigma = (2.0 * x * (n / 2.0) ** (4.0 / 3.0)) ** 2
    rho = np.zeros((4, npts))
    rho[0] = n
    rho[1] = np.sqrt(sigma)
    exc, vxc = dft.libxc.eval_xc("B3LYP", rho, spin=0, deriv=1)[:2]
    out = {
        "n": n.tolist(),
        "sigma": sigma.tolist(),
        "exc": exc.tolist(),
        "vrho": vxc[0].tolist(),
        "vsigma": vxc[1].tolist(),
    }
    (DATA / "oracle_b3lyp.json").write_text(json.dumps(out))


def run_rks(grid_doc, basis="sto-3g"):
    atoms = [[z] + list(xyz) for z, xyz in grid_doc["atoms_bohr"]]
    mol = build(atoms, basis)
    mf = dft.RKS(mol)
    mf.xc = "B3LYP"
    mf.grids.coords = np.array(grid_doc["coords"])
    mf.grids.weights = np.array(grid_doc["weights"])
    mf.small_rho_cutoff = 0.0
    mf.init_guess = "hcore"
    mf.conv_tol = 1e-11
    mf.max_cycle = 200
    mf.verbose = 0
    mf.kernel()
    if not mf.converged:
        mf.init_guess = "minao"
        mf.level_shift = 0.3
        mf.kernel()
        mf.level_shift = 0.0
        mf.kernel(dm0=mf.make_rdm1())
    if not mf.converged:
        mf = mf.newton()
        mf.kernel()
    assert mf.converged, grid_doc["id"]
    return mol, mf


def stage_scf(grid_dir="/tmp/dftgen_grids"):
    hartree_ev = 27.211386
    out = []
    ids = [e["id"] for e in suite()] + ["h2_1.4bohr"]
    for mid in ids:
        doc = json.loads((Path(grid_dir) / f"{mid}.json").read_text())
        mol, mf = run_rks(doc)
        nocc = mol.nelectron // 2
        homo, lumo = mf.mo_energy[nocc - 1], mf.mo_energy[nocc]
        rec = {
            "id": mid,
            "n_grid": len(doc["weights"]),
            "e_total": mf.e_tot,
            # semi-local part only; exact exchange is reported separately
            "e_xc": mf._numint.nr_rks(mol, mf.grids, "B3LYP", mf.make_rdm1())[1],
            "e_nuc": mol.energy_nuc(),
            "homo": homo,
            "lumo": lumo,
            "gap_ev": (lumo - homo) * hartree_ev,
        }
        if mid in ("h2o", "h2_1.4bohr"):
            dm = mf.make_rdm1()
            rec["density"] = dm.tolist()
            rec["fock"] = mf.get_fock(dm=dm).tolist()
            h = mf.get_hcore()
            s = mf.get_ovlp()
            import scipy.linalg
            rec["core_eigenvalues"] = scipy.linalg.eigh(h, s)[0].tolist()
        out.append(rec)
        print(mid, mf.e_tot, rec["gap_ev"], flush=True)
    (DATA / "oracle_scf.json").write_text(json.dumps(out, indent=1))


if __name__ == "__main__":
    stages = {"integrals": stage_integrals, "functional": stage_functional, "scf": stage_scf}
    for s in sys.argv[1:] or stages:
        stages[s]()

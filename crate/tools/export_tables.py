"""Regenerate the embedded basis-set and Lebedev tables under crates/core/data.

Requires pyscf. Basis sets are written in Gaussian (.gbs) text format with
S and P shells that share exponents merged into SP blocks. Lebedev rules are
written as symmetry-orbit generators (code, a, b, weight).
"""
import inspect
import re
import sys
from pathlib import Path

from pyscf import gto
from pyscf.data import elements
from pyscf.dft import LebedevGrid

ROOT = Path(__file__).resolve().parents[1] / "crates" / "core" / "data"
LEBEDEV_ORDERS = [6, 14, 26, 38, 50, 74, 86, 110, 146, 170, 194, 230, 266, 302]


def fmt(x):
    return repr(float(x)).rjust(20)


def write_basis(name, fname):
    out = [f"! {name.upper()} basis, elements H-Ar", "!", "****"]
    for z in range(1, 19):
        sym = elements.ELEMENTS[z]
        shells = gto.basis.load(name, sym)
        p_shells = [s for s in shells if s[0] == 1]
        used_p = set()
        out.append(f"{sym}     0")
        for shell in shells:
            l = shell[0]
            prims = shell[1:]
            if l == 1:
                if id(shell) in used_p:
                    continue
                out.append(f"P   {len(prims)}   1.00")
                out += [f"{fmt(e)}{fmt(c)}" for e, c in prims]
                continue
            exps = [p[0] for p in prims]
            partner = next(
                (p for p in p_shells if id(p) not in used_p and [q[0] for q in p[1:]] == exps),
                None,
            )
            if partner is not None:
                used_p.add(id(partner))
                out.append(f"SP   {len(prims)}   1.00")
                out += [f"{fmt(e)}{fmt(c)}{fmt(pc[1])}" for (e, c), pc in zip(prims, partner[1:])]
            else:
                out.append(f"{'SPD'[l]}   {len(prims)}   1.00")
                out += [f"{fmt(e)}{fmt(c)}" for e, c in prims]
        out.append("****")
    (ROOT / "basis" / fname).write_text("\n".join(out) + "\n")


def write_lebedev():
    out = ["# Lebedev rules as octahedral orbit generators: code a b weight",
           "# code 0: (1,0,0) 6 pts; 1: (0,a,a) 12; 2: (a,a,a) 8; 3: (a,a,b) 24; 4: (a,b,0) 24; 5: (a,b,c) 48"]
    assign = re.compile(r"^\s*(a|b|v)\s*=\s*([-+0-9.eE]+)\s*$")
    call = re.compile(r"SphGenOh\((\d),")
    for n in LEBEDEV_ORDERS:
        src = inspect.getsource(getattr(LebedevGrid, f"MakeAngularGrid_{n}"))
        vals = {"a": 0.0, "b": 0.0, "v": 0.0}
        rows = []
        for line in src.splitlines():
            m = assign.match(line)
            if m:
                vals[m.group(1)] = m.group(2)
                continue
            m = call.search(line)
            if m:
                rows.append(f"{m.group(1)} {vals['a']} {vals['b']} {vals['v']}")
        out.append(f"order {n} {len(rows)}")
        out += rows
    (ROOT / "lebedev.txt").write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    write_basis("sto-3g", "sto-3g.gbs")
    write_basis("6-31g", "6-31g.gbs")
    write_lebedev()
    sys.exit(0)

"""Regenerate the checked-in integral fixtures.

Requires PySCF. Writes FCIDUMP files, CCSD pair-amplitude initial angles and a
reference JSON per geometry. The reference DOCI energy is computed by
restricting the full determinant-space Hamiltonian (PySCF FCI machinery) to
determinants whose alpha and beta strings coincide, which makes it an
independent check of the integral convention used by the Rust code.

    python3 fixtures/generate_fixtures.py
"""

import json
import os

import numpy as np
from pyscf import ao2mo, cc, fci, gto, scf
from pyscf.fci import cistring
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def seniority_zero_energy(h1, eri, ncore_e, norb, nelec):
    na = nelec // 2
    strings = cistring.make_strings(range(norb), na)
    nstr = len(strings)
    h2 = fci.direct_spin1.absorb_h1e(h1, eri, norb, (na, na), 0.5)
    mat = np.zeros((nstr, nstr))
    for s in range(nstr):
        vec = np.zeros((nstr, nstr))
        vec[s, s] = 1.0
        hv = fci.direct_spin1.contract_2e(h2, vec, norb, (na, na))
        for t in range(nstr):
            mat[t, s] = hv[t, t]
    mat = 0.5 * (mat + mat.T)
    return float(np.linalg.eigvalsh(mat)[0]) + ncore_e


def run(name, atom, basis, label):
    mol = gto.M(atom=atom, basis=basis, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    assert mf.converged
    norb = mf.mo_coeff.shape[1]
    nelec = mol.nelectron
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)
    ecore = mol.energy_nuc()

    out_dir = os.path.join(HERE, name)
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, f"{name}_{label}")
    fcidump.from_integrals(stem + ".fcidump", h1, eri, norb, nelec, ecore, tol=1e-14)

    mycc = cc.RCCSD(mf)
    mycc.conv_tol = 1e-10
    mycc.kernel()
    nocc = nelec // 2
    init = {}
    for j in range(nocc):
        for i in range(nocc, norb):
            a = i - nocc
            init[f"({i},{j})"] = float(mycc.t2[j, j, a, a])
    with open(stem + ".init.json", "w") as f:
        json.dump(init, f, indent=2, sort_keys=True)

    e_fci = fci.FCI(mf).kernel()[0]
    e_doci = seniority_zero_energy(h1, eri, ecore, norb, nelec)
    ref = {
        "label": label,
        "basis": basis,
        "n_orbitals": norb,
        "n_electrons": nelec,
        "e_rhf": float(mf.e_tot),
        "e_ccsd": float(mycc.e_tot),
        "e_doci": e_doci,
        "e_fci": float(e_fci),
    }
    with open(stem + ".ref.json", "w") as f:
        json.dump(ref, f, indent=2, sort_keys=True)
    print(name, label, ref)


if __name__ == "__main__":
    run("h2", "H 0 0 0; H 0 0 0.74", "sto-6g", "0.740")
    for d in [1.0, 1.2, 1.4, 1.595, 1.8, 2.2, 2.6, 3.0]:
        run("lih", f"Li 0 0 0; H 0 0 {d}", "sto-6g", f"{d:.3f}")

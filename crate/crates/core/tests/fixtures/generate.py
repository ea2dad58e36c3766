"""Regenerate the integral fixtures and their reference data.

Requires PySCF. Run from this directory:  python3 generate.py
Each system gets an FCIDUMP plus a JSON file with reference values
computed independently by PySCF (integrals, FCI energies, and the full
Fock-space spectrum assembled sector by sector).
"""
import json

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump


def fock_spectrum(h1, eri, norb, ecore):
    """All 4^norb eigenvalues of the Fock-space Hamiltonian (core included)."""
    vals = [ecore]  # vacuum
    for na in range(norb + 1):
        for nb in range(norb + 1):
            if na + nb == 0:
                continue
            from math import comb
            dim = comb(norb, na) * comb(norb, nb)
            e, _ = fci.direct_spin1.kernel(h1, eri, norb, (na, nb), nroots=dim,
                                           max_space=max(dim * 2, 40), max_cycle=400,
                                           conv_tol=1e-14)
            e = np.atleast_1d(e)
            assert len(e) == dim, (na, nb, len(e), dim)
            vals.extend(float(x) + ecore for x in e)
    return sorted(vals)


def write(name, h1, eri, norb, nelec, ms2, ecore, extra=None):
    eri = ao2mo.restore(1, eri, norb)
    fcidump.from_integrals(f"{name}.fcidump", h1, eri, norb, nelec, nuc=ecore, ms=ms2,
                           tol=1e-15, float_format=" %.17e")
    na = (nelec + ms2) // 2
    nb = nelec - na
    e_fci, _ = fci.direct_spin1.kernel(h1, eri, norb, (na, nb), conv_tol=1e-14)
    ref = {
        "norb": norb,
        "nelec": nelec,
        "ms2": ms2,
        "core_energy": float(ecore),
        "e_fci_total": float(e_fci) + float(ecore),
        "e_fci_electronic": float(e_fci),
        "h1": h1.tolist(),
        "eri": eri.reshape(norb, norb, norb, norb).tolist(),
        "fock_spectrum_total": fock_spectrum(h1, eri, norb, ecore),
    }
    if extra:
        ref.update(extra)
    with open(f"{name}.json", "w") as f:
        json.dump(ref, f, indent=1)
    print(name, ref["e_fci_total"], ref["e_fci_electronic"])


def molecular(name, mol, ncas, nelecas, extra=None):
    mf = scf.RHF(mol).run(verbose=0, conv_tol=1e-12)
    mc = mcscf.CASCI(mf, ncas, nelecas)
    mc.verbose = 0
    h1, ecore = mc.get_h1eff()
    eri = mc.get_h2eff()
    write(name, h1, eri, ncas, nelecas, 0, ecore, extra)


def random_model(name, norb, nelec, seed, nfac=4):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(norb, norb))
    h1 = -np.eye(norb) * np.linspace(1.0, 0.2, norb) + 0.15 * (a + a.T)
    b = rng.normal(size=(nfac, norb, norb)) * 0.25
    b = b + b.transpose(0, 2, 1)
    eri = np.einsum("Lij,Lkl->ijkl", b, b)
    write(name, h1, eri, norb, nelec, 0, 0.0, {"seed": seed})


molecular("h2_sto3g", gto.M(atom="H 0 0 0; H 0 0 1.4", unit="Bohr", basis="sto-3g"), 2, 2,
          {"bond_length_bohr": 1.4})
molecular("hf_631g_cas22", gto.M(atom="H 0 0 0; F 0 0 0.917", unit="Angstrom", basis="6-31g"),
          2, 2, {"bond_length_angstrom": 0.917})
molecular("h4_sto3g", gto.M(atom="H 0 0 0; H 0 0 1.8; H 0 0 3.6; H 0 0 5.4", unit="Bohr",
                            basis="sto-3g"), 4, 4, {"spacing_bohr": 1.8})
random_model("random_3orb", 3, 2, 7)
random_model("random_4orb", 4, 4, 11)

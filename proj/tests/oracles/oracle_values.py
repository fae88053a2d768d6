# Copyright 2026 The ffsim Authors
# SPDX-License-Identifier: Apache-2.0
#
# Independent numpy/scipy reference for the frozen constants in the C++ tests.
# Re-run with `python3 oracle_values.py` and compare against the test sources.

import itertools

import numpy as np
from scipy.linalg import expm, sqrtm

np.set_printoptions(precision=17)


def show(name, value):
    print(f"{name} = {np.array2string(np.asarray(value), precision=17, separator=', ')}")


# numkit: exponential and square root of fixed matrices.
h = np.array([[1.0, 0.5 - 0.2j], [0.5 + 0.2j, -0.3]])
u = expm(-1j * 0.7 * h)
show("expm_re", u.real)
show("expm_im", u.imag)
show("sqrt_2112", sqrtm(np.array([[2.0, 1.0], [1.0, 2.0]])).real)

# qpe: exact outcome distribution for phi = 0.3 read with 3 bits.
def qpe_dist(phi, l):
    n = 2**l
    k = np.arange(n)
    amps = np.array([np.sum(np.exp(2j * np.pi * k * (phi - m / n))) / n for m in range(n)])
    return np.abs(amps) ** 2

show("qpe_0.3_l3", qpe_dist(0.3, 3))

# frustff: H' spectrum for two terms on two qubits.
P11 = np.diag([0, 0, 0, 1.0])
singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
Ps = np.outer(singlet, singlet)
H = P11 + Ps
hp = np.zeros((12, 12))
for x, term in enumerate([P11, Ps]):
    hop = np.zeros((3, 3))
    hop[x + 1, 0] = hop[0, x + 1] = 1.0
    hp += np.kron(sqrtm(term).real, hop)
show("amp_spectrum", np.sort(np.linalg.eigvalsh(hp)))
show("amp_H_spectrum", np.sort(np.linalg.eigvalsh(H)))
print("delta(0.1,100,0.01) =", min(np.sqrt(0.1 / 400), 0.1 / (800 * np.sqrt(0.01))))

# lieff: Fock spectrum of a fixed two-mode quadratic Hamiltonian via Jordan-Wigner.
def jw(n):
    a = np.array([[0, 1.0], [0, 0]])
    z = np.diag([1.0, -1.0])
    ops = []
    for j in range(n):
        m = np.array([[1.0]])
        for k in range(n):
            m = np.kron(m, z if k < j else (a if k == j else np.eye(2)))
        ops.append(m)
    return ops

alpha = np.array([[0.7, 0.2 - 0.3j], [0.2 + 0.3j, -0.4]])
beta = np.array([[0, 0.25 + 0.1j], [-0.25 - 0.1j, 0]])
c = jw(2)
F = sum(alpha[i, j] * c[i].conj().T @ c[j] for i in range(2) for j in range(2))
F += sum(beta[i, j] * c[i] @ c[j] - np.conj(beta[i, j]) * c[i].conj().T @ c[j].conj().T
         for i in range(2) for j in range(2))
show("fock_spectrum", np.sort(np.linalg.eigvalsh(F)))

# lieff: bosonic two-particle sector of a 2-mode matrix.
A = np.array([[0.3, 0.5j], [-0.5j, -0.2]])
basis = [(2, 0), (1, 1), (0, 2)]
def apply_hop(state, i, j):
    s = list(state)
    if s[j] == 0:
        return None, 0.0
    amp = np.sqrt(s[j]); s[j] -= 1
    amp *= np.sqrt(s[i] + 1); s[i] += 1
    return tuple(s), amp
S = np.zeros((3, 3), complex)
for col, st in enumerate(basis):
    for i, j in itertools.product(range(2), range(2)):
        out, amp = apply_hop(st, i, j)
        if out is not None:
            S[basis.index(out), col] += A[i, j] * amp
show("boson_sector_spectrum", np.sort(np.linalg.eigvalsh(S)))

# energymeas: confidence for H = Z/2, l = 6, c = 3, deltaE = 6 pi / 64.
for e in (-0.5, 0.5):
    p = qpe_dist((e + 1) / (2 * np.pi), 6)
    ehat = 2 * np.pi * np.arange(64) / 64 - 1
    d = np.abs(np.remainder(ehat - e + np.pi, 2 * np.pi) - np.pi)
    print(f"confidence(E={e}) =", p[d <= 6 * np.pi / 64 + 1e-12].sum())

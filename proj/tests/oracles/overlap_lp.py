"""Independent values for the fixed-response overlap LP (scipy/HiGHS).

Builds the LP from scratch with exact Born equalities and prints best_q for the
instances frozen in overlap_search_test.cpp.
"""
import numpy as np
from scipy.optimize import linprog


def circle(n, offset=0.0):
    th = 2 * np.pi * (np.arange(n) + offset) / n
    return np.stack([np.cos(th / 2), np.sin(th / 2)], axis=1).astype(complex)


Z = np.eye(2, dtype=complex)
X = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def born(state, basis):
    return np.abs(basis.conj() @ state) ** 2


def best_q(psi1, psi2, bases, states):
    L = len(states)
    c = np.concatenate([np.zeros(2 * L), -np.ones(L)])
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for l in range(L):
        for i in range(2):
            row = np.zeros(3 * L)
            row[2 * L + l] = 1
            row[i * L + l] = -1
            a_ub.append(row)
            b_ub.append(0)
    for i, psi in enumerate((psi1, psi2)):
        row = np.zeros(3 * L)
        row[i * L:(i + 1) * L] = 1
        a_eq.append(row)
        b_eq.append(1)
        for b in bases:
            xi = np.array([born(s, b) for s in states])
            p = born(psi, b)
            for k in range(len(p)):
                row = np.zeros(3 * L)
                row[i * L:(i + 1) * L] = xi[:, k]
                a_eq.append(row)
                b_eq.append(p[k])
    r = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return None if r.status == 2 else -r.fun


zero = np.array([1, 0], dtype=complex)
plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
g = lambda t: np.array([np.cos(t / 2), np.sin(t / 2)], dtype=complex)

print("zx_circle16", best_q(zero, plus, [Z, X], circle(16)))
print("z_circle16", best_q(zero, plus, [Z], circle(16)))
print("x_tilted_circle16", repr(best_q(zero, g(np.pi / 4), [X], circle(16))))
print("zx_offset_circle16", best_q(zero, plus, [Z, X], circle(16, 0.5)))
print("zx_pair_circle16", repr(best_q(g(np.pi / 5), g(4 * np.pi / 5), [Z, X], circle(16, 0.25))))
print("z_pair_circle12", repr(best_q(g(np.pi / 5), g(4 * np.pi / 5), [Z], circle(12, 0.25))))

"""Independent reference values for the regression constants in the C++ tests.

Built directly on numpy/scipy with dense matrices at large truncation; shares
no code with the library. Run: python3 tests/oracles/reference_values.py
"""
import numpy as np
from scipy.linalg import expm, eigh
from math import factorial, log, sqrt


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def moments_entropy(rho):
    dim = rho.shape[0]
    a = annihilation(dim)
    n = np.diag(np.arange(dim)).astype(complex)
    ea = np.trace(rho @ a)
    ea2 = np.trace(rho @ a @ a)
    en = np.trace(rho @ n).real
    mx, mp = sqrt(2) * ea.real, sqrt(2) * ea.imag
    sxx = (2 * ea2.real + 2 * en + 1) / 2 - mx * mx
    spp = (-2 * ea2.real + 2 * en + 1) / 2 - mp * mp
    sxp = ea2.imag - mx * mp
    nu = sqrt(sxx * spp - sxp * sxp)
    s_tau = (nu + 0.5) * log(nu + 0.5) - ((nu - 0.5) * log(nu - 0.5) if nu > 0.5 else 0.0)
    w = eigh(rho, eigvals_only=True)
    s_rho = -sum(x * log(x) for x in w if x > 1e-14)
    return s_tau - s_rho


def pacs_analytic_delta(alpha):
    a2 = abs(alpha) ** 2
    ea = alpha * (a2 + 2) / (1 + a2)
    ea2 = alpha ** 2 * (a2 + 3) / (1 + a2)
    en = (a2 * a2 + 3 * a2 + 1) / (1 + a2)
    mx, mp = sqrt(2) * ea.real, sqrt(2) * ea.imag
    sxx = (2 * ea2.real + 2 * en + 1) / 2 - mx * mx
    spp = (-2 * ea2.real + 2 * en + 1) / 2 - mp * mp
    sxp = ea2.imag - mx * mp
    nu = sqrt(sxx * spp - sxp * sxp)
    return (nu + 0.5) * log(nu + 0.5) - (nu - 0.5) * log(nu - 0.5)


def pacs_dense(alpha, dim):
    c = np.zeros(dim, complex)
    for k in range(1, dim):
        c[k] = np.exp(-abs(alpha) ** 2 / 2) * alpha ** (k - 1) / sqrt(factorial(k - 1)) * sqrt(k)
    c /= np.linalg.norm(c)
    return np.outer(c, c.conj())


def heralded_two_mode(alpha, r, dim):
    a = annihilation(dim)
    eye = np.eye(dim)
    As, Ai = np.kron(a, eye), np.kron(eye, a)
    gen = r * (As.conj().T @ Ai.conj().T - Ai @ As)
    coh = np.array([np.exp(-abs(alpha) ** 2 / 2) * alpha ** k / sqrt(factorial(k)) for k in range(dim)])
    vac = np.zeros(dim); vac[0] = 1
    psi = expm(gen) @ np.kron(coh, vac)
    psi = Ai @ psi
    m = psi.reshape(dim, dim)
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


if __name__ == "__main__":
    for alpha in (0.5, 1.0):
        print(f"pacs alpha={alpha}: analytic={pacs_analytic_delta(alpha):.15f} "
              f"dense40={moments_entropy(pacs_dense(alpha, 40)):.15f}")
    rho = heralded_two_mode(0.5, 0.15, 30)
    print(f"heralded alpha=0.5 r=0.15 dim30: delta={moments_entropy(rho):.15f}")

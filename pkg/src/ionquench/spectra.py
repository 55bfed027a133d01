"""Exact block eigendecomposition of the sideband Hamiltonians at the quench
instant, plus dense truncated-Fock builders used as a brute-force oracle.

Internal energy unit is hbar*nu throughout, so matrix norms stay near
omega0/nu instead of absolute SI magnitudes.  The product basis is ordered
|0,g>, |0,e>, |1,g>, |1,e>, ... and the dense oracle is meant for desk-scale
frequency ratios (omega0/nu up to ~1e4); at experimental ratios the spectral
spread destroys dense-solver accuracy and the analytic formulas take over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import coupling_f, coupling_logabs_sequence, sqrt_shift
from .params import Branch, QuenchSpec, ReducedParams

__all__ = [
    "EigenPair",
    "SpectrumTable",
    "DenseQuench",
    "ket_index",
    "sideband_eigenvalues",
    "edge_eigenvalues",
    "sideband_eigenvectors",
    "spectrum_table",
    "displacement_element",
    "displacement_matrix",
    "dense_hamiltonians",
    "analytic_dense_spectrum",
]


def ket_index(n: int, level: str) -> int:
    """Index of |n, level> in the ordered product basis |0,g>, |0,e>, |1,g>, ..."""
    if level not in ("g", "e"):
        raise ValueError("level must be 'g' or 'e'")
    return 2 * n + (1 if level == "e" else 0)


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue (units of hbar*nu) with amplitudes over labeled kets."""

    value: float
    amplitudes: dict[tuple[int, str], complex]

    def as_dense(self, n_trunc: int) -> np.ndarray:
        vec = np.zeros(2 * (n_trunc + 1), dtype=complex)
        for (n, level), amp in self.amplitudes.items():
            if n <= n_trunc:
                vec[ket_index(n, level)] = amp
        return vec


@dataclass(frozen=True)
class SpectrumTable:
    """Edge eigenvalues (n = 0..m-1) and coupled-pair eigenvalues (mu_n, gamma_n)."""

    branch: Branch
    m: int
    n_trunc: int
    edge: np.ndarray
    mu: np.ndarray
    gamma: np.ndarray

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.mu.tolist(), self.gamma.tolist()))


def _half_splitting(r_wl: float, u: float) -> float:
    """Half the level splitting sqrt(r_wl^2 + u^2) of a coupled 2x2 block."""
    return 0.5 * math.hypot(r_wl, u)


def sideband_eigenvalues(n: int, m: int, branch: Branch, rp: ReducedParams) -> tuple[float, float]:
    """Eigenvalue pair (mu, gamma) of the coupled block {n, n+m}, in hbar*nu units.

    mu = (n + m/2) - s/2 and gamma = (n + m/2) + s/2 with
    s = sqrt((omega_L/nu)^2 + (omega_rabi/nu)^2 |f_n^m|^2); the carrier is the
    m = 0 case of either branch.
    """
    u = rp.r_om * coupling_f(n, m, rp.eta).magnitude
    s = 2.0 * _half_splitting(_branch_r_wl(m, branch, rp), u)
    center = n + 0.5 * m
    return center - 0.5 * s, center + 0.5 * s


def _branch_r_wl(m: int, branch: Branch, rp: ReducedParams) -> float:
    """omega_L/nu for an explicit branch choice (carrier maps to m = 0)."""
    if branch is Branch.CARRIER or m == 0:
        return rp.r_w0
    return rp.r_w0 + branch.sideband_sign * m


def edge_eigenvalues(m: int, branch: Branch, rp: ReducedParams) -> np.ndarray:
    """Decoupled edge eigenvalues for n = 0..m-1 in hbar*nu units.

    JC leaves |n,g> untouched at n - omega0/(2 nu); AJC leaves |n,e> at
    n + omega0/(2 nu).  Empty for m = 0.
    """
    if m == 0:
        return np.empty(0)
    ns = np.arange(m, dtype=float)
    if branch is Branch.AJC:
        return ns + 0.5 * rp.r_w0
    return ns - 0.5 * rp.r_w0


def _block_kets(n: int, m: int, branch: Branch) -> tuple[tuple[int, str], tuple[int, str]]:
    """Kets of the coupled block, ordered (higher electronic ket, ground ket)."""
    if branch is Branch.AJC and m > 0:
        return (n + m, "e"), (n, "g")
    return (n, "e"), (n + m, "g")


def sideband_eigenvectors(n: int, m: int, branch: Branch, rp: ReducedParams) -> tuple[EigenPair, EigenPair]:
    """Normalized eigenvectors of the coupled 2x2 block, as (mu pair, gamma pair).

    At a coupling zero (f_n^m = 0) the block is already diagonal and the bare
    kets are returned with their diagonal energies.
    """
    ket_e, ket_g = _block_kets(n, m, branch)
    a = ket_e[0] + 0.5 * rp.r_w0  # excited-ket diagonal energy
    b = ket_g[0] - 0.5 * rp.r_w0
    f = coupling_f(n, m, rp.eta)
    f_c = f.as_complex()
    if branch is Branch.AJC and m > 0:
        f_c = f_c.conjugate()
    c = 0.5 * rp.r_om * f_c

    mu_val, gamma_val = sideband_eigenvalues(n, m, branch, rp)
    if c == 0:
        lo, hi = ((ket_e, a), (ket_g, b)) if a <= b else ((ket_g, b), (ket_e, a))
        return (
            EigenPair(value=lo[1], amplitudes={lo[0]: 1.0 + 0.0j}),
            EigenPair(value=hi[1], amplitudes={hi[0]: 1.0 + 0.0j}),
        )

    # Component along the ground ket is E - a; build it cancellation-free.
    r_wl = a - b
    u = 2.0 * abs(c)
    aw = abs(r_wl)
    excess = sqrt_shift(aw, u, aw)  # s - |r_wl| >= 0
    if r_wl >= 0:
        d_mu = -0.5 * (2.0 * aw + excess)
        d_gamma = 0.5 * excess
    else:
        d_mu = -0.5 * excess
        d_gamma = 0.5 * (2.0 * aw + excess)

    def _normalized(value: float, d: float) -> EigenPair:
        norm = math.hypot(abs(c), abs(d))
        return EigenPair(value=value, amplitudes={ket_e: c / norm, ket_g: complex(d / norm)})

    return _normalized(mu_val, d_mu), _normalized(gamma_val, d_gamma)


def spectrum_table(m: int, branch: Branch, rp: ReducedParams, n_trunc: int) -> SpectrumTable:
    """Analytic spectrum: edge values plus (mu_n, gamma_n) for n = 0..n_trunc."""
    signs, log_mags = coupling_logabs_sequence(n_trunc, m, rp.eta)
    u = rp.r_om * np.where(signs == 0, 0.0, np.exp(log_mags))
    r_wl = _branch_r_wl(m, branch, rp)
    s = np.hypot(r_wl, u)
    centers = np.arange(n_trunc + 1, dtype=float) + 0.5 * m
    return SpectrumTable(
        branch=branch,
        m=m,
        n_trunc=n_trunc,
        edge=edge_eigenvalues(m, branch, rp),
        mu=centers - 0.5 * s,
        gamma=centers + 0.5 * s,
    )


def displacement_element(n_row: int, n_col: int, eta: float) -> complex:
    """Fock matrix element <n_row| exp(i eta (a + a^dag)) |n_col>.

    Equals (i eta)^m sqrt(min! / max!) exp(-eta^2/2) L_min^m(eta^2) with
    m = |n_row - n_col|; the matrix is complex symmetric, so both triangles
    share the same expression.
    """
    if n_row < 0 or n_col < 0:
        raise ValueError("Fock indices must be nonnegative")
    m = abs(n_row - n_col)
    f = coupling_f(min(n_row, n_col), m, eta)
    return f.as_complex()


def displacement_matrix(n_trunc: int, eta: float) -> np.ndarray:
    """Truncated matrix of exp(i eta (a + a^dag)), filled one diagonal at a time."""
    dim = n_trunc + 1
    mat = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        signs, log_mags = coupling_logabs_sequence(dim - 1 - m, m, eta)
        vals = (1j ** (m % 4)) * signs * np.exp(log_mags)
        ks = np.arange(dim - m)
        mat[ks + m, ks] = vals
        mat[ks, ks + m] = vals
    return mat


@dataclass(frozen=True)
class DenseQuench:
    """Dense truncated operators for one parameter point (hbar*nu units).

    h_initial         bare Hamiltonian, diagonal
    h_final_full      quench target with the full exponential coupling
    h_final_sideband  quench target with the resonant m-quantum coupling
    rho_initial       thermal x electronic Gibbs state of h_initial
    thermal_tail      neglected thermal weight exp(-b_nu * n_trunc)
    """

    n_trunc: int
    h_initial: np.ndarray
    h_final_full: np.ndarray
    h_final_sideband: np.ndarray
    rho_initial: np.ndarray
    thermal_tail: float
    tail_warning: bool


def dense_hamiltonians(rp: ReducedParams, quench: QuenchSpec, n_trunc: int) -> DenseQuench:
    """Build the dense pre/post-quench operators and the initial Gibbs state.

    Requires n_trunc >= m + 2.  Sets tail_warning when the thermal occupation
    beyond the truncation exceeds 1e-12 of the total.
    """
    m = quench.m
    if n_trunc < m + 2:
        raise ValueError("n_trunc must be at least m + 2")
    dim = 2 * (n_trunc + 1)
    ns = np.arange(n_trunc + 1, dtype=float)

    diag = np.empty(dim)
    diag[0::2] = ns - 0.5 * rp.r_w0
    diag[1::2] = ns + 0.5 * rp.r_w0
    h_initial = np.diag(diag).astype(complex)

    # Full coupling: (omega_rabi / 2 nu) (sigma_+ D + sigma_- D^dag).
    d_mat = displacement_matrix(n_trunc, rp.eta)
    h_full = h_initial.copy()
    h_full[1::2, 0::2] += 0.5 * rp.r_om * d_mat
    h_full[0::2, 1::2] += 0.5 * rp.r_om * d_mat.conj().T

    # Sideband coupling: only the resonant m-quantum diagonal of D survives.
    h_side = h_initial.copy()
    signs, log_mags = coupling_logabs_sequence(n_trunc - m, m, rp.eta)
    f_vals = (1j ** (m % 4)) * signs * np.exp(log_mags)
    ks = np.arange(n_trunc + 1 - m)
    if quench.branch is Branch.AJC and m > 0:
        rows, cols = ket_index(m, "e") + 2 * ks, ket_index(0, "g") + 2 * ks
        h_side[rows, cols] += 0.5 * rp.r_om * f_vals.conj()
        h_side[cols, rows] += 0.5 * rp.r_om * f_vals
    else:
        rows, cols = ket_index(0, "e") + 2 * ks, ket_index(m, "g") + 2 * ks
        h_side[rows, cols] += 0.5 * rp.r_om * f_vals
        h_side[cols, rows] += 0.5 * rp.r_om * f_vals.conj()

    thermal = np.exp(-rp.b_nu * ns) * (-math.expm1(-rp.b_nu))
    p_g = 1.0 / (1.0 + math.exp(-rp.b_w0))
    weights = np.empty(dim)
    weights[0::2] = thermal * p_g
    weights[1::2] = thermal * (1.0 - p_g)
    rho = np.diag(weights).astype(complex)

    for name, mat in (("h_initial", h_initial), ("h_final_full", h_full), ("h_final_sideband", h_side)):
        if not np.allclose(mat, mat.conj().T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(mat).max()))):
            raise RuntimeError(f"{name} failed the Hermiticity check")

    tail = math.exp(-rp.b_nu * n_trunc)
    return DenseQuench(
        n_trunc=n_trunc,
        h_initial=h_initial,
        h_final_full=h_full,
        h_final_sideband=h_side,
        rho_initial=rho,
        thermal_tail=tail,
        tail_warning=tail >= 1e-12,
    )


def analytic_dense_spectrum(m: int, branch: Branch, rp: ReducedParams, n_trunc: int) -> np.ndarray:
    """Predicted eigenvalue multiset of the truncated sideband Hamiltonian.

    Edge values, coupled pairs for blocks fully inside the truncation, and the
    bare diagonal energies of the boundary kets whose partners fall outside.
    Sorted ascending; length equals the dense dimension 2(n_trunc + 1).
    """
    vals = [edge_eigenvalues(m, branch, rp)]
    table = spectrum_table(m, branch, rp, n_trunc)
    inside = slice(0, n_trunc - m + 1)
    vals.append(table.mu[inside])
    vals.append(table.gamma[inside])
    if m > 0:
        ns = np.arange(n_trunc - m + 1, n_trunc + 1, dtype=float)
        if branch is Branch.AJC:
            vals.append(ns - 0.5 * rp.r_w0)  # unpaired ground kets
        else:
            vals.append(ns + 0.5 * rp.r_w0)  # unpaired excited kets
    return np.sort(np.concatenate(vals))

"""Independent reference routes used by the test suite.

These deliberately avoid the package's own block/ladder constructions:
the atom-field propagator is rebuilt as a dense matrix exponential and the
splitter as an exact symbolic binomial expansion, so each checks the
production code through arithmetic it does not share.
"""

import numpy as np
from scipy.linalg import expm


def dense_propagator(n_max, kappa_abs, kappa_phase, t):
    """Matrix exponential of -i t (kappa sigma_+ a + conj(kappa) sigma_- a†).

    Laid out as the ground block then the excited block, matching
    AtomFieldState.amplitudes.
    """
    dim = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    kappa = kappa_abs * np.exp(1j * kappa_phase)
    raise_atom = np.array([[0, 0], [1, 0]])  # |e><g| on basis (g, e)
    h = kappa * np.kron(raise_atom, a) + np.conj(kappa) * np.kron(
        raise_atom.T, a.conj().T
    )
    return expm(-1j * t * h)


def multinomial_oracle(n, m, dim):
    """Symbolic expansion of [(a1+a2)/sqrt2]^n [(a1-a2)/sqrt2]^m |0,0>.

    Exact binomial double sum in sympy arithmetic, evaluated to floats only
    at the end; occupations at or above ``dim`` are dropped, matching the
    truncation semantics of the simulator.
    """
    import sympy as sp

    out = np.zeros(dim * dim, dtype=complex)
    prefactor = sp.Rational(1, 2) ** sp.Rational(n + m, 2) / sp.sqrt(
        sp.factorial(n) * sp.factorial(m)
    )
    for k in range(n + 1):
        for l in range(m + 1):
            p = k + l
            q = n + m - k - l
            if p >= dim or q >= dim:
                continue
            coeff = (
                sp.binomial(n, k)
                * sp.binomial(m, l)
                * (-1) ** (m - l)
                * sp.sqrt(sp.factorial(p) * sp.factorial(q))
            )
            out[p * dim + q] += float(sp.N(prefactor * coeff, 30))
    return out

"""Weak-coherent-light verification of the sign-shift cavity.

A weak coherent state |alpha| < 1 is sent through the heralded cavity gate
(no compensating phase shifter, so the one-photon amplitude keeps its
d(m) factor), then interferes with a fresh reference |alpha> on a
Mach-Zehnder built from two forward 50:50 splitters around a variable
phase theta on the upper path.

For purely coherent inputs the interferometer acts arm-wise,

    (alpha, beta)  ->  ( [(e^{i theta}+1) alpha + (e^{i theta}-1) beta] / 2,
                         [(e^{i theta}-1) alpha + (e^{i theta}+1) beta] / 2 ),

and the cavity output is well approximated (error O(|alpha|^2) in fidelity)
by an equal superposition of two coherent states of phases +-pi/3.  Pushing
each of those branches through the arm-wise map yields the four response
functions F1..F4 of theta; photon counting per branch is then Poissonian
with means |alpha F_k(theta) / 2|^2.  Detector D1 watches the upper path
(mode 0), D2 the lower (mode 1).

Exact joint counting statistics are computed from the simulated two-mode
state; the Monte Carlo sampler draws joint counts from that distribution,
so its only randomness is shot noise under a caller-supplied seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .fock import (
    FockCutoff,
    MultiModeState,
    as_cutoff,
    coherent_state,
    renormalize,
    tensor,
)
from .jcm import ns_gate
from .linear_optics import BeamSplitterSpec, PhaseShifterSpec, beam_splitter, phase_shifter


@dataclass(frozen=True)
class CavityOutput:
    """Heralded cavity state for a weak coherent input."""

    state: MultiModeState
    alpha: complex
    m: int
    error_mass: float  # weight outside span{|0>, |1>, |2>}


def cavity_ns_output(alpha: complex, m: int, cutoff: int | FockCutoff = 12) -> CavityOutput:
    """Run the heralded gate on |alpha| < 1 without the phase compensator."""
    alpha = complex(alpha)
    if abs(alpha) >= 1:
        raise ValueError(f"weak-light regime requires |alpha| < 1, got {abs(alpha)}")
    photons = coherent_state(alpha, cutoff)
    result = ns_gate(photons, m, apply_compensating_phase=False)
    probs = np.abs(result.output.amplitudes) ** 2
    error_mass = float(probs[3:].sum())
    return CavityOutput(result.output, alpha, m, error_mass)


def cat_reference(
    alpha: complex, cutoff: int | FockCutoff = 12, exact_norm: bool = False
) -> MultiModeState:
    """Half-sum of coherent states at phases +-pi/3.

    With ``exact_norm`` unset the bare 1/2 prefactor is kept, so the vector
    is subnormalized by the non-orthogonality of the two branches; set the
    flag to get the unit-norm version.
    """
    cutoff = as_cutoff(cutoff)
    plus = coherent_state(cmath.exp(1j * math.pi / 3) * alpha, cutoff)
    minus = coherent_state(cmath.exp(-1j * math.pi / 3) * alpha, cutoff)
    state = plus.with_amplitudes(0.5 * (plus.amplitudes + minus.amplitudes))
    return renormalize(state) if exact_norm else state


@dataclass(frozen=True)
class InterferometerResponse:
    """Branch responses at phase theta and the derived Poisson means."""

    theta: float
    f1: complex
    f2: complex
    f3: complex
    f4: complex
    mu1: float  # |alpha f1 / 2|^2
    mu2: float  # |alpha f2 / 2|^2


def f_functions(theta: float, alpha: complex = 0j) -> InterferometerResponse:
    """The four branch response functions, plus counting means at ``alpha``."""
    rot = cmath.exp(1j * theta)
    plus = cmath.exp(1j * math.pi / 3)
    minus = cmath.exp(-1j * math.pi / 3)
    f1 = (rot + 1) * plus + (rot - 1)
    f2 = (rot - 1) * plus + (rot + 1)
    f3 = (rot + 1) * minus + (rot - 1)
    f4 = (rot - 1) * minus + (rot + 1)
    mu1 = abs(alpha * f1 / 2) ** 2
    mu2 = abs(alpha * f2 / 2) ** 2
    return InterferometerResponse(theta, f1, f2, f3, f4, mu1, mu2)


def mach_zehnder(
    input_a1: MultiModeState, alpha_a2: complex, theta: float
) -> MultiModeState:
    """Interfere a single-mode state with a reference coherent state.

    Splitter, phase theta on the upper path, splitter again (both with the
    same forward convention).  Returns the two-mode output state.
    """
    if input_a1.mode_count != 1:
        raise DimensionMismatch("upper-path input must be a single-mode state")
    state = tensor(input_a1, coherent_state(alpha_a2, input_a1.cutoff))
    spec = BeamSplitterSpec(0, 1)
    state = beam_splitter(state, spec)
    state = phase_shifter(state, PhaseShifterSpec(0, theta))
    return beam_splitter(state, spec)


@dataclass(frozen=True)
class DetectorStatistics:
    """Exact joint and marginal photon-count distributions of two detectors."""

    joint: np.ndarray        # joint[n1, n2] = P(D1 = n1, D2 = n2)
    marginal_d1: np.ndarray
    marginal_d2: np.ndarray

    @property
    def mean_d1(self) -> float:
        return float(np.arange(self.marginal_d1.size) @ self.marginal_d1)

    @property
    def mean_d2(self) -> float:
        return float(np.arange(self.marginal_d2.size) @ self.marginal_d2)


def detector_statistics(s: MultiModeState) -> DetectorStatistics:
    """Counting statistics of an ideal number-resolving detector pair."""
    if s.mode_count != 2:
        raise DimensionMismatch("detector pair expects a two-mode state")
    joint = np.abs(s.as_tensor()) ** 2
    joint.setflags(write=False)
    return DetectorStatistics(joint, joint.sum(axis=1), joint.sum(axis=0))


def poisson_pmf(n: int, mu: float) -> float:
    """exp(-mu) mu^n / n! for n = 0, 1, 2, ..."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    return math.exp(-mu) * mu**n / math.factorial(n)


@dataclass(frozen=True)
class ConditionedReport:
    """Monte Carlo detection record conditioned on D2 seeing one photon."""

    shots: int
    seed: int
    alpha: complex
    m: int
    theta: float
    d1_counts: np.ndarray                # unconditioned D1 histogram
    d2_counts: np.ndarray                # unconditioned D2 histogram
    conditioned_d1_counts: np.ndarray    # D1 histogram over shots with D2 = 1
    d2_one_frequency: float              # empirical P(D2 = 1)
    d2_one_probability_exact: float
    conditioned_d1_exact: np.ndarray
    leading_order_estimate: float        # branch-weight estimate of P(D2 = 1)


def conditional_run(
    shots: int,
    seed: int,
    alpha: complex,
    m: int,
    theta: float,
    cutoff: int | FockCutoff = 12,
) -> ConditionedReport:
    """Sample joint detector counts and aggregate the D2 = 1 slice.

    Each shot draws a joint count pair from the exact two-mode distribution
    of the full cavity-plus-interferometer run; results are deterministic
    for a fixed seed.  The leading-order estimate of the conditioning
    frequency is the dominant branch weight 1/4 times the Poisson
    probability of one photon at that branch's mean.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    cutoff = as_cutoff(cutoff)
    cavity = cavity_ns_output(alpha, m, cutoff)
    out = mach_zehnder(cavity.state, alpha, theta)
    stats = detector_statistics(out)
    dim = cutoff.dim

    flat = stats.joint.reshape(-1)
    flat = flat / flat.sum()  # strip truncation deficit for the sampler
    rng = np.random.default_rng(seed)
    draws = rng.choice(flat.size, size=shots, p=flat)
    n1, n2 = np.divmod(draws, dim)

    d1_counts = np.bincount(n1, minlength=dim)
    d2_counts = np.bincount(n2, minlength=dim)
    conditioned = np.bincount(n1[n2 == 1], minlength=dim)

    exact_p_one = float(stats.marginal_d2[1])
    conditioned_exact = stats.joint[:, 1] / exact_p_one
    response = f_functions(theta, alpha)
    mu_dominant = abs(alpha * response.f4 / 2) ** 2
    estimate = poisson_pmf(1, mu_dominant) / 4

    return ConditionedReport(
        shots=shots,
        seed=seed,
        alpha=complex(alpha),
        m=m,
        theta=theta,
        d1_counts=d1_counts,
        d2_counts=d2_counts,
        conditioned_d1_counts=conditioned,
        d2_one_frequency=float((n2 == 1).mean()),
        d2_one_probability_exact=exact_p_one,
        conditioned_d1_exact=conditioned_exact,
        leading_order_estimate=float(estimate),
    )

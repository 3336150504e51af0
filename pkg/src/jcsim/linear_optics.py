"""Mode-wise linear optics on number states and the dual-rail sign-flip net.

Beam splitter convention (fixed throughout): the creation operators of the
two addressed modes transform as

    a_i†  ->  (a_i† + a_j†) / sqrt(2),
    a_j†  ->  (a_i† - a_j†) / sqrt(2),

i.e. the symmetric real 50:50 mixing.  This single-particle matrix is a
Hadamard, so the induced Fock-space unitary is real, symmetric, and its own
inverse; the ``inverse`` flag still applies the adjoint so the intent of a
reversed element stays explicit at call sites.  The induced unitary is
number conserving, hence exact whenever the total photon number of the
input does not exceed n_max; components that would overflow a mode are
truncated.

A dual-rail qubit stores one photon across a pair of paths:
|0bar> = |0>|1> and |1bar> = |1>|0>.  The conditional sign-flip network
mixes the two "1" rails on a 50:50 splitter, applies a sign-shift gate to
each, and unmixes with the adjoint splitter, negating exactly the
|1bar>|1bar> amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import jcm
from .errors import DimensionMismatch, ModeIndexOutOfRange
from .fock import (
    FockCutoff,
    MultiModeState,
    as_cutoff,
    coherent_state,
    number_state,
    renormalize,
    tensor,
)


@dataclass(frozen=True)
class BeamSplitterSpec:
    """50:50 splitter on modes (mode_i, mode_j); mode_i carries the plus arm."""

    mode_i: int
    mode_j: int

    def __post_init__(self) -> None:
        if self.mode_i == self.mode_j:
            raise ValueError("beam splitter needs two distinct modes")


@dataclass(frozen=True)
class PhaseShifterSpec:
    """|n> -> exp(i n theta) |n> on one mode."""

    mode: int
    theta: float


@dataclass(frozen=True)
class DualRailQubit:
    """Pair of mode indices (rail carrying |1bar>, rail carrying |0bar>)."""

    mode_pair: tuple[int, int]


class DecodeError(Exception):
    """State leaks out of the one-photon-per-pair code space."""

    def __init__(self, message: str, leakage: float):
        super().__init__(message)
        self.leakage = leakage


@lru_cache(maxsize=8)
def _pair_kernel(dim: int) -> np.ndarray:
    """Two-mode matrix of the splitter, column (n, m) = image of |n, m>.

    The image is built by applying the transformed creation operators
    (a_i† ± a_j†)/sqrt(2) repeatedly to the two-mode vacuum; occupations
    beyond dim-1 are dropped.
    """
    sqrt_n = np.sqrt(np.arange(1, dim))
    kernel = np.zeros((dim * dim, dim * dim))
    for n in range(dim):
        for m in range(dim):
            coeff = np.zeros((dim, dim))
            coeff[0, 0] = 1.0
            for sign, count in ((1.0, n), (-1.0, m)):
                for _ in range(count):
                    raised = np.zeros_like(coeff)
                    raised[1:, :] += sqrt_n[:, None] * coeff[:-1, :]
                    raised[:, 1:] += sign * sqrt_n[None, :] * coeff[:, :-1]
                    coeff = raised / math.sqrt(2)
            kernel[:, n * dim + m] = coeff.ravel() / math.sqrt(
                math.factorial(n) * math.factorial(m)
            )
    kernel.setflags(write=False)
    return kernel


def _apply_pair_operator(
    s: MultiModeState, mode_i: int, mode_j: int, operator: np.ndarray
) -> MultiModeState:
    """Apply a two-mode operator to the (mode_i, mode_j) axes of a state."""
    for mode in (mode_i, mode_j):
        if not 0 <= mode < s.mode_count:
            raise ModeIndexOutOfRange(f"mode {mode} outside [0, {s.mode_count - 1}]")
    dim = s.cutoff.dim
    tens = np.moveaxis(s.as_tensor(), (mode_i, mode_j), (0, 1))
    shape = tens.shape
    mixed = operator @ tens.reshape(dim * dim, -1)
    tens = np.moveaxis(mixed.reshape(shape), (0, 1), (mode_i, mode_j))
    return s.with_amplitudes(np.ascontiguousarray(tens).reshape(-1))


def beam_splitter(
    s: MultiModeState, spec: BeamSplitterSpec, inverse: bool = False
) -> MultiModeState:
    """Apply the 50:50 splitter (or its adjoint) to two modes of a state."""
    kernel = _pair_kernel(s.cutoff.dim)
    if inverse:
        kernel = kernel.T  # real matrix, adjoint = transpose
    return _apply_pair_operator(s, spec.mode_i, spec.mode_j, kernel)


def phase_shifter(s: MultiModeState, spec: PhaseShifterSpec) -> MultiModeState:
    """Multiply each amplitude by exp(i n theta) for its occupation n."""
    if not 0 <= spec.mode < s.mode_count:
        raise ModeIndexOutOfRange(f"mode {spec.mode} outside [0, {s.mode_count - 1}]")
    dim = s.cutoff.dim
    phases = np.exp(1j * spec.theta * np.arange(dim))
    shape = [1] * s.mode_count
    shape[spec.mode] = dim
    tens = s.as_tensor() * phases.reshape(shape)
    return s.with_amplitudes(tens.reshape(-1))


@dataclass(frozen=True)
class CoherentSplitReport:
    """Fock-space splitter output versus the closed-form coherent pair."""

    alpha_in: complex
    beta_in: complex
    predicted_plus: complex
    predicted_minus: complex
    deviation_norm: float


def coherent_bs_law_check(
    alpha: complex, beta: complex, cutoff: int | FockCutoff = 12
) -> CoherentSplitReport:
    """Check the splitter sends |alpha>|beta> to |(a+b)/sqrt2>|(a-b)/sqrt2>.

    Returns the L2 deviation between the simulated two-mode output and the
    predicted coherent product; nonzero only through truncation.
    """
    cutoff = as_cutoff(cutoff)
    state = tensor(coherent_state(alpha, cutoff), coherent_state(beta, cutoff))
    out = beam_splitter(state, BeamSplitterSpec(0, 1))
    plus = (alpha + beta) / math.sqrt(2)
    minus = (alpha - beta) / math.sqrt(2)
    predicted = tensor(coherent_state(plus, cutoff), coherent_state(minus, cutoff))
    deviation = float(np.linalg.norm(out.amplitudes - predicted.amplitudes))
    return CoherentSplitReport(complex(alpha), complex(beta), plus, minus, deviation)


# -- dual-rail encoding ----------------------------------------------------


def encode_dual_rail(bit: int, cutoff: int | FockCutoff = 12) -> MultiModeState:
    """|0bar> -> |0>|1>, |1bar> -> |1>|0> on a fresh two-mode pair."""
    if bit not in (0, 1):
        raise ValueError(f"logical bit must be 0 or 1, got {bit}")
    occupations = (0, 1) if bit == 0 else (1, 0)
    return number_state(occupations, cutoff)


@dataclass(frozen=True)
class DecodedQubit:
    zero_amplitude: complex
    one_amplitude: complex
    leakage: float


def decode_dual_rail(
    s: MultiModeState,
    qubit: DualRailQubit = DualRailQubit((0, 1)),
    tolerance: float = 1e-9,
) -> DecodedQubit:
    """Read the logical amplitudes off a two-mode pair.

    Raises :class:`DecodeError` (with the leakage attached) when the weight
    outside the single-photon-per-pair subspace exceeds ``tolerance``.
    """
    if s.mode_count != 2 or set(qubit.mode_pair) != {0, 1}:
        raise DimensionMismatch("decoding expects a state on exactly the rail pair")
    first, second = qubit.mode_pair
    zero_amp = s.amplitude([0, 1] if (first, second) == (0, 1) else [1, 0])
    one_amp = s.amplitude([1, 0] if (first, second) == (0, 1) else [0, 1])
    leakage = s.norm_squared() - abs(zero_amp) ** 2 - abs(one_amp) ** 2
    leakage = max(0.0, float(leakage))
    if leakage > tolerance:
        raise DecodeError(
            f"leakage {leakage:.3e} exceeds tolerance {tolerance:.3e}", leakage
        )
    return DecodedQubit(zero_amp, one_amp, leakage)


# -- conditional sign flip ---------------------------------------------------

# Mode layout of the two-qubit register: (x1, x2, y1, y2).
_RAIL_X1, _RAIL_X2, _RAIL_Y1, _RAIL_Y2 = range(4)


def logical_basis_state(j: int, k: int, cutoff: int | FockCutoff = 12) -> MultiModeState:
    """|jbar>|kbar> on the four-mode register (x1, x2, y1, y2)."""
    if j not in (0, 1) or k not in (0, 1):
        raise ValueError("logical labels must be 0 or 1")
    x = (0, 1) if j == 0 else (1, 0)
    y = (0, 1) if k == 0 else (1, 0)
    return number_state(x + y, cutoff)


def csf_gate(
    s: MultiModeState, ns_mode: str = "ideal", m: int = 3
) -> tuple[MultiModeState, float]:
    """Conditional sign flip on two dual-rail qubits (modes x1,x2,y1,y2).

    Splitter on (x1, y1), a sign-shift gate on each of x1 and y1, then the
    adjoint splitter.  ``ns_mode`` selects the exact gate (``"ideal"``) or
    the atom-heralded realization (``"jcm"``) at odd index ``m``; in the
    latter case both atoms must be found in |g> and the returned probability
    is the compound herald probability (1 for the ideal gate).  The heralded
    gate includes the compensating phase shifter whenever d(m) < 0.
    """
    if s.mode_count != 4:
        raise DimensionMismatch("the network acts on four modes (x1, x2, y1, y2)")
    if not s.is_normalized:
        raise ValueError("input state must be normalized")
    dim = s.cutoff.dim

    if ns_mode == "ideal":
        diag = np.ones(dim, dtype=np.complex128)
        diag[2] = -1.0
    elif ns_mode == "jcm":
        _, d = jcm.cm_dm(m)
        diag = jcm.ns_post_selected_diagonal(m, s.cutoff, apply_compensating_phase=d < 0)
    else:
        raise ValueError(f"ns_mode must be 'ideal' or 'jcm', got {ns_mode!r}")

    spec = BeamSplitterSpec(_RAIL_X1, _RAIL_Y1)
    out = beam_splitter(s, spec)
    tens = out.as_tensor() * diag[:, None, None, None] * diag[None, None, :, None]
    out = out.with_amplitudes(tens.reshape(-1))
    success_probability = out.norm_squared()
    out = renormalize(out)
    out = beam_splitter(out, spec, inverse=True)
    return out, float(success_probability)


def csf_truth_table(
    ns_mode: str = "ideal", m: int = 3, cutoff: int | FockCutoff = 6
) -> list[dict]:
    """Gate action on the four logical basis states, with herald probabilities."""
    rows = []
    for j in (0, 1):
        for k in (0, 1):
            state_in = logical_basis_state(j, k, cutoff)
            state_out, probability = csf_gate(state_in, ns_mode=ns_mode, m=m)
            amplitudes = {
                f"{a}{b}": state_out.amplitude(
                    ((0, 1) if a == 0 else (1, 0)) + ((0, 1) if b == 0 else (1, 0))
                )
                for a in (0, 1)
                for b in (0, 1)
            }
            kept = sum(abs(z) ** 2 for z in amplitudes.values())
            rows.append(
                {
                    "input": f"{j}{k}",
                    "amplitudes": amplitudes,
                    "success_probability": probability,
                    "leakage": max(0.0, state_out.norm_squared() - kept),
                }
            )
    return rows

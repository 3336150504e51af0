"""Resonant two-level-atom / single-mode dynamics and the sign-shift gate.

The coupling generator kappa*(sigma_+ a + sigma_- a†) conserves the total
excitation number N = (photon number) + (1 if the atom is excited), so its
propagator U(t) = exp(-i t H) is block diagonal: a 1x1 identity block on
|g,0> and, for each N >= 1, a 2x2 rotation on {|e,N-1>, |g,N>},

    [[ cos(|k| sqrt(N) t),            -i e^{i phi} sin(|k| sqrt(N) t) ],
     [ -i e^{-i phi} sin(|k| sqrt(N) t),           cos(|k| sqrt(N) t) ]],

where phi is the phase of the coupling constant.  The blocks are built in
closed form, so the evolution is unitary to machine precision with no
truncation artifacts.  The top orphan state |e, n_max> (whose partner
|g, n_max+1> lies beyond the cutoff) is held fixed, which is exactly what
the dense matrix exponential of the truncated generator does.

Sign-shift protocol: evolve |g> (x) (photon state) for

    t_m = (2m+1) pi / (sqrt(2) |kappa|),   m = 0, 1, 2, ...

and keep only runs where the atom is detected in |g>.  At t_m the
two-photon component picks up exactly -1 while the single-photon component
is scaled by d(m) = cos((2m+1) pi / sqrt(2)); the run fails (atom found in
|e>) with probability |c(m)|^2 = 1 - d(m)^2 per unit of single-photon
weight.  For odd-sign d(m) (the m=3 route) a lossless (-1)^n phase shifter
restores the |1> sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ZeroStateError
from .fock import FockCutoff, MultiModeState, as_cutoff, renormalize


@dataclass(frozen=True)
class AtomState:
    """Two-level atom amplitudes on the (ground, excited) basis."""

    g_component: complex
    e_component: complex

    @property
    def is_normalized(self) -> bool:
        total = abs(self.g_component) ** 2 + abs(self.e_component) ** 2
        return abs(total - 1.0) <= 1e-9


ATOM_GROUND = AtomState(1.0, 0.0)
ATOM_EXCITED = AtomState(0.0, 1.0)


@dataclass(frozen=True)
class JCMParams:
    """Coupling magnitude (s^-1), coupling phase (rad), interaction time (s)."""

    kappa_abs: float
    kappa_phase: float = 0.0
    time: float = 0.0

    def __post_init__(self) -> None:
        if self.kappa_abs <= 0:
            raise ValueError(f"kappa_abs must be positive, got {self.kappa_abs}")
        if self.time < 0:
            raise ValueError(f"time must be non-negative, got {self.time}")


@dataclass(frozen=True, eq=False)
class AtomFieldState:
    """Atom (x) single field mode, as a vector over {|g,n>} then {|e,n>}.

    The amplitude layout is the ground block for n = 0..n_max followed by
    the excited block for n = 0..n_max.
    """

    cutoff: FockCutoff
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 * self.cutoff.dim,):
            raise DimensionMismatch(
                f"expected {2 * self.cutoff.dim} amplitudes, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_product(cls, atom: AtomState, photons: MultiModeState) -> "AtomFieldState":
        if photons.mode_count != 1:
            raise DimensionMismatch("atom couples to exactly one field mode")
        amps = np.concatenate(
            [atom.g_component * photons.amplitudes, atom.e_component * photons.amplitudes]
        )
        return cls(photons.cutoff, amps)

    @property
    def g_block(self) -> np.ndarray:
        return self.amplitudes[: self.cutoff.dim]

    @property
    def e_block(self) -> np.ndarray:
        return self.amplitudes[self.cutoff.dim :]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def excitation_weights(self) -> np.ndarray:
        """Probability mass per total-excitation block N = 0..n_max+1."""
        weights = np.zeros(self.cutoff.dim + 1)
        weights[: self.cutoff.dim] += np.abs(self.g_block) ** 2
        weights[1:] += np.abs(self.e_block) ** 2
        return weights


def jcm_propagate(s: AtomFieldState, p: JCMParams) -> AtomFieldState:
    """Apply the exact propagator U(t) block by block."""
    dim = s.cutoff.dim
    g, e = s.g_block, s.e_block
    theta = p.kappa_abs * np.sqrt(np.arange(1, dim)) * p.time
    c, sn = np.cos(theta), np.sin(theta)
    phase = cmath.exp(1j * p.kappa_phase)

    out = np.empty(2 * dim, dtype=np.complex128)
    out[0] = g[0]                       # N = 0 block
    out[2 * dim - 1] = e[dim - 1]       # orphan |e, n_max>, partner truncated
    # N = 1..n_max blocks on (|g,N>, |e,N-1>)
    out[1:dim] = c * g[1:] - 1j * np.conj(phase) * sn * e[: dim - 1]
    out[dim : 2 * dim - 1] = -1j * phase * sn * g[1:] + c * e[: dim - 1]
    return AtomFieldState(s.cutoff, out)


def ns_gate_times(kappa_abs: float, m: int) -> float:
    """Interaction time (2m+1) pi / (sqrt(2) kappa_abs) for the sign flip."""
    if m < 0:
        raise ValueError(f"m must be a non-negative integer, got {m}")
    return (2 * m + 1) * math.pi / (math.sqrt(2) * kappa_abs)


def cm_dm(m: int, kappa_phase: float = 0.0) -> tuple[complex, float]:
    """Leak amplitude c(m) and survival coefficient d(m) of the |1> sector.

    d(m) = cos((2m+1) pi / sqrt(2)); c(m) carries the propagator's
    -i e^{i phi} convention so that U(t_m)|g,1> = c(m)|e,0> + d(m)|g,1>
    holds exactly.
    """
    angle = (2 * m + 1) * math.pi / math.sqrt(2)
    d = math.cos(angle)
    c = -1j * cmath.exp(1j * kappa_phase) * math.sin(angle)
    return c, d


def ns_post_selected_diagonal(
    m: int, cutoff: int | FockCutoff, apply_compensating_phase: bool = False
) -> np.ndarray:
    """Diagonal photon-number action of the gate heralded on the atom in |g>.

    Projecting U(t_m) (|g> (x) |n>) back onto the ground state leaves the
    photon amplitude scaled by cos(sqrt(n) (2m+1) pi / sqrt(2)); the
    optional (-1)^n factor models the compensating phase shifter.
    """
    cutoff = as_cutoff(cutoff)
    n = np.arange(cutoff.dim)
    diag = np.cos(np.sqrt(n) * (2 * m + 1) * math.pi / math.sqrt(2)).astype(
        np.complex128
    )
    if apply_compensating_phase:
        diag *= (-1.0) ** n
    return diag


@dataclass(frozen=True)
class NSGateResult:
    """Post-selected gate output together with the herald probability."""

    output: MultiModeState
    success_probability: float
    m: int
    c_m: complex
    d_m: float


def ns_gate(
    input_state: MultiModeState,
    m: int,
    apply_compensating_phase: bool = False,
    kappa_abs: float = 1.0,
    kappa_phase: float = 0.0,
) -> NSGateResult:
    """Run the full atom-field protocol and post-select the atom in |g>.

    Builds |g> (x) input, evolves for t_m, projects onto the ground state,
    renormalizes, and optionally applies the (-1)^n compensator.  The
    success probability is the squared norm of the unnormalized projection.
    """
    if input_state.mode_count != 1:
        raise DimensionMismatch("the gate acts on a single-mode state")
    if not input_state.is_normalized:
        raise ValueError("input state must be normalized")
    joint = AtomFieldState.from_product(ATOM_GROUND, input_state)
    params = JCMParams(kappa_abs, kappa_phase, ns_gate_times(kappa_abs, m))
    evolved = jcm_propagate(joint, params)

    surviving = MultiModeState(1, input_state.cutoff, evolved.g_block)
    success_probability = surviving.norm_squared()
    if success_probability == 0.0:
        raise ZeroStateError("atom is never found in |g>; nothing to post-select")
    output = renormalize(surviving)
    if apply_compensating_phase:
        signs = (-1.0) ** np.arange(input_state.cutoff.dim)
        output = output.with_amplitudes(output.amplitudes * signs)
    c, d = cm_dm(m, kappa_phase)
    return NSGateResult(output, success_probability, m, c, d)


def ns_gate_ideal(input_state: MultiModeState) -> MultiModeState:
    """Exact limit of the gate: negate the two-photon amplitude.

    Defined on support {|0>, |1>, |2>}; higher occupations, which the
    protocol is never fed, pass through unchanged.
    """
    if input_state.mode_count != 1:
        raise DimensionMismatch("the gate acts on a single-mode state")
    amps = input_state.amplitudes.copy()
    amps[2] = -amps[2]
    return input_state.with_amplitudes(amps)


def table1() -> list[tuple[int, float, float]]:
    """Rows (m, |c(m)|^2, d(m)) for m = 0..4."""
    rows = []
    for m in range(5):
        c, d = cm_dm(m)
        rows.append((m, abs(c) ** 2, d))
    return rows

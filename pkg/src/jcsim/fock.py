"""Truncated Fock-space representation of one or more bosonic modes.

Every state is a dense complex vector over the multimode number basis
|n_1, ..., n_k> with each n_i <= n_max.  The flat index is row-major with
mode 0 slowest,

    index(n_1, ..., n_k) = n_1 * (n_max+1)**(k-1) + ... + n_k,

and this ordering is part of the serialization contract: a state written
to JSON on one machine reconstructs identically on another.

Coherent amplitudes are plain complex scalars.  Coherent states are stored
truncated but *not* renormalized, so the squared norm directly exposes the
truncation deficit; callers that need a unit vector apply ``renormalize``
explicitly.

States are immutable values: every operation returns a new state and the
underlying numpy buffers are marked read-only.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    CutoffMismatch,
    DimensionMismatch,
    ModeIndexOutOfRange,
    OccupationExceedsCutoff,
    ZeroStateError,
)

#: Tolerance on |norm^2 - 1| below which a state counts as normalized.
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class FockCutoff:
    """Maximum photon number retained per mode."""

    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise ValueError(
                f"n_max must be >= 2 (two-photon states are essential), got {self.n_max}"
            )

    @property
    def dim(self) -> int:
        """Single-mode dimension n_max + 1."""
        return self.n_max + 1


def as_cutoff(cutoff: int | FockCutoff) -> FockCutoff:
    """Coerce a bare integer into a :class:`FockCutoff`."""
    if isinstance(cutoff, FockCutoff):
        return cutoff
    return FockCutoff(int(cutoff))


@dataclass(frozen=True, eq=False)
class MultiModeState:
    """Dense state vector over the truncated multimode number basis."""

    mode_count: int
    cutoff: FockCutoff
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.mode_count < 1:
            raise ValueError(f"mode_count must be >= 1, got {self.mode_count}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        expected = self.cutoff.dim**self.mode_count
        if amps.shape != (expected,):
            raise DimensionMismatch(
                f"expected {expected} amplitudes for {self.mode_count} mode(s) "
                f"at n_max={self.cutoff.n_max}, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    # -- basic geometry ------------------------------------------------

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) <= NORMALIZATION_TOL

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per mode (read-only view)."""
        dim = self.cutoff.dim
        return self.amplitudes.reshape((dim,) * self.mode_count)

    def index_of(self, occupations: Sequence[int]) -> int:
        """Flat index of the basis state with the given occupation numbers."""
        self._check_occupations(occupations)
        dim = self.cutoff.dim
        idx = 0
        for n in occupations:
            idx = idx * dim + int(n)
        return idx

    def amplitude(self, occupations: Sequence[int]) -> complex:
        """Amplitude on the basis state |n_1, ..., n_k>."""
        return complex(self.amplitudes[self.index_of(occupations)])

    def _check_occupations(self, occupations: Sequence[int]) -> None:
        if len(occupations) != self.mode_count:
            raise DimensionMismatch(
                f"expected {self.mode_count} occupation numbers, got {len(occupations)}"
            )
        for n in occupations:
            if not 0 <= int(n) <= self.cutoff.n_max:
                raise OccupationExceedsCutoff(
                    f"occupation {n} outside [0, {self.cutoff.n_max}]"
                )

    def with_amplitudes(self, amplitudes: np.ndarray) -> "MultiModeState":
        """New state with the same shape but different amplitudes."""
        return MultiModeState(self.mode_count, self.cutoff, amplitudes)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON-ready dict {mode_count, n_max, amplitudes: [[re, im], ...]}."""
        return {
            "mode_count": self.mode_count,
            "n_max": self.cutoff.n_max,
            "amplitudes": [[z.real, z.imag] for z in self.amplitudes],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "MultiModeState":
        amps = np.array(
            [complex(re, im) for re, im in payload["amplitudes"]], dtype=np.complex128
        )
        return cls(int(payload["mode_count"]), FockCutoff(int(payload["n_max"])), amps)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "MultiModeState":
        return cls.from_json_dict(json.loads(text))


# -- constructors --------------------------------------------------------


def vacuum(mode_count: int, cutoff: int | FockCutoff) -> MultiModeState:
    """The multimode vacuum |0, ..., 0>."""
    cutoff = as_cutoff(cutoff)
    amps = np.zeros(cutoff.dim**mode_count, dtype=np.complex128)
    amps[0] = 1.0
    return MultiModeState(mode_count, cutoff, amps)


def number_state(ns: Sequence[int], cutoff: int | FockCutoff) -> MultiModeState:
    """The basis state |n_1, ..., n_k>."""
    cutoff = as_cutoff(cutoff)
    idx = 0
    for n in ns:
        if not 0 <= int(n) <= cutoff.n_max:
            raise OccupationExceedsCutoff(f"occupation {n} outside [0, {cutoff.n_max}]")
        idx = idx * cutoff.dim + int(n)
    amps = np.zeros(cutoff.dim ** len(ns), dtype=np.complex128)
    amps[idx] = 1.0
    return MultiModeState(len(ns), cutoff, amps)


def coherent_state(alpha: complex, cutoff: int | FockCutoff) -> MultiModeState:
    """Single-mode coherent state, truncated at n_max and not renormalized.

    Amplitudes are exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n <= n_max, so
    ``norm_squared`` reports 1 minus the truncated Poisson tail.
    """
    cutoff = as_cutoff(cutoff)
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    if mean > cutoff.n_max / 4:
        warnings.warn(
            f"|alpha|^2 = {mean:.3g} exceeds n_max/4 = {cutoff.n_max / 4:.3g}; "
            "truncation error grows rapidly in this regime",
            stacklevel=2,
        )
    n = np.arange(cutoff.dim)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, cutoff.dim))]))
    amps = np.exp(-mean / 2) * alpha**n / np.exp(0.5 * log_fact)
    return MultiModeState(1, cutoff, amps.astype(np.complex128))


# -- operations -----------------------------------------------------------


def overlap(a: MultiModeState, b: MultiModeState) -> complex:
    """Inner product <a|b> (conjugation on ``a``)."""
    if a.mode_count != b.mode_count or a.cutoff != b.cutoff:
        raise DimensionMismatch(
            f"states live in different spaces: "
            f"({a.mode_count} modes, n_max={a.cutoff.n_max}) vs "
            f"({b.mode_count} modes, n_max={b.cutoff.n_max})"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def renormalize(s: MultiModeState) -> MultiModeState:
    """Scale to unit norm, preserving direction and global phase."""
    nrm = s.norm()
    if nrm == 0.0:
        raise ZeroStateError("cannot renormalize the zero vector")
    return s.with_amplitudes(s.amplitudes / nrm)


def tensor(a: MultiModeState, b: MultiModeState) -> MultiModeState:
    """Tensor product; modes of ``a`` come first (and stay slowest)."""
    if a.cutoff != b.cutoff:
        raise CutoffMismatch(
            f"cutoffs differ: n_max={a.cutoff.n_max} vs n_max={b.cutoff.n_max}"
        )
    amps = np.kron(a.amplitudes, b.amplitudes)
    return MultiModeState(a.mode_count + b.mode_count, a.cutoff, amps)


def partial_trace_probabilities(s: MultiModeState, mode: int) -> np.ndarray:
    """Photon-count distribution P(n) on one mode of a normalized state."""
    if not 0 <= mode < s.mode_count:
        raise ModeIndexOutOfRange(
            f"mode {mode} outside [0, {s.mode_count - 1}]"
        )
    probs = np.abs(s.as_tensor()) ** 2
    axes = tuple(ax for ax in range(s.mode_count) if ax != mode)
    return probs.sum(axis=axes) if axes else probs.copy()

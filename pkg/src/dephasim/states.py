"""Initial states of the studied entanglement classes and their closed-form evolution.

Two-qubit classes live in the basis |1..4> = |++>, |+->, |-+>, |-->; the
three-qubit classes in |1..8> = |000> .. |111> (A the leftmost factor in
both).  ``analytic_evolved`` reproduces the published elementwise decay
factors directly and serves as an independent reference for the Kraus
evolution in :mod:`dephasim.channels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .channels import ChannelKind, Local, NoiseScenario, PairCollective, TripleCollective, gamma
from .errors import UnsupportedScenarioError
from .linalg import QUBITS, partial_trace, qubit_bit

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on a qubit register."""

    matrix: np.ndarray
    register: tuple[str, ...]

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "register", tuple(self.register))
        if (
            any(q not in QUBITS for q in self.register)
            or len(set(self.register)) != len(self.register)
            or tuple(sorted(self.register, key=QUBITS.index)) != self.register
        ):
            raise ValueError(f"bad register {self.register!r}")
        dim = 1 << len(self.register)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match register {self.register}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
            raise ValueError("matrix is not Hermitian within 1e-12")
        if abs(np.trace(mat).real - 1.0) > 1e-12 or abs(np.trace(mat).imag) > 1e-12:
            raise ValueError(f"trace is {np.trace(mat):.15g}, expected 1")
        if np.min(np.linalg.eigvalsh(mat)) < -1e-10:
            raise ValueError("matrix has an eigenvalue below -1e-10")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Fragile:
    """Two-qubit class losing every coherence under collective dephasing."""

    a: complex
    b: complex
    d: complex

    name = "fragile"
    register = ("A", "B")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.a, self.b, 0.0, self.d], dtype=complex)


@dataclass(frozen=True)
class Fragile2:
    """Mirror form of the fragile class (support on |1>, |3>, |4>)."""

    a: complex
    c: complex
    d: complex

    name = "fragile2"
    register = ("A", "B")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.a, 0.0, self.c, self.d], dtype=complex)


@dataclass(frozen=True)
class Robust:
    """Two-qubit class keeping some coherence (and all entanglement) under collective dephasing."""

    a: complex
    b: complex
    c: complex

    name = "robust"
    register = ("A", "B")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, 0.0], dtype=complex)


@dataclass(frozen=True)
class Robust2:
    """Mirror form of the robust class (support on |2>, |3>, |4>)."""

    b: complex
    c: complex
    d: complex

    name = "robust2"
    register = ("A", "B")

    def amplitudes(self) -> np.ndarray:
        return np.array([0.0, self.b, self.c, self.d], dtype=complex)


@dataclass(frozen=True)
class GenericPure:
    """Arbitrary two-qubit pure state."""

    a: complex
    b: complex
    c: complex
    d: complex

    name = "generic"
    register = ("A", "B")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)


@dataclass(frozen=True)
class WState:
    """Three-qubit W class: support on |001>, |010>, |100>."""

    a1: complex
    a2: complex
    a4: complex

    name = "w"
    register = ("A", "B", "C")

    def amplitudes(self) -> np.ndarray:
        v = np.zeros(8, dtype=complex)
        v[1], v[2], v[4] = self.a1, self.a2, self.a4
        return v


@dataclass(frozen=True)
class GHZState:
    """Three-qubit GHZ class: support on |000> and |111>."""

    a0: complex
    a7: complex

    name = "ghz"
    register = ("A", "B", "C")

    def amplitudes(self) -> np.ndarray:
        v = np.zeros(8, dtype=complex)
        v[0], v[7] = self.a0, self.a7
        return v


StateSpec = Union[Fragile, Fragile2, Robust, Robust2, GenericPure, WState, GHZState]


def projector(spec: StateSpec) -> DensityMatrix:
    """Rank-1 density matrix of the pure state described by `spec`."""
    v = spec.amplitudes()
    norm_sq = float(np.sum(np.abs(v) ** 2))
    if abs(norm_sq - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"coefficients are not normalized: sum |c|^2 = {norm_sq:.12g}")
    return DensityMatrix(np.outer(v, v.conj()), spec.register)


def _local_factor(qubit: str, register: tuple[str, ...], g: float) -> np.ndarray:
    dim = 1 << len(register)
    bits = np.array([qubit_bit(i, qubit, register) for i in range(dim)])
    return np.where(bits[:, None] != bits[None, :], g, 1.0)


# Elementwise decay of a collectively dephased pair, indexed by the pair
# subspace values (00, 01, 10, 11) of row and column.
def _pair_table(g: float) -> np.ndarray:
    g4 = g**4
    return np.array(
        [
            [1.0, g, g, g4],
            [g, 1.0, 1.0, g],
            [g, 1.0, 1.0, g],
            [g4, g, g, 1.0],
        ]
    )


def _pair_factor(kind: PairCollective, register: tuple[str, ...], g: float) -> np.ndarray:
    dim = 1 << len(register)
    sub = np.array(
        [
            (qubit_bit(i, kind.first, register) << 1) | qubit_bit(i, kind.second, register)
            for i in range(dim)
        ]
    )
    return _pair_table(g)[sub[:, None], sub[None, :]]


def _triple_factor(g: float) -> np.ndarray:
    idx = np.arange(8)
    corner = (idx == 0) | (idx == 7)
    factor = np.ones((8, 8))
    factor[corner[:, None] ^ corner[None, :]] = g
    factor[0, 7] = factor[7, 0] = g**4
    return factor


def _channel_factor(kind: ChannelKind, register: tuple[str, ...], g: float) -> np.ndarray:
    if isinstance(kind, Local):
        return _local_factor(kind.qubit, register, g)
    if isinstance(kind, PairCollective):
        return _pair_factor(kind, register, g)
    if isinstance(kind, TripleCollective):
        return _triple_factor(g)
    raise UnsupportedScenarioError(f"no closed-form factors for channel {kind!r}")


def analytic_evolved(spec: StateSpec, scenario: NoiseScenario, t: float) -> DensityMatrix:
    """Evolved state from the published elementwise decay factors.

    Each coherence (i, j) is multiplied by the product of its per-channel
    decay factor at time t; populations are untouched.  Used purely as an
    independent reference against the operator-sum evolution.
    """
    if len(spec.register) != scenario.register_size:
        raise ValueError(
            f"state register {spec.register} does not match a "
            f"{scenario.register_size}-qubit scenario"
        )
    if scenario.allow_overlap:
        raise UnsupportedScenarioError(
            "overlapping-support scenarios have no closed-form reference"
        )
    rho0 = projector(spec)
    factor = np.ones((rho0.dim, rho0.dim))
    for kind, rate in scenario.channels:
        factor *= _channel_factor(kind, spec.register, gamma(rate, t))
    return DensityMatrix(rho0.matrix * factor, spec.register)


def reduced_all(rho: DensityMatrix) -> dict[tuple[str, ...], DensityMatrix]:
    """Every one- and two-qubit reduced matrix of `rho`, keyed by kept qubits."""
    n = len(rho.register)
    subsets: list[tuple[str, ...]] = [(q,) for q in rho.register]
    if n == 3:
        subsets += [
            (rho.register[0], rho.register[1]),
            (rho.register[0], rho.register[2]),
            (rho.register[1], rho.register[2]),
        ]
    return {
        keep: DensityMatrix(partial_trace(rho.matrix, keep, rho.register), keep)
        for keep in subsets
    }

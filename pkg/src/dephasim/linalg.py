"""Dense complex matrix arithmetic for registers of up to three qubits.

Tensor-factor convention: qubit A is the leftmost (most significant) factor,
so basis index ``i`` of an n-qubit register carries the bit of qubit A in its
highest bit.  All matrices are plain ``numpy`` arrays.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

QUBITS = ("A", "B", "C")

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor most significant."""
    return np.kron(np.asarray(a), np.asarray(b))


def qubit_bit(index: int, qubit: str, register: Sequence[str]) -> int:
    """Bit of `qubit` in basis `index` for the given ordered register."""
    pos = tuple(register).index(qubit)
    return (index >> (len(register) - 1 - pos)) & 1


def partial_trace(
    rho: np.ndarray,
    keep: Iterable[str],
    total: Sequence[str],
) -> np.ndarray:
    """Reduced matrix on the `keep` qubits, tracing out the rest of `total`.

    `total` is the ordered register (subset of A < B < C); `keep` must be a
    nonempty subset of it.  The result keeps the surviving factors in their
    original order.  Leading batch axes of `rho` are passed through.
    """
    total = tuple(total)
    keep_set = set(keep)
    if not keep_set:
        raise ValueError("keep must not be empty")
    extra = keep_set - set(total)
    if extra:
        raise ValueError(f"keep contains qubits outside the register: {sorted(extra)}")

    n = len(total)
    dim = 1 << n
    rho = np.asarray(rho)
    if rho.shape[-2:] != (dim, dim):
        raise ValueError(
            f"matrix of shape {rho.shape[-2:]} does not match a {n}-qubit register"
        )

    batch = rho.shape[:-2]
    work = rho.reshape(batch + (2,) * n + (2,) * n)
    offset = len(batch)
    remaining = n
    for pos in reversed(range(n)):
        if total[pos] in keep_set:
            continue
        work = np.trace(work, axis1=offset + pos, axis2=offset + remaining + pos)
        remaining -= 1
    d = 1 << len(keep_set)
    return work.reshape(batch + (d, d))


def hermitian_eigenvalues(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Raises ValueError if the input deviates from Hermiticity by more than
    `tol` in any entry.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.conj().T))
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return np.linalg.eigvalsh(m)[::-1]


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of a - b."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))

"""Dense complex linear algebra for small Hilbert spaces.

Vectors and operators are immutable wrappers around complex128 numpy
arrays.  Every dimension used in practice is 2, 4, or 8, so all storage
is dense and every check is exact to double precision.

Two tolerance regimes are used throughout the package:

* ``TOL_NORM`` (1e-12) guards objects the package constructs itself.
* ``TOL_CHECK`` (1e-9) is the default for data supplied by callers or
  loaded from files.

All operations here are pure functions on immutable values and are safe
to call from multiple threads.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TOL_NORM",
    "TOL_CHECK",
    "Amplitude",
    "DegenerateSpanError",
    "StateVector",
    "Operator",
    "identity",
    "tensor",
    "inner",
    "projector",
    "apply",
    "certain_value",
    "are_exclusive",
    "exclusivity_deviation",
    "identity_deviation",
    "is_resolution_of_identity",
    "orthocomplement_state",
]

TOL_NORM = 1e-12
TOL_CHECK = 1e-9

# Amplitudes are plain Python complex numbers.
Amplitude = complex

# Coordinates with magnitude above this anchor the global-phase
# canonicalization in orthocomplement_state.  Unit vectors in dimension
# <= 8 always have a coordinate of magnitude >= 1/sqrt(8).
_PHASE_ANCHOR_TOL = 1e-9


class DegenerateSpanError(ValueError):
    """The input states do not span a subspace of the expected rank."""


class StateVector:
    """Unit vector in a finite-dimensional Hilbert space.

    Args:
        amps: flat sequence of complex amplitudes, length >= 2.
        tol_norm: maximum allowed deviation of the Euclidean norm from 1.

    Raises:
        ValueError: non-flat input, dimension < 2, non-finite entries,
            or a norm deviating from 1 by more than ``tol_norm``.
    """

    __slots__ = ("_amps",)

    def __init__(self, amps, tol_norm: float = TOL_NORM) -> None:
        arr = np.array(amps, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError(f"amplitudes must form a flat sequence, got shape {arr.shape}")
        if arr.size < 2:
            raise ValueError(f"dimension must be at least 2, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > tol_norm:
            raise ValueError(
                f"norm deviates from 1 by {abs(norm - 1.0):.3e}, tolerance {tol_norm:.1e}"
            )
        arr.setflags(write=False)
        self._amps = arr

    @property
    def dim(self) -> int:
        return self._amps.size

    @property
    def amps(self) -> np.ndarray:
        """Read-only complex128 array of amplitudes."""
        return self._amps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return bool(np.array_equal(self._amps, other._amps))

    __hash__ = None  # mutable-looking payload; equality is exact array equality

    def __repr__(self) -> str:
        return f"StateVector({self._amps.tolist()!r})"


class Operator:
    """Square complex matrix acting on a small Hilbert space.

    The constructor only enforces shape and finiteness; whether the
    operator is Hermitian or idempotent is a question answered by the
    predicates below, each within a caller-chosen tolerance.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries) -> None:
        arr = np.array(entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"entries must form a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr.setflags(write=False)
        self._entries = arr

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only complex128 matrix."""
        return self._entries

    def is_hermitian(self, tol: float = TOL_CHECK) -> bool:
        return float(np.max(np.abs(self._entries - self._entries.conj().T))) < tol

    def is_idempotent(self, tol: float = TOL_CHECK) -> bool:
        return float(np.max(np.abs(self._entries @ self._entries - self._entries))) < tol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return bool(np.array_equal(self._entries, other._entries))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim})"


def identity(dim: int) -> Operator:
    """The identity operator on a dim-dimensional space."""
    return Operator(np.eye(dim, dtype=np.complex128))


def tensor(u: StateVector, v: StateVector) -> StateVector:
    """Tensor product of two states.

    The result lives in the product space with amplitude layout
    amps[i * v.dim + j] = u.amps[i] * v.amps[j], so the product basis of
    two qubits is ordered (00, 01, 10, 11).
    """
    return StateVector(np.kron(u.amps, v.amps), tol_norm=TOL_NORM)


def inner(u: StateVector, v: StateVector) -> Amplitude:
    """Inner product <u|v>, conjugate-linear in the first argument."""
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} != {v.dim}")
    return complex(np.vdot(u.amps, v.amps))


def projector(u: StateVector) -> Operator:
    """Rank-1 projector |u><u| onto the given unit vector."""
    return Operator(np.outer(u.amps, u.amps.conj()))


def apply(P: Operator, v: StateVector) -> np.ndarray:
    """Matrix-vector product P|v> as a raw, possibly unnormalized array."""
    if P.dim != v.dim:
        raise ValueError(f"dimension mismatch: operator dim {P.dim}, state dim {v.dim}")
    return P.entries @ v.amps


def certain_value(P: Operator, s: StateVector, tol: float = TOL_CHECK) -> int | None:
    """Definite 0/1 outcome of measuring projector P on state s, if any.

    Returns 0 when P annihilates s (||P s|| < tol), 1 when s is an
    eigenvalue-1 eigenstate (||P s - s|| < tol), and None otherwise.

    Raises:
        ValueError: dimension mismatch, or P is not a projector
            (Hermitian and idempotent) within tolerance.
    """
    if P.dim != s.dim:
        raise ValueError(f"dimension mismatch: operator dim {P.dim}, state dim {s.dim}")
    ptol = max(tol, TOL_NORM)
    if not (P.is_hermitian(ptol) and P.is_idempotent(ptol)):
        raise ValueError("operator is not a projector within tolerance")
    image = P.entries @ s.amps
    if float(np.linalg.norm(image)) < tol:
        return 0
    if float(np.linalg.norm(image - s.amps)) < tol:
        return 1
    return None


def exclusivity_deviation(P: Operator, Q: Operator) -> float:
    """Largest entry magnitude of P Q; zero means mutually exclusive."""
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} != {Q.dim}")
    return float(np.max(np.abs(P.entries @ Q.entries)))


def are_exclusive(P: Operator, Q: Operator, tol: float = TOL_CHECK) -> bool:
    """True when every entry of P Q has magnitude below tol."""
    return exclusivity_deviation(P, Q) < tol


def identity_deviation(ops: list[Operator]) -> float:
    """Largest entry magnitude of (sum of ops) - I."""
    if not ops:
        raise ValueError("empty operator list")
    dim = ops[0].dim
    for op in ops:
        if op.dim != dim:
            raise ValueError(f"dimension mismatch: {op.dim} != {dim}")
    total = sum(op.entries for op in ops) - np.eye(dim, dtype=np.complex128)
    return float(np.max(np.abs(total)))


def is_resolution_of_identity(ops: list[Operator], tol: float = TOL_CHECK) -> bool:
    """True when the operators sum to I and are pairwise exclusive.

    Both conditions are entrywise: the largest entry magnitude of
    (sum - I) must stay below tol, and so must every pairwise product.

    Raises:
        ValueError: empty list or mixed dimensions.
    """
    if not ops:
        raise ValueError("empty operator list")
    if identity_deviation(ops) >= tol:
        return False
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if exclusivity_deviation(ops[i], ops[j]) >= tol:
                return False
    return True


def orthocomplement_state(states: list[StateVector], tol: float = TOL_CHECK) -> StateVector:
    """The unit vector orthogonal to dim-1 given states, canonically phased.

    The result is the (unique up to phase) vector annihilated by every
    <state|, computed from the SVD null space of the stacked bra matrix.
    The global phase is fixed by making the first coordinate of
    magnitude above 1e-9 real and positive, so outputs are reproducible.

    Raises:
        ValueError: wrong number of states or mixed dimensions.
        DegenerateSpanError: the inputs span fewer than dim-1 dimensions
            (smallest singular value below tol).
    """
    if not states:
        raise ValueError("at least one state is required")
    dim = states[0].dim
    for s in states:
        if s.dim != dim:
            raise ValueError(f"dimension mismatch: {s.dim} != {dim}")
    if len(states) != dim - 1:
        raise ValueError(f"expected dim - 1 = {dim - 1} states, got {len(states)}")
    bras = np.vstack([s.amps.conj() for s in states])
    _, singular, vh = np.linalg.svd(bras)
    if float(singular[-1]) < tol:
        raise DegenerateSpanError(
            f"degenerate configuration: input span has rank below {dim - 1} "
            f"(smallest singular value {float(singular[-1]):.3e})"
        )
    null_vec = vh[-1].conj()
    anchor = int(np.argmax(np.abs(null_vec) > _PHASE_ANCHOR_TOL))
    phase = null_vec[anchor] / abs(null_vec[anchor])
    null_vec = null_vec / phase
    null_vec = null_vec / np.linalg.norm(null_vec)
    return StateVector(null_vec, tol_norm=TOL_NORM)

"""Dense operators on (C^d)^{otimes n}.

Slots are zero-based here.  For a walled operator on ``2p`` slots the
labels ``1..p`` sit on slots ``0..p-1`` and the primed labels ``k'`` sit on
slot ``2p - k``, so ``p`` and ``p'`` are the adjacent slots ``p-1`` and ``p``
and the right half reads ``p', ..., 1'`` from left to right.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .symgroup import Permutation

MAGIC = b"WBAOP1"


@dataclass(frozen=True, eq=False)
class DenseOperator:
    local_dim: int
    arity: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        size = self.local_dim ** self.arity
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (size, size):
            raise ValueError(
                f"entries of shape {entries.shape} do not fit arity {self.arity}, d={self.local_dim}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    # construction
    @classmethod
    def identity(cls, d: int, n: int) -> "DenseOperator":
        return cls(d, n, np.eye(d**n))

    @classmethod
    def zeros(cls, d: int, n: int) -> "DenseOperator":
        return cls(d, n, np.zeros((d**n, d**n)))

    @property
    def dim(self) -> int:
        return self.local_dim ** self.arity

    def _check(self, other: "DenseOperator") -> None:
        if (self.local_dim, self.arity) != (other.local_dim, other.arity):
            raise ValueError("operators act on different spaces")

    # arithmetic
    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.local_dim, self.arity, self.entries @ other.entries)

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.local_dim, self.arity, self.entries + other.entries)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.local_dim, self.arity, self.entries - other.entries)

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(self.local_dim, self.arity, -self.entries)

    def __mul__(self, scalar) -> "DenseOperator":
        return DenseOperator(self.local_dim, self.arity, scalar * self.entries)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "DenseOperator":
        return DenseOperator(self.local_dim, self.arity, self.entries / scalar)

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.local_dim, self.arity, self.entries.conj().T)

    def transpose(self) -> "DenseOperator":
        return DenseOperator(self.local_dim, self.arity, self.entries.T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def inner(self, other: "DenseOperator") -> complex:
        """Frobenius inner product ``Tr(self^dagger other)``."""
        self._check(other)
        return complex(np.vdot(self.entries, other.entries))

    def max_deviation(self, other: "DenseOperator") -> float:
        self._check(other)
        return float(np.max(np.abs(self.entries - other.entries), initial=0.0))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries), initial=0.0))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.max_abs() <= tol

    def kron(self, other: "DenseOperator") -> "DenseOperator":
        if self.local_dim != other.local_dim:
            raise ValueError("local dimension mismatch")
        return DenseOperator(
            self.local_dim, self.arity + other.arity, np.kron(self.entries, other.entries)
        )

    def tensor(self) -> np.ndarray:
        """View as a ``2n``-index array: row digits first, then column digits."""
        return self.entries.reshape((self.local_dim,) * (2 * self.arity))

    # serialization
    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        buf.write(MAGIC)
        buf.write(struct.pack("<II", self.arity, self.local_dim))
        pairs = np.empty(self.entries.shape + (2,), dtype="<f8")
        pairs[..., 0] = self.entries.real
        pairs[..., 1] = self.entries.imag
        buf.write(pairs.tobytes(order="C"))
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "DenseOperator":
        if data[: len(MAGIC)] != MAGIC:
            raise ValueError("bad magic bytes")
        offset = len(MAGIC)
        n, d = struct.unpack_from("<II", data, offset)
        offset += 8
        size = d**n
        expected = offset + size * size * 16
        if len(data) != expected:
            raise ValueError(f"payload has {len(data)} bytes, expected {expected}")
        pairs = np.frombuffer(data, dtype="<f8", offset=offset).reshape(size, size, 2)
        return cls(d, n, pairs[..., 0] + 1j * pairs[..., 1])

    def to_json(self) -> dict:
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.entries]
        return {"arity": self.arity, "local_dim": self.local_dim, "entries": rows}

    @classmethod
    def from_json(cls, data: dict) -> "DenseOperator":
        arr = np.asarray(data["entries"], dtype=float)
        return cls(int(data["local_dim"]), int(data["arity"]), arr[..., 0] + 1j * arr[..., 1])

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _check_slots(slots, n: int) -> list[int]:
    slots = [int(s) for s in slots]
    if len(set(slots)) != len(slots):
        raise ValueError(f"repeated slot in {slots}")
    for s in slots:
        if not 0 <= s < n:
            raise ValueError(f"slot {s} out of range for arity {n}")
    return slots


def perm_matrix(sigma: Permutation, d: int, n: int | None = None) -> np.ndarray:
    """Real 0/1 matrix of ``V_sigma``: the content of slot ``k`` moves to slot ``sigma(k)``."""
    n = sigma.degree if n is None else n
    if sigma.degree > n:
        raise ValueError(f"permutation of degree {sigma.degree} does not fit {n} slots")
    sigma = sigma.extend(n)
    size = d**n
    axes = list(sigma.inverse().images) + [n]
    basis = np.eye(size).reshape((d,) * n + (size,))
    return np.ascontiguousarray(basis.transpose(axes).reshape(size, size))


def perm_operator(sigma: Permutation, d: int, n: int | None = None) -> DenseOperator:
    n = sigma.degree if n is None else n
    return DenseOperator(d, n, perm_matrix(sigma, d, n))


def partial_transpose(X: DenseOperator, subsystems) -> DenseOperator:
    n = X.arity
    slots = _check_slots(subsystems, n)
    axes = list(range(2 * n))
    for s in slots:
        axes[s], axes[n + s] = axes[n + s], axes[s]
    out = X.tensor().transpose(axes).reshape(X.dim, X.dim)
    return DenseOperator(X.local_dim, n, out)


def partial_trace_array(arr: np.ndarray, d: int, n: int, subsystems) -> np.ndarray:
    """Partial trace of a ``d^n x d^n`` array over ``subsystems``."""
    slots = _check_slots(subsystems, n)
    keep = [s for s in range(n) if s not in slots]
    t = arr.reshape((d,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    rows = list(letters[:n])
    cols = list(letters[n: 2 * n])
    for s in slots:
        cols[s] = rows[s]
    out = "".join(rows[s] for s in keep) + "".join(cols[s] for s in keep)
    res = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    size = d ** len(keep)
    return res.reshape(size, size)


def partial_trace(X: DenseOperator, subsystems) -> DenseOperator:
    """Trace out ``subsystems``; tracing everything returns a 1x1 operator of arity 0."""
    slots = _check_slots(subsystems, X.arity)
    out = partial_trace_array(X.entries, X.local_dim, X.arity, slots)
    return DenseOperator(X.local_dim, X.arity - len(slots), out)


def embed(X: DenseOperator, slots, n: int) -> DenseOperator:
    """``X`` acting on ``slots`` (in order) of an ``n``-slot space, identity elsewhere."""
    slots = _check_slots(slots, n)
    if len(slots) != X.arity:
        raise ValueError(f"{len(slots)} slots given for an operator of arity {X.arity}")
    d = X.local_dim
    rest = [s for s in range(n) if s not in slots]
    full = np.kron(X.entries, np.eye(d ** len(rest)))
    order = slots + rest  # axis j of `full` carries slot order[j]
    inv = [0] * n
    for j, s in enumerate(order):
        inv[s] = j
    axes = inv + [n + j for j in inv]
    out = full.reshape((d,) * (2 * n)).transpose(axes).reshape(d**n, d**n)
    return DenseOperator(d, n, out)


def max_entangled_projector(d: int) -> DenseOperator:
    if d < 2:
        raise ValueError("maximally entangled projector needs d >= 2")
    psi = np.eye(d).reshape(d * d) / np.sqrt(d)
    return DenseOperator(d, 2, np.outer(psi, psi))


def swap(d: int) -> DenseOperator:
    return perm_operator(Permutation((1, 0)), d)

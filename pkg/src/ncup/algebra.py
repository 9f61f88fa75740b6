"""Arithmetic, norms, and order structure for direct sums of matrix algebras.

An algebra here is always M_{n1}(C) + ... + M_{nB}(C) (outer direct sum),
which covers every finite-dimensional C*-algebra up to isomorphism.  An
element is stored as one complex matrix per block; the involution is the
blockwise conjugate transpose, the norm is the largest singular value over
all blocks, and positivity is decided from blockwise Hermitian spectra.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = [
    "AlgebraShape",
    "AlgebraElement",
    "add",
    "sub",
    "mul",
    "star",
    "scale",
    "norm",
    "is_positive",
    "is_zero",
    "identity",
    "zero",
    "random_element",
]

# Relative tolerance separating roundoff from genuine negativity / asymmetry.
POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraShape:
    """Block dimensions (n1, ..., nB); block i holds an ni x ni matrix."""

    block_dims: tuple[int, ...]

    def __post_init__(self) -> None:
        try:
            dims = tuple(int(n) for n in self.block_dims)
        except (TypeError, ValueError) as exc:
            raise InputError(
                f"block dimensions must be integers, got {self.block_dims!r}"
            ) from exc
        if not dims:
            raise InputError("an algebra needs at least one block")
        if any(n < 1 for n in dims):
            raise InputError(f"block dimensions must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def dim(self) -> int:
        """Complex dimension, sum of ni**2."""
        return sum(n * n for n in self.block_dims)

    def to_list(self) -> list[int]:
        return list(self.block_dims)


class AlgebraElement:
    """An algebra element: one complex matrix per block of the shape.

    Values are immutable after construction (arrays are marked read-only),
    so elements can be shared freely across threads.
    """

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: AlgebraShape, blocks) -> None:
        if len(blocks) != shape.num_blocks:
            raise InputError(
                f"expected {shape.num_blocks} blocks, got {len(blocks)}"
            )
        frozen = []
        for n, blk in zip(shape.block_dims, blocks):
            arr = np.array(blk, dtype=np.complex128)
            if arr.shape != (n, n):
                raise InputError(f"block must be {n}x{n}, got {arr.shape}")
            arr.setflags(write=False)
            frozen.append(arr)
        self.shape = shape
        self.blocks = tuple(frozen)

    def __repr__(self) -> str:
        return f"AlgebraElement(shape={self.shape.block_dims}, norm={norm(self):.6g})"

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return sub(self, other)

    def __neg__(self) -> "AlgebraElement":
        return scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        if isinstance(other, numbers.Complex):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Complex):
            return scale(other, self)
        return NotImplemented

    def to_dict(self) -> dict:
        """JSON payload: {"shape": [n1, ...], "blocks": [[[[re, im], ...]]]}."""
        blocks = [
            [[[float(z.real), float(z.imag)] for z in row] for row in blk]
            for blk in self.blocks
        ]
        return {"shape": self.shape.to_list(), "blocks": blocks}

    @classmethod
    def from_dict(cls, payload, where: str = "algebra element") -> "AlgebraElement":
        if not isinstance(payload, dict):
            raise InputError(f"{where}: expected an object, got {type(payload).__name__}")
        for key in ("shape", "blocks"):
            if key not in payload:
                raise InputError(f"{where}: missing key {key!r}")
        shape = _shape_from_payload(payload["shape"], where)
        raw = payload["blocks"]
        if not isinstance(raw, list) or len(raw) != shape.num_blocks:
            raise InputError(f"{where}: 'blocks' must be a list of {shape.num_blocks} blocks")
        blocks = []
        for i, (n, blk) in enumerate(zip(shape.block_dims, raw)):
            try:
                arr = np.array(
                    [[complex(entry[0], entry[1]) for entry in row] for row in blk],
                    dtype=np.complex128,
                )
            except (TypeError, ValueError, IndexError) as exc:
                raise InputError(
                    f"{where}: block {i} entries must be [re, im] pairs"
                ) from exc
            if arr.shape != (n, n):
                raise InputError(f"{where}: block {i} must be {n}x{n}, got {arr.shape}")
            blocks.append(arr)
        return cls(shape, blocks)


def _shape_from_payload(raw, where: str) -> AlgebraShape:
    if not isinstance(raw, list) or not all(isinstance(n, int) for n in raw):
        raise InputError(f"{where}: 'shape' must be a list of integers")
    return AlgebraShape(tuple(raw))


def _check_same_shape(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.shape != b.shape:
        raise InputError(
            f"shape mismatch: {a.shape.block_dims} vs {b.shape.block_dims}"
        )


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise sum."""
    _check_same_shape(a, b)
    return AlgebraElement(a.shape, [x + y for x, y in zip(a.blocks, b.blocks)])


def sub(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise difference."""
    _check_same_shape(a, b)
    return AlgebraElement(a.shape, [x - y for x, y in zip(a.blocks, b.blocks)])


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise matrix product."""
    _check_same_shape(a, b)
    return AlgebraElement(a.shape, [x @ y for x, y in zip(a.blocks, b.blocks)])


def star(a: AlgebraElement) -> AlgebraElement:
    """The involution: blockwise conjugate transpose."""
    return AlgebraElement(a.shape, [blk.conj().T for blk in a.blocks])


def scale(z: complex, a: AlgebraElement) -> AlgebraElement:
    """Scalar multiple z * a."""
    return AlgebraElement(a.shape, [complex(z) * blk for blk in a.blocks])


def norm(a: AlgebraElement) -> float:
    """C*-norm: the largest singular value over all blocks."""
    return float(max(np.linalg.norm(blk, 2) for blk in a.blocks))


def is_zero(a: AlgebraElement, tol: float = 0.0) -> bool:
    """True iff norm(a) <= tol."""
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}")
    return norm(a) <= tol


def is_positive(a: AlgebraElement, tol: float = POSITIVITY_TOL) -> bool:
    """True iff a is self-adjoint and has nonnegative spectrum, up to tol.

    Both checks are relative to max(1, norm(a)): the self-adjointness defect
    norm(a - a*) and the most negative Hermitian eigenvalue must stay within
    tol of zero.
    """
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}")
    cutoff = tol * max(1.0, norm(a))
    if norm(sub(a, star(a))) > cutoff:
        return False
    for blk in a.blocks:
        herm = (blk + blk.conj().T) / 2.0
        if np.linalg.eigvalsh(herm).min() < -cutoff:
            return False
    return True


def identity(shape: AlgebraShape) -> AlgebraElement:
    """The unit element (identity matrix in every block)."""
    return AlgebraElement(shape, [np.eye(n, dtype=np.complex128) for n in shape.block_dims])


def zero(shape: AlgebraShape) -> AlgebraElement:
    return AlgebraElement(shape, [np.zeros((n, n), dtype=np.complex128) for n in shape.block_dims])


def random_element(shape: AlgebraShape, rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    """I.i.d. standard complex Gaussian entries in every matrix coordinate."""
    blocks = []
    for n in shape.block_dims:
        blk = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
        blocks.append(scale * blk)
    return AlgebraElement(shape, blocks)

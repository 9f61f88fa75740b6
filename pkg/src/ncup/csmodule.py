"""Finite Hilbert C*-modules A^d and the operators acting on them.

A vector is a d-tuple of algebra elements with the A-valued inner product
<x, y> = sum_i x_i (y_i)*, linear in the first slot.  Operators are d x d
matrices over the algebra acting by right multiplication, (x M)_j =
sum_i x_i M_ij, so composition reads left to right and the adjoint is the
starred transpose.

Internally everything is stored one algebra block at a time as stacked
numpy arrays: a vector keeps a (d, n, n) array per block, an operator a
(d, d, n, n) array per block.  All heavy lifting is einsum over those
stacks, and an operator restricted to one block flattens to an ordinary
(d*n) x (d*n) matrix, which is how spectral computations are done.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraShape, norm
from .errors import InputError, SingularOperatorError

__all__ = [
    "ModuleVector",
    "ModuleOperator",
    "inner_product",
    "module_norm",
    "cauchy_schwarz_gap",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "module_scale",
    "basis_vector",
    "zero_vector",
    "random_vector",
    "op_apply",
    "op_adjoint",
    "op_compose",
    "op_sub",
    "op_identity",
    "op_norm",
    "op_inv_sqrt",
]

# Eigenvalues below INV_SQRT_TOL times the largest are treated as zero when
# inverting a positive operator.
INV_SQRT_TOL = 1e-10


def _freeze(arrays):
    out = []
    for arr in arrays:
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        arr.setflags(write=False)
        out.append(arr)
    return tuple(out)


class ModuleVector:
    """Element of A^d, stored per algebra block as a (d, n, n) stack."""

    __slots__ = ("shape", "d", "blocks")

    def __init__(self, shape: AlgebraShape, d: int, blocks) -> None:
        d = int(d)
        if d < 1:
            raise InputError(f"module rank d must be positive, got {d}")
        if len(blocks) != shape.num_blocks:
            raise InputError(
                f"expected {shape.num_blocks} block stacks, got {len(blocks)}"
            )
        for n, blk in zip(shape.block_dims, blocks):
            if np.shape(blk) != (d, n, n):
                raise InputError(
                    f"block stack must have shape {(d, n, n)}, got {np.shape(blk)}"
                )
        self.shape = shape
        self.d = d
        self.blocks = _freeze(blocks)

    @classmethod
    def from_entries(cls, entries) -> "ModuleVector":
        """Build from a nonempty sequence of AlgebraElement coordinates."""
        entries = list(entries)
        if not entries:
            raise InputError("a module vector needs at least one entry")
        shape = entries[0].shape
        for i, e in enumerate(entries):
            if not isinstance(e, AlgebraElement):
                raise InputError(f"entry {i} is not an algebra element")
            if e.shape != shape:
                raise InputError(
                    f"entry {i} has shape {e.shape.block_dims}, expected {shape.block_dims}"
                )
        blocks = [
            np.stack([e.blocks[b] for e in entries])
            for b in range(shape.num_blocks)
        ]
        return cls(shape, len(entries), blocks)

    def entry(self, i: int) -> AlgebraElement:
        if not 0 <= i < self.d:
            raise InputError(f"entry index {i} out of range for d={self.d}")
        return AlgebraElement(self.shape, [blk[i] for blk in self.blocks])

    @property
    def entries(self) -> list[AlgebraElement]:
        return [self.entry(i) for i in range(self.d)]

    def __repr__(self) -> str:
        return f"ModuleVector(shape={self.shape.block_dims}, d={self.d})"

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.to_list(),
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, payload, where: str = "module vector") -> "ModuleVector":
        if not isinstance(payload, dict):
            raise InputError(f"{where}: expected an object, got {type(payload).__name__}")
        for key in ("shape", "entries"):
            if key not in payload:
                raise InputError(f"{where}: missing key {key!r}")
        raw = payload["entries"]
        if not isinstance(raw, list) or not raw:
            raise InputError(f"{where}: 'entries' must be a nonempty list")
        entries = [
            AlgebraElement.from_dict(item, where=f"{where}: entry {i}")
            for i, item in enumerate(raw)
        ]
        vec = cls.from_entries(entries)
        declared = payload["shape"]
        if declared != vec.shape.to_list():
            raise InputError(
                f"{where}: declared shape {declared} does not match entries "
                f"{vec.shape.to_list()}"
            )
        return vec


class ModuleOperator:
    """d x d matrix over A, stored per block as a (d, d, n, n) stack."""

    __slots__ = ("shape", "d", "blocks")

    def __init__(self, shape: AlgebraShape, d: int, blocks) -> None:
        d = int(d)
        if d < 1:
            raise InputError(f"operator size d must be positive, got {d}")
        if len(blocks) != shape.num_blocks:
            raise InputError(
                f"expected {shape.num_blocks} block stacks, got {len(blocks)}"
            )
        for n, blk in zip(shape.block_dims, blocks):
            if np.shape(blk) != (d, d, n, n):
                raise InputError(
                    f"block stack must have shape {(d, d, n, n)}, got {np.shape(blk)}"
                )
        self.shape = shape
        self.d = d
        self.blocks = _freeze(blocks)

    @classmethod
    def from_entries(cls, grid) -> "ModuleOperator":
        """Build from a d x d nested sequence of AlgebraElement entries."""
        rows = [list(row) for row in grid]
        d = len(rows)
        if d == 0 or any(len(row) != d for row in rows):
            raise InputError("operator entries must form a square nonempty grid")
        shape = rows[0][0].shape
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if e.shape != shape:
                    raise InputError(
                        f"entry ({i},{j}) has shape {e.shape.block_dims}, "
                        f"expected {shape.block_dims}"
                    )
        blocks = [
            np.stack([np.stack([e.blocks[b] for e in row]) for row in rows])
            for b in range(shape.num_blocks)
        ]
        return cls(shape, d, blocks)

    def entry(self, i: int, j: int) -> AlgebraElement:
        if not (0 <= i < self.d and 0 <= j < self.d):
            raise InputError(f"entry index ({i},{j}) out of range for d={self.d}")
        return AlgebraElement(self.shape, [blk[i, j] for blk in self.blocks])

    def __repr__(self) -> str:
        return f"ModuleOperator(shape={self.shape.block_dims}, d={self.d})"


def _check_same_module(x, y) -> None:
    if x.shape != y.shape or x.d != y.d:
        raise InputError(
            f"module mismatch: shape {x.shape.block_dims} d={x.d} vs "
            f"shape {y.shape.block_dims} d={y.d}"
        )


def inner_product(x: ModuleVector, y: ModuleVector) -> AlgebraElement:
    """<x, y> = sum_i x_i (y_i)*, an algebra element."""
    _check_same_module(x, y)
    blocks = [
        np.einsum("rab,rcb->ac", xb, yb.conj())
        for xb, yb in zip(x.blocks, y.blocks)
    ]
    return AlgebraElement(x.shape, blocks)


def module_norm(x: ModuleVector) -> float:
    """sqrt of the C*-norm of <x, x>."""
    return float(np.sqrt(norm(inner_product(x, x))))


def cauchy_schwarz_gap(x: ModuleVector, y: ModuleVector) -> float:
    """Least eigenvalue of ||<y,y>|| <x,x> - <x,y><y,x> over all blocks.

    The operator Cauchy-Schwarz inequality says this matrix is positive
    semidefinite, so the gap should never dip below roundoff.
    """
    gram_yy = norm(inner_product(y, y))
    xx = inner_product(x, x)
    xy = inner_product(x, y)
    worst = np.inf
    for xxb, xyb in zip(xx.blocks, xy.blocks):
        diff = gram_yy * xxb - xyb @ xyb.conj().T
        herm = (diff + diff.conj().T) / 2.0
        worst = min(worst, float(np.linalg.eigvalsh(herm).min()))
    return worst


def vec_add(x: ModuleVector, y: ModuleVector) -> ModuleVector:
    _check_same_module(x, y)
    return ModuleVector(x.shape, x.d, [a + b for a, b in zip(x.blocks, y.blocks)])


def vec_sub(x: ModuleVector, y: ModuleVector) -> ModuleVector:
    _check_same_module(x, y)
    return ModuleVector(x.shape, x.d, [a - b for a, b in zip(x.blocks, y.blocks)])


def vec_scale(z: complex, x: ModuleVector) -> ModuleVector:
    return ModuleVector(x.shape, x.d, [complex(z) * blk for blk in x.blocks])


def module_scale(a: AlgebraElement, x: ModuleVector) -> ModuleVector:
    """Left module action, (a . x)_i = a x_i."""
    if a.shape != x.shape:
        raise InputError(
            f"shape mismatch: {a.shape.block_dims} vs {x.shape.block_dims}"
        )
    blocks = [
        np.einsum("ab,rbc->rac", ab, xb)
        for ab, xb in zip(a.blocks, x.blocks)
    ]
    return ModuleVector(x.shape, x.d, blocks)


def basis_vector(shape: AlgebraShape, d: int, k: int) -> ModuleVector:
    """e_k, the vector with the algebra unit in slot k and zero elsewhere."""
    if not 0 <= k < d:
        raise InputError(f"basis index {k} out of range for d={d}")
    blocks = []
    for n in shape.block_dims:
        blk = np.zeros((d, n, n), dtype=np.complex128)
        blk[k] = np.eye(n)
        blocks.append(blk)
    return ModuleVector(shape, d, blocks)


def zero_vector(shape: AlgebraShape, d: int) -> ModuleVector:
    return ModuleVector(
        shape, d, [np.zeros((d, n, n), dtype=np.complex128) for n in shape.block_dims]
    )


def random_vector(shape: AlgebraShape, d: int, rng: np.random.Generator) -> ModuleVector:
    """I.i.d. standard complex Gaussian entries in every matrix coordinate."""
    blocks = []
    for n in shape.block_dims:
        blk = (
            rng.standard_normal((d, n, n)) + 1j * rng.standard_normal((d, n, n))
        ) / np.sqrt(2.0)
        blocks.append(blk)
    return ModuleVector(shape, d, blocks)


def op_apply(m: ModuleOperator, x: ModuleVector) -> ModuleVector:
    """Right action of the operator, (x M)_j = sum_i x_i M_ij."""
    _check_same_module(x, m)
    blocks = [
        np.einsum("rab,rsbc->sac", xb, mb)
        for xb, mb in zip(x.blocks, m.blocks)
    ]
    return ModuleVector(x.shape, x.d, blocks)


def op_adjoint(m: ModuleOperator) -> ModuleOperator:
    """(M*)_ij = (M_ji)*, the adjoint for the module inner product."""
    blocks = [blk.transpose(1, 0, 3, 2).conj() for blk in m.blocks]
    return ModuleOperator(m.shape, m.d, blocks)


def op_compose(a: ModuleOperator, b: ModuleOperator) -> ModuleOperator:
    """Matrix product (A B)_ij = sum_k A_ik B_kj."""
    _check_same_module(a, b)
    blocks = [
        np.einsum("rkab,ksbc->rsac", ab, bb)
        for ab, bb in zip(a.blocks, b.blocks)
    ]
    return ModuleOperator(a.shape, a.d, blocks)


def op_sub(a: ModuleOperator, b: ModuleOperator) -> ModuleOperator:
    _check_same_module(a, b)
    return ModuleOperator(a.shape, a.d, [x - y for x, y in zip(a.blocks, b.blocks)])


def op_identity(shape: AlgebraShape, d: int) -> ModuleOperator:
    blocks = []
    for n in shape.block_dims:
        blk = np.zeros((d, d, n, n), dtype=np.complex128)
        idx = np.arange(d)
        blk[idx, idx] = np.eye(n)
        blocks.append(blk)
    return ModuleOperator(shape, d, blocks)


def _flatten_block(blk: np.ndarray) -> np.ndarray:
    """(d, d, n, n) operator block as an ordinary (d*n, d*n) matrix."""
    d, _, n, _ = blk.shape
    return blk.transpose(0, 2, 1, 3).reshape(d * n, d * n)


def _unflatten_block(mat: np.ndarray, d: int, n: int) -> np.ndarray:
    return mat.reshape(d, n, d, n).transpose(0, 2, 1, 3)


def op_norm(m: ModuleOperator) -> float:
    """Operator norm on A^d: max over blocks of the flattened spectral norm."""
    return float(max(np.linalg.norm(_flatten_block(blk), 2) for blk in m.blocks))


def op_inv_sqrt(m: ModuleOperator, tol: float = INV_SQRT_TOL) -> ModuleOperator:
    """Inverse square root of a positive invertible operator.

    Each block is flattened, Hermitized, and eigendecomposed; eigenvalues
    at or below tol times the largest (over the whole operator) mean the
    operator is not invertible and raise SingularOperatorError.
    """
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}")
    flats = [_flatten_block(blk) for blk in m.blocks]
    decomps = []
    lam_max = 0.0
    for flat in flats:
        herm = (flat + flat.conj().T) / 2.0
        vals, vecs = np.linalg.eigh(herm)
        decomps.append((vals, vecs))
        lam_max = max(lam_max, float(vals.max()))
    cutoff = tol * lam_max
    blocks = []
    for (vals, vecs), n in zip(decomps, m.shape.block_dims):
        if vals.min() <= cutoff:
            raise SingularOperatorError(
                f"operator is numerically singular: eigenvalue {vals.min():.3e} "
                f"at cutoff {cutoff:.3e}"
            )
        inv_sqrt = (vecs * (vals ** -0.5)) @ vecs.conj().T
        blocks.append(_unflatten_block(inv_sqrt, m.d, n))
    return ModuleOperator(m.shape, m.d, blocks)

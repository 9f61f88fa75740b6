"""Modular frames: finite spanning families in A^d and their invariants.

A frame is a finite family (tau_n) in A^d.  Analysis maps a vector to its
algebra-valued coefficient sequence (<x, tau_n>)_n, synthesis maps left
coefficients back via sum_n a_n tau_n, and the frame operator is the d x d
module operator composing the two.  A frame is Parseval when that operator
is the identity, which makes analysis an isometry and gives the exact
reconstruction x = sum_n <x, tau_n> tau_n.

Supports of coefficient sequences are decided by a relative threshold: a
coefficient counts as nonzero when its C*-norm exceeds rel_tol times the
largest coefficient norm in the sequence.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraShape, norm
from .csmodule import (
    ModuleOperator,
    ModuleVector,
    op_identity,
    op_inv_sqrt,
    op_norm,
    op_sub,
    random_vector,
)
from .errors import GenerationError, InputError, NotAFrameError, NonParsevalFrameError, SingularOperatorError

__all__ = [
    "ModularFrame",
    "AnalysisCoefficients",
    "analysis",
    "synthesis",
    "frame_operator",
    "is_parseval",
    "parsevalize",
    "coherence",
    "cross_gram_norms",
    "support",
    "sparsity",
    "random_frame",
    "random_parseval_frame",
]

# A frame written to disk is declared Parseval at this tolerance, and the
# claim is re-verified at the same tolerance when a file is loaded.
PARSEVAL_FILE_TOL = 1e-8

# Default relative threshold separating zero coefficients from nonzero ones.
SUPPORT_REL_TOL = 1e-8

PARSEVALIZE_MAX_RETRIES = 50


def _freeze(arrays):
    out = []
    for arr in arrays:
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        arr.setflags(write=False)
        out.append(arr)
    return tuple(out)


class ModularFrame:
    """Finite vector family in A^d, stored per block as (N, d, n, n)."""

    __slots__ = ("shape", "d", "count", "blocks")

    def __init__(self, shape: AlgebraShape, d: int, blocks) -> None:
        d = int(d)
        if d < 1:
            raise InputError(f"module rank d must be positive, got {d}")
        if len(blocks) != shape.num_blocks:
            raise InputError(
                f"expected {shape.num_blocks} block stacks, got {len(blocks)}"
            )
        counts = {np.shape(blk)[0] for blk in blocks}
        if len(counts) != 1:
            raise InputError("all block stacks must agree on the number of vectors")
        count = counts.pop()
        if count < 1:
            raise InputError("a frame needs at least one vector")
        for n, blk in zip(shape.block_dims, blocks):
            if np.shape(blk) != (count, d, n, n):
                raise InputError(
                    f"block stack must have shape {(count, d, n, n)}, "
                    f"got {np.shape(blk)}"
                )
        self.shape = shape
        self.d = d
        self.count = int(count)
        self.blocks = _freeze(blocks)

    @classmethod
    def from_vectors(cls, vectors) -> "ModularFrame":
        vectors = list(vectors)
        if not vectors:
            raise InputError("a frame needs at least one vector")
        shape, d = vectors[0].shape, vectors[0].d
        for i, v in enumerate(vectors):
            if not isinstance(v, ModuleVector):
                raise InputError(f"frame vector {i} is not a module vector")
            if v.shape != shape or v.d != d:
                raise InputError(
                    f"frame vector {i} lives in a different module "
                    f"(shape {v.shape.block_dims}, d={v.d})"
                )
        blocks = [
            np.stack([v.blocks[b] for v in vectors])
            for b in range(shape.num_blocks)
        ]
        return cls(shape, d, blocks)

    def vector(self, n: int) -> ModuleVector:
        if not 0 <= n < self.count:
            raise InputError(f"frame index {n} out of range for count={self.count}")
        return ModuleVector(self.shape, self.d, [blk[n] for blk in self.blocks])

    @property
    def vectors(self) -> list[ModuleVector]:
        return [self.vector(n) for n in range(self.count)]

    def __repr__(self) -> str:
        return (
            f"ModularFrame(shape={self.shape.block_dims}, d={self.d}, "
            f"count={self.count})"
        )

    def to_dict(self) -> dict:
        return {
            "algebra": self.shape.to_list(),
            "d": int(self.d),
            "vectors": [v.to_dict() for v in self.vectors],
            "parseval": bool(is_parseval(self, tol=PARSEVAL_FILE_TOL)),
        }

    @classmethod
    def from_dict(cls, payload, where: str = "frame") -> "ModularFrame":
        """Rebuild a frame from its JSON payload.

        The stored "parseval" flag is advisory; when it claims True the
        frame operator is re-verified and a false claim is rejected.
        """
        if not isinstance(payload, dict):
            raise InputError(f"{where}: expected an object, got {type(payload).__name__}")
        for key in ("algebra", "d", "vectors", "parseval"):
            if key not in payload:
                raise InputError(f"{where}: missing key {key!r}")
        algebra = payload["algebra"]
        if not isinstance(algebra, list) or not all(isinstance(n, int) for n in algebra):
            raise InputError(f"{where}: 'algebra' must be a list of integers")
        shape = AlgebraShape(tuple(algebra))
        d = payload["d"]
        if not isinstance(d, int) or d < 1:
            raise InputError(f"{where}: 'd' must be a positive integer")
        raw = payload["vectors"]
        if not isinstance(raw, list) or not raw:
            raise InputError(f"{where}: 'vectors' must be a nonempty list")
        vectors = []
        for i, item in enumerate(raw):
            v = ModuleVector.from_dict(item, where=f"{where}: vector {i}")
            if v.shape != shape:
                raise InputError(
                    f"{where}: vector {i} has shape {v.shape.to_list()}, "
                    f"expected {shape.to_list()}"
                )
            if v.d != d:
                raise InputError(
                    f"{where}: vector {i} has {v.d} entries, expected d={d}"
                )
            vectors.append(v)
        frame = cls.from_vectors(vectors)
        claimed = payload["parseval"]
        if not isinstance(claimed, bool):
            raise InputError(f"{where}: 'parseval' must be a boolean")
        if claimed and not is_parseval(frame, tol=PARSEVAL_FILE_TOL):
            raise InputError(
                f"{where}: file claims a Parseval frame but the frame operator "
                f"deviates from the identity by more than {PARSEVAL_FILE_TOL:g}"
            )
        return frame


class AnalysisCoefficients:
    """Algebra-valued coefficient sequence, stored per block as (N, n, n)."""

    __slots__ = ("shape", "count", "blocks")

    def __init__(self, shape: AlgebraShape, blocks) -> None:
        if len(blocks) != shape.num_blocks:
            raise InputError(
                f"expected {shape.num_blocks} block stacks, got {len(blocks)}"
            )
        counts = {np.shape(blk)[0] for blk in blocks}
        if len(counts) != 1:
            raise InputError("all block stacks must agree on the sequence length")
        count = counts.pop()
        if count < 1:
            raise InputError("a coefficient sequence needs at least one entry")
        for n, blk in zip(shape.block_dims, blocks):
            if np.shape(blk) != (count, n, n):
                raise InputError(
                    f"block stack must have shape {(count, n, n)}, got {np.shape(blk)}"
                )
        self.shape = shape
        self.count = int(count)
        self.blocks = _freeze(blocks)

    @classmethod
    def from_elements(cls, elements) -> "AnalysisCoefficients":
        elements = list(elements)
        if not elements:
            raise InputError("a coefficient sequence needs at least one entry")
        shape = elements[0].shape
        for i, e in enumerate(elements):
            if not isinstance(e, AlgebraElement) or e.shape != shape:
                raise InputError(f"coefficient {i} is not an element of the algebra")
        blocks = [
            np.stack([e.blocks[b] for e in elements])
            for b in range(shape.num_blocks)
        ]
        return cls(shape, blocks)

    def coefficient(self, n: int) -> AlgebraElement:
        if not 0 <= n < self.count:
            raise InputError(f"coefficient index {n} out of range for count={self.count}")
        return AlgebraElement(self.shape, [blk[n] for blk in self.blocks])

    def norms(self) -> np.ndarray:
        """C*-norm of each coefficient, as a float array of length count."""
        per_block = [
            np.linalg.svd(blk, compute_uv=False).max(axis=-1)
            for blk in self.blocks
        ]
        return np.max(per_block, axis=0)

    def to_vector(self) -> ModuleVector:
        """The same data seen as a vector in A^count."""
        return ModuleVector(self.shape, self.count, list(self.blocks))

    def __repr__(self) -> str:
        return f"AnalysisCoefficients(shape={self.shape.block_dims}, count={self.count})"


def _check_frame_vector(frame: ModularFrame, x: ModuleVector) -> None:
    if frame.shape != x.shape or frame.d != x.d:
        raise InputError(
            f"vector lives in shape {x.shape.block_dims} d={x.d}, frame in "
            f"shape {frame.shape.block_dims} d={frame.d}"
        )


def analysis(frame: ModularFrame, x: ModuleVector) -> AnalysisCoefficients:
    """Coefficient sequence (<x, tau_n>)_n."""
    _check_frame_vector(frame, x)
    blocks = [
        np.einsum("rab,nrcb->nac", xb, tb.conj())
        for xb, tb in zip(x.blocks, frame.blocks)
    ]
    return AnalysisCoefficients(frame.shape, blocks)


def synthesis(frame: ModularFrame, coeffs: AnalysisCoefficients) -> ModuleVector:
    """Left combination sum_n a_n tau_n."""
    if frame.shape != coeffs.shape:
        raise InputError(
            f"coefficients have shape {coeffs.shape.block_dims}, frame has "
            f"{frame.shape.block_dims}"
        )
    if frame.count != coeffs.count:
        raise InputError(
            f"coefficient count {coeffs.count} does not match frame size {frame.count}"
        )
    blocks = [
        np.einsum("nab,nrbc->rac", cb, tb)
        for cb, tb in zip(coeffs.blocks, frame.blocks)
    ]
    return ModuleVector(frame.shape, frame.d, blocks)


def frame_operator(frame: ModularFrame) -> ModuleOperator:
    """The d x d operator with entries S_ij = sum_n (tau_n_i)* tau_n_j.

    Acting on the right it realizes x -> sum_n <x, tau_n> tau_n.
    """
    blocks = [
        np.einsum("nrba,nsbc->rsac", tb.conj(), tb)
        for tb in frame.blocks
    ]
    return ModuleOperator(frame.shape, frame.d, blocks)


def is_parseval(frame: ModularFrame, tol: float = 1e-10) -> bool:
    """True iff the frame operator is the identity up to tol in operator norm."""
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}")
    defect = op_sub(frame_operator(frame), op_identity(frame.shape, frame.d))
    return op_norm(defect) <= tol


def parsevalize(frame: ModularFrame, tol: float = 1e-10) -> ModularFrame:
    """Canonical Parseval companion: every vector multiplied by S^(-1/2).

    Raises NotAFrameError when the frame operator is singular (the family
    does not generate A^d) and NonParsevalFrameError if the corrected frame
    operator still deviates from the identity beyond 1e-8, which signals a
    badly conditioned input.
    """
    s = frame_operator(frame)
    try:
        p = op_inv_sqrt(s, tol=tol)
    except SingularOperatorError as exc:
        raise NotAFrameError(
            f"frame operator is singular, the family does not span: {exc}"
        ) from exc
    blocks = [
        np.einsum("nrab,rsbc->nsac", tb, pb)
        for tb, pb in zip(frame.blocks, p.blocks)
    ]
    fixed = ModularFrame(frame.shape, frame.d, blocks)
    defect = op_sub(frame_operator(fixed), op_identity(frame.shape, frame.d))
    residual = op_norm(defect)
    if residual > PARSEVAL_FILE_TOL:
        raise NonParsevalFrameError(
            f"normalization left a frame-operator residual of {residual:.3e}"
        )
    return fixed


def cross_gram_norms(tau: ModularFrame, omega: ModularFrame) -> np.ndarray:
    """Matrix of C*-norms ||<tau_n, omega_m>||, shape (tau.count, omega.count)."""
    if tau.shape != omega.shape or tau.d != omega.d:
        raise InputError(
            f"frames live in different modules: shape {tau.shape.block_dims} "
            f"d={tau.d} vs shape {omega.shape.block_dims} d={omega.d}"
        )
    per_block = []
    for tb, wb in zip(tau.blocks, omega.blocks):
        gram = np.einsum("nrab,mrcb->nmac", tb, wb.conj())
        per_block.append(np.linalg.svd(gram, compute_uv=False).max(axis=-1))
    return np.max(per_block, axis=0)


def coherence(tau: ModularFrame, omega: ModularFrame) -> float:
    """Largest cross inner-product norm between the two families."""
    return float(cross_gram_norms(tau, omega).max())


def support(coeffs: AnalysisCoefficients, rel_tol: float = SUPPORT_REL_TOL) -> list[int]:
    """Indices whose coefficient norm exceeds rel_tol times the largest one."""
    if rel_tol < 0:
        raise InputError(f"rel_tol must be nonnegative, got {rel_tol}")
    norms = coeffs.norms()
    peak = norms.max()
    if peak == 0.0:
        return []
    return [int(n) for n in np.nonzero(norms > rel_tol * peak)[0]]


def sparsity(coeffs: AnalysisCoefficients, rel_tol: float = SUPPORT_REL_TOL) -> int:
    """Number of effectively nonzero coefficients."""
    return len(support(coeffs, rel_tol=rel_tol))


def random_frame(
    shape: AlgebraShape, d: int, count: int, rng: np.random.Generator
) -> ModularFrame:
    """Frame of count i.i.d. Gaussian vectors in A^d."""
    if count < 1:
        raise InputError(f"count must be positive, got {count}")
    return ModularFrame.from_vectors(
        random_vector(shape, d, rng) for _ in range(count)
    )


def random_parseval_frame(
    shape: AlgebraShape, d: int, count: int, rng: np.random.Generator
) -> ModularFrame:
    """Random Parseval frame: Gaussian draw followed by normalization.

    Requires count >= d, since fewer vectors can never generate A^d.  The
    Gaussian draw is retried when it is numerically degenerate; failure
    after the retry budget raises GenerationError.
    """
    if count < d:
        raise InputError(
            f"a Parseval frame over A^{d} needs at least {d} vectors, got {count}"
        )
    for _ in range(PARSEVALIZE_MAX_RETRIES):
        try:
            return parsevalize(random_frame(shape, d, count, rng))
        except NotAFrameError:
            continue
    raise GenerationError(
        f"no spanning Gaussian family after {PARSEVALIZE_MAX_RETRIES} draws "
        f"(shape {shape.block_dims}, d={d}, count={count})"
    )

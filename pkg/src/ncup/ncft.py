"""Discrete Fourier analysis on A^p and additive uncertainty search.

The transform sends x = (x_j) to x_hat_k = (1/sqrt(p)) sum_j e^(-2 pi i jk/p) x_j,
acting entrywise on algebra coordinates, so it is the scalar DFT applied to
each matrix coordinate and in particular a module-norm isometry.

For prime p every square minor of the unitary DFT matrix is nonsingular,
which forces ||x||_0 + ||x_hat||_0 >= p + 1 for nonzero scalar x.  The
search routines here decide support-pattern feasibility through exactly
that minor criterion: a nonzero x with supp(x) inside T and supp(x_hat)
inside Omega exists iff the minor on rows (complement of Omega) and
columns T is rank deficient.  Because the transform acts coordinatewise,
the same criterion settles feasibility for algebra-valued x, and the
audit cross-checks the reduction against a kernel search in the full
complex flattening.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraShape
from .csmodule import ModuleVector
from .errors import InputError
from .frames import ModularFrame

__all__ = [
    "PrimeDim",
    "dft_matrix",
    "ncdft",
    "ncdft_inverse",
    "standard_frame",
    "fourier_frame",
    "dirac_comb",
    "cyclic_shift",
    "vector_entry_norms",
    "vector_support",
    "vector_sparsity",
    "chebotarev_minor_nonsingular",
    "pattern_feasible_minor",
    "tao_min_sum",
    "conjecture_audit",
]

# Relative singular-value threshold for every rank decision in this module.
RANK_TOL = 1e-10

# Relative threshold for support counting, matching the frames module.
SUPPORT_REL_TOL = 1e-8

EXHAUSTIVE_MAX_P = 7
SAMPLED_MAX_P = 13
DEFAULT_SAMPLES = 100_000
PATTERN_SEARCH_MAX_P = 5

_CHUNK = 32_768


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


@dataclass(frozen=True)
class PrimeDim:
    """A dimension certified prime by trial division."""

    p: int

    def __post_init__(self) -> None:
        try:
            p = int(self.p)
        except (TypeError, ValueError) as exc:
            raise InputError(f"prime dimension must be an integer, got {self.p!r}") from exc
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        object.__setattr__(self, "p", p)


def _as_prime(p) -> int:
    if isinstance(p, PrimeDim):
        return p.p
    return PrimeDim(p).p


def dft_matrix(d: int) -> np.ndarray:
    """Unitary DFT matrix, entry (k, j) = e^(-2 pi i jk/d)/sqrt(d)."""
    d = int(d)
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}")
    grid = np.outer(np.arange(d), np.arange(d))
    return np.exp(-2j * np.pi * grid / d) / np.sqrt(d)


def ncdft(x: ModuleVector) -> ModuleVector:
    """Entrywise DFT, x_hat_k = (1/sqrt(d)) sum_j e^(-2 pi i jk/d) x_j.

    Any length d is accepted; the prime-dimension theorems simply do not
    apply at composite d.
    """
    w = dft_matrix(x.d)
    blocks = [np.einsum("kj,jab->kab", w, blk) for blk in x.blocks]
    return ModuleVector(x.shape, x.d, blocks)


def ncdft_inverse(x: ModuleVector) -> ModuleVector:
    w = dft_matrix(x.d).conj()
    blocks = [np.einsum("kj,jab->kab", w, blk) for blk in x.blocks]
    return ModuleVector(x.shape, x.d, blocks)


def standard_frame(shape: AlgebraShape, d: int) -> ModularFrame:
    """The basis frame {e_0, ..., e_(d-1)} of A^d."""
    d = int(d)
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}")
    blocks = []
    for n in shape.block_dims:
        blk = np.zeros((d, d, n, n), dtype=np.complex128)
        idx = np.arange(d)
        blk[idx, idx] = np.eye(n)
        blocks.append(blk)
    return ModularFrame(shape, d, blocks)


def fourier_frame(shape: AlgebraShape, d: int) -> ModularFrame:
    """Frame whose analysis map is the entrywise DFT.

    Vector m has entries (omega_m)_j = conj(W[m, j]) 1_A, so
    <x, omega_m> = x_hat_m.
    """
    w = dft_matrix(d)
    blocks = []
    for n in shape.block_dims:
        blk = np.einsum("mj,ab->mjab", w.conj(), np.eye(n, dtype=np.complex128))
        blocks.append(blk)
    return ModularFrame(shape, d, blocks)


def dirac_comb(shape: AlgebraShape, d: int, spacing: int) -> ModuleVector:
    """Indicator of the arithmetic progression {0, spacing, 2 spacing, ...}.

    spacing must divide d.  At d = spacing**2 the comb is a fixed point of
    the DFT and makes the product uncertainty bound tight.
    """
    d, spacing = int(d), int(spacing)
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}")
    if spacing < 1 or d % spacing != 0:
        raise InputError(f"spacing {spacing} must be a positive divisor of d={d}")
    blocks = []
    for n in shape.block_dims:
        blk = np.zeros((d, n, n), dtype=np.complex128)
        blk[::spacing] = np.eye(n)
        blocks.append(blk)
    return ModuleVector(shape, d, blocks)


def cyclic_shift(x: ModuleVector, steps: int) -> ModuleVector:
    """Entries rotated by steps positions (index j maps to j + steps mod d)."""
    return ModuleVector(
        x.shape, x.d, [np.roll(blk, int(steps), axis=0) for blk in x.blocks]
    )


def vector_entry_norms(x: ModuleVector) -> np.ndarray:
    """C*-norm of each coordinate of x, as a float array of length d."""
    per_block = [
        np.linalg.svd(blk, compute_uv=False)[..., 0] for blk in x.blocks
    ]
    return np.max(per_block, axis=0)


def vector_support(x: ModuleVector, rel_tol: float = SUPPORT_REL_TOL) -> list[int]:
    """Coordinates whose norm exceeds rel_tol times the largest one."""
    if rel_tol < 0:
        raise InputError(f"rel_tol must be nonnegative, got {rel_tol}")
    norms = vector_entry_norms(x)
    peak = norms.max()
    if peak == 0.0:
        return []
    return [int(j) for j in np.nonzero(norms > rel_tol * peak)[0]]


def vector_sparsity(x: ModuleVector, rel_tol: float = SUPPORT_REL_TOL) -> int:
    return len(vector_support(x, rel_tol=rel_tol))


def _validate_indices(p: int, indices, name: str) -> list[int]:
    out = []
    for i in indices:
        j = int(i)
        if not 0 <= j < p:
            raise InputError(f"{name} index {j} out of range 0..{p - 1}")
        out.append(j)
    if len(set(out)) != len(out):
        raise InputError(f"{name} contains repeated indices")
    return sorted(out)


def chebotarev_minor_nonsingular(p, rows, cols, threshold: float = RANK_TOL) -> bool:
    """True iff the square DFT minor on (rows, cols) is nonsingular.

    Nonsingular means the smallest singular value exceeds threshold times
    the largest.  For prime p this holds for every square minor.
    """
    p = _as_prime(p)
    rows = _validate_indices(p, rows, "rows")
    cols = _validate_indices(p, cols, "cols")
    if len(rows) != len(cols):
        raise InputError(
            f"minor must be square, got {len(rows)} rows and {len(cols)} columns"
        )
    if not rows:
        raise InputError("minor must have at least one row and column")
    minor = dft_matrix(p)[np.ix_(rows, cols)]
    sv = np.linalg.svd(minor, compute_uv=False)
    return bool(sv[-1] > threshold * sv[0])


def pattern_feasible_minor(
    p: int, support_t, support_omega, threshold: float = RANK_TOL
) -> bool:
    """Does a nonzero x exist with supp(x) in T and supp(x_hat) in Omega?

    Works for any length p (prime or not).  Feasibility is equivalent to
    rank deficiency of the DFT minor on rows outside Omega and columns T.
    """
    p = int(p)
    t = _validate_indices(p, support_t, "support")
    om = _validate_indices(p, support_omega, "fourier support")
    if not t:
        return False
    rows = sorted(set(range(p)) - set(om))
    if not rows:
        return True
    minor = dft_matrix(p)[np.ix_(rows, t)]
    sv = np.linalg.svd(minor, compute_uv=False)
    rank = int(np.count_nonzero(sv > threshold * sv[0]))
    return rank < len(t)


def _delta_supports(p: int, threshold: float) -> tuple[list[int], list[int]]:
    """Support and Fourier support of the scalar spike at index 0."""
    x = np.zeros(p, dtype=np.complex128)
    x[0] = 1.0
    xh = dft_matrix(p) @ x
    sup = [int(j) for j in np.nonzero(np.abs(x) > threshold * np.abs(x).max())[0]]
    fsup = [int(k) for k in np.nonzero(np.abs(xh) > threshold * np.abs(xh).max())[0]]
    return sup, fsup


def _layer_pairs_exhaustive(p: int, w: np.ndarray, threshold: float):
    """Scan every square minor in the layer |T| + |Omega| = p.

    Yields nothing for primes; a singular minor yields (T, Omega).  By
    monotonicity in Omega this layer decides all patterns with smaller
    support sums.  Runs in chunks so forced large-p scans stay bounded
    in memory.
    """
    checked = 0
    hits = []
    for s in range(1, p):
        cols_list = list(itertools.combinations(range(p), s))
        pair_iter = itertools.product(cols_list, cols_list)
        while True:
            chunk = list(itertools.islice(pair_iter, _CHUNK))
            if not chunk:
                break
            t_arr = np.array([c[0] for c in chunk])
            r_arr = np.array([c[1] for c in chunk])
            minors = w[r_arr[:, :, None], t_arr[:, None, :]]
            sv = np.linalg.svd(minors, compute_uv=False)
            bad = np.nonzero(sv[:, -1] <= threshold * sv[:, 0])[0]
            checked += len(chunk)
            for i in bad:
                t = [int(v) for v in t_arr[i]]
                omega = sorted(set(range(p)) - {int(v) for v in r_arr[i]})
                hits.append((t, omega))
    return checked, hits


def _pattern_witness(p: int, w: np.ndarray, t, omega, threshold: float):
    """Kernel vector for a feasible pattern, with its thresholded supports."""
    rows = sorted(set(range(p)) - set(omega))
    if rows:
        minor = w[np.ix_(rows, list(t))]
        _, _, vh = np.linalg.svd(minor)
        coeffs = vh[-1].conj()
    else:
        coeffs = np.zeros(len(t), dtype=np.complex128)
        coeffs[0] = 1.0
    x = np.zeros(p, dtype=np.complex128)
    x[list(t)] = coeffs
    xh = w @ x
    sup = [int(j) for j in np.nonzero(np.abs(x) > threshold * np.abs(x).max())[0]]
    fsup = [int(k) for k in np.nonzero(np.abs(xh) > threshold * np.abs(xh).max())[0]]
    return x, sup, fsup


def tao_min_sum(
    p,
    mode: str = "exhaustive",
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    force: bool = False,
    threshold: float = RANK_TOL,
) -> dict:
    """Minimum of ||x||_0 + ||x_hat||_0 over nonzero scalar x of length p.

    Exhaustive mode scans every square DFT minor in the critical layer
    |T| + |Omega| = p, which settles all smaller support sums as well;
    sampled mode draws random support pairs with |T| + |Omega| <= p and
    tests each by the same minor criterion.  For prime p all minors are
    nonsingular, so the minimum is p + 1, attained by the spike at 0.

    Exhaustive mode is capped at p <= 7 unless force=True (the minor count
    grows like C(2p, p)); sampled mode is capped at p <= 13.
    """
    p = _as_prime(p)
    if mode not in ("exhaustive", "sampled"):
        raise InputError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    if p > SAMPLED_MAX_P:
        raise InputError(f"p={p} exceeds the supported maximum {SAMPLED_MAX_P}")
    if mode == "exhaustive" and p > EXHAUSTIVE_MAX_P and not force:
        raise InputError(
            f"exhaustive mode at p={p} scans ~C(2p,p) minors; pass force=True "
            f"to run it anyway or use mode='sampled'"
        )
    if mode == "sampled" and samples < 1:
        raise InputError(f"samples must be positive, got {samples}")

    w = dft_matrix(p)
    violations = []

    if mode == "exhaustive":
        checked, hits = _layer_pairs_exhaustive(p, w, threshold)
    else:
        rng = np.random.default_rng(seed)
        s_arr = rng.integers(1, p, size=samples)
        t_arr = rng.integers(1, p - s_arr + 1)
        checked = int(samples)
        hits = []
        for s, t in sorted(set(zip(s_arr.tolist(), t_arr.tolist()))):
            group = np.nonzero((s_arr == s) & (t_arr == t))[0]
            m = len(group)
            perm_t = np.argsort(rng.random((m, p)), axis=1)
            perm_o = np.argsort(rng.random((m, p)), axis=1)
            supp_t = np.sort(perm_t[:, :s], axis=1)
            rows = np.sort(perm_o[:, t:], axis=1)
            minors = w[rows[:, :, None], supp_t[:, None, :]]
            sv = np.linalg.svd(minors, compute_uv=False)
            bad = np.nonzero(sv[:, -1] <= threshold * sv[:, 0])[0]
            for i in bad:
                t_set = [int(v) for v in supp_t[i]]
                omega = sorted(np.sort(perm_o[i, :t]).tolist())
                hits.append((t_set, [int(v) for v in omega]))

    min_sum = None
    witness = None
    for t, omega in hits:
        x, sup, fsup = _pattern_witness(p, w, t, omega, threshold)
        total = len(sup) + len(fsup)
        if min_sum is None or total < min_sum:
            min_sum = total
            witness = {
                "support": sup,
                "fourier_support": fsup,
                "entries": [[float(z.real), float(z.imag)] for z in x],
            }
        violations.append({"support": t, "fourier_support": omega})

    sup, fsup = _delta_supports(p, threshold)
    delta_sum = len(sup) + len(fsup)
    if min_sum is None or delta_sum < min_sum:
        min_sum = delta_sum
        witness = {"support": sup, "fourier_support": fsup}

    report = {
        "p": int(p),
        "mode": mode,
        "pairs_checked": int(checked),
        "min_sum": int(min_sum),
        "witness": witness,
        "threshold": float(threshold),
    }
    if violations:
        report["violating_patterns"] = violations
    return report


def _flattening_feasible(
    w: np.ndarray, p: int, t, omega, block_dims, threshold: float
) -> bool:
    """Kernel search for algebra-valued x in the complex flattening.

    The DFT acts on each scalar coordinate of A independently, so the
    constraint matrix is the minor tensored with an identity of size
    dim(A).  Used as an independent check of the coordinate reduction.
    """
    if not t:
        return False
    rows = sorted(set(range(p)) - set(omega))
    dim = sum(n * n for n in block_dims)
    if not rows:
        return True
    mat = np.kron(w[np.ix_(rows, list(t))], np.eye(dim))
    sv = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.count_nonzero(sv > threshold * sv[0]))
    return rank < len(t) * dim


def conjecture_audit(
    shape: AlgebraShape,
    p,
    trials: int,
    seed: int = 0,
    rel_tol: float = SUPPORT_REL_TOL,
    threshold: float = RANK_TOL,
) -> dict:
    """Brute-force search for violations of ||x||_0 + ||x_hat||_0 >= p + 1.

    Three layers of evidence over A^p:
      random sparse draws: `trials` vectors with uniformly random support
      size and Gaussian algebra entries, thresholded support counting;
      spike witness: the vector with 1_A at index 0 must attain p + 1;
      structured search (p <= 5): every support pattern with sum <= p is
      tested by the scalar minor criterion (the transform acts on each
      scalar coordinate of A separately, so scalar infeasibility rules out
      algebra-valued solutions) and cross-checked by a kernel search in
      the complex flattening.

    Any recorded violation is classified: "counterexample" if the scalar
    oracle confirms the support pattern is genuinely feasible, otherwise
    "implementation-defect" (a thresholding artifact).
    """
    p = _as_prime(p)
    trials = int(trials)
    if trials < 1:
        raise InputError(f"trials must be positive, got {trials}")
    if p > SAMPLED_MAX_P:
        raise InputError(f"p={p} exceeds the supported maximum {SAMPLED_MAX_P}")
    if not 0 <= rel_tol < 1:
        raise InputError(f"rel_tol must lie in [0, 1), got {rel_tol}")

    w = dft_matrix(p)
    rng = np.random.default_rng(seed)
    min_sum = None
    vector_violations = []

    chunk = 20_000
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        sizes = rng.integers(1, p + 1, size=m)
        perm = np.argsort(rng.random((m, p)), axis=1)
        mask = np.zeros((m, p), dtype=bool)
        mask[np.arange(m)[:, None], perm] = np.arange(p)[None, :] < sizes[:, None]
        x_blocks = []
        for n in shape.block_dims:
            g = (
                rng.standard_normal((m, p, n, n))
                + 1j * rng.standard_normal((m, p, n, n))
            ) / np.sqrt(2.0)
            x_blocks.append(g * mask[:, :, None, None])
        h_blocks = [np.einsum("kj,tjab->tkab", w, xb) for xb in x_blocks]

        def counts(blocks):
            per_block = [
                np.linalg.svd(b, compute_uv=False)[..., 0] for b in blocks
            ]
            norms = np.max(per_block, axis=0)
            peak = norms.max(axis=1)
            return (norms > rel_tol * peak[:, None]).sum(axis=1), norms

        s_counts, x_norms = counts(x_blocks)
        t_counts, h_norms = counts(h_blocks)
        sums = s_counts + t_counts
        batch_min = int(sums.min())
        if min_sum is None or batch_min < min_sum:
            min_sum = batch_min
        for i in np.nonzero(sums <= p)[0]:
            if len(vector_violations) >= 10:
                break
            sup = [int(j) for j in np.nonzero(x_norms[i] > rel_tol * x_norms[i].max())[0]]
            fsup = [int(k) for k in np.nonzero(h_norms[i] > rel_tol * h_norms[i].max())[0]]
            vec = ModuleVector(shape, p, [xb[i] for xb in x_blocks])
            feasible = pattern_feasible_minor(p, sup, fsup, threshold)
            vector_violations.append(
                {
                    "trial": int(done + i),
                    "sum": int(sums[i]),
                    "support": sup,
                    "fourier_support": fsup,
                    "classification": "counterexample" if feasible else "implementation-defect",
                    "vector": vec.to_dict(),
                }
            )
        done += m

    delta_blocks = []
    for n in shape.block_dims:
        blk = np.zeros((p, n, n), dtype=np.complex128)
        blk[0] = np.eye(n)
        delta_blocks.append(blk)
    delta = ModuleVector(shape, p, delta_blocks)
    delta_sum = vector_sparsity(delta, rel_tol) + vector_sparsity(ncdft(delta), rel_tol)
    min_sum = int(min(min_sum, delta_sum))

    patterns_checked = 0
    pattern_violations = []
    crosscheck_agreed = True
    pattern_search_performed = p <= PATTERN_SEARCH_MAX_P
    if pattern_search_performed:
        for size_t in range(1, p):
            for t_set in itertools.combinations(range(p), size_t):
                for size_o in range(1, p - size_t + 1):
                    for omega in itertools.combinations(range(p), size_o):
                        patterns_checked += 1
                        scalar = pattern_feasible_minor(p, t_set, omega, threshold)
                        flat = _flattening_feasible(
                            w, p, t_set, omega, shape.block_dims, threshold
                        )
                        if scalar != flat:
                            crosscheck_agreed = False
                        if scalar or flat:
                            pattern_violations.append(
                                {"support": list(t_set), "fourier_support": list(omega)}
                            )

    holds = (
        min_sum >= p + 1
        and delta_sum == p + 1
        and not vector_violations
        and not pattern_violations
        and crosscheck_agreed
    )
    return {
        "algebra": shape.to_list(),
        "p": int(p),
        "trials": trials,
        "seed": int(seed),
        "rel_tol": float(rel_tol),
        "threshold": float(threshold),
        "min_sum": int(min_sum),
        "delta_witness_sum": int(delta_sum),
        "vector_violations": vector_violations,
        "patterns_checked": int(patterns_checked),
        "pattern_violations": pattern_violations,
        "reduction_crosscheck_agreed": bool(crosscheck_agreed),
        "pattern_search_performed": bool(pattern_search_performed),
        "holds": bool(holds),
    }

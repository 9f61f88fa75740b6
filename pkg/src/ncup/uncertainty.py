"""Support-size uncertainty certificates for pairs of Parseval frames.

For modular Parseval frames tau, omega in A^d and nonzero x, the number of
effectively nonzero analysis coefficients against each frame obeys

    s_tau * s_omega >= 1 / mu**2,    mu = max ||<tau_n, omega_m>||,

together with the additive consequence ((s_tau + s_omega)/2)**2 >= 1/mu**2.
certify evaluates both on a concrete instance, proof_chain_check replays
the inequality chain behind the bound step by step, and
support_pair_feasible is an independent linear-algebra oracle deciding
whether a given pair of coefficient supports is achievable at all.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, norm
from .csmodule import ModuleVector, basis_vector, inner_product, module_norm, random_vector
from .errors import InputError, NonParsevalFrameError
from .frames import (
    SUPPORT_REL_TOL,
    ModularFrame,
    analysis,
    coherence,
    cross_gram_norms,
    is_parseval,
    random_parseval_frame,
    sparsity,
    support,
)

__all__ = [
    "UncertaintyCertificate",
    "certify",
    "proof_chain_check",
    "support_pair_feasible",
    "random_audit",
]

# Inequalities count as holding down to this slack: supports are integers
# but 1/mu**2 carries floating error.
SLACK_TOL = 1e-9

# Frames must pass the Parseval check at this tolerance before certifying.
PARSEVAL_CHECK_TOL = 1e-8

# Vectors at or below this module norm count as zero and are rejected.
ZERO_VECTOR_TOL = 1e-12

# Relative singular-value cutoff for the feasibility oracle's rank test.
FEASIBILITY_TOL = 1e-10

# Relative tolerance for each replayed step of the inequality chain.
CHAIN_TOL = 1e-9


@dataclass(frozen=True)
class UncertaintyCertificate:
    """Both uncertainty inequalities evaluated on one instance."""

    s_tau: int
    s_omega: int
    mu: float
    product_lhs: int
    additive_lhs: float
    rhs: float
    product_holds: bool
    additive_holds: bool
    slack: float

    def to_dict(self) -> dict:
        return {
            "s_tau": int(self.s_tau),
            "s_omega": int(self.s_omega),
            "mu": float(self.mu),
            "product_lhs": int(self.product_lhs),
            "additive_lhs": float(self.additive_lhs),
            "rhs": float(self.rhs),
            "product_holds": bool(self.product_holds),
            "additive_holds": bool(self.additive_holds),
            "slack": float(self.slack),
        }


def _require_parseval(frame: ModularFrame, name: str) -> None:
    if not is_parseval(frame, tol=PARSEVAL_CHECK_TOL):
        raise NonParsevalFrameError(
            f"{name} frame is not Parseval at tolerance {PARSEVAL_CHECK_TOL:g}; "
            f"run parsevalize first"
        )


def _require_nonzero(x: ModuleVector) -> None:
    if module_norm(x) <= ZERO_VECTOR_TOL:
        raise InputError("x is numerically zero; the bound excludes x = 0")


def _check_rel_tol(rel_tol: float) -> None:
    if not 0 <= rel_tol < 1:
        raise InputError(f"rel_tol must lie in [0, 1), got {rel_tol}")


def certify(
    tau: ModularFrame,
    omega: ModularFrame,
    x: ModuleVector,
    rel_tol: float = SUPPORT_REL_TOL,
) -> UncertaintyCertificate:
    """Evaluate both uncertainty inequalities for x against the frame pair.

    Both frames must pass the Parseval check at 1e-8 and x must be
    nonzero; violations raise NonParsevalFrameError / InputError.  A false
    product_holds on valid input signals an implementation bug, not new
    mathematics.
    """
    _check_rel_tol(rel_tol)
    _require_parseval(tau, "first (tau)")
    _require_parseval(omega, "second (omega)")
    _require_nonzero(x)
    s_tau = sparsity(analysis(tau, x), rel_tol=rel_tol)
    s_omega = sparsity(analysis(omega, x), rel_tol=rel_tol)
    mu = coherence(tau, omega)
    if mu <= 0.0:
        raise InputError("coherence is zero; frame pair is degenerate")
    rhs = 1.0 / mu**2
    product_lhs = s_tau * s_omega
    additive_lhs = ((s_tau + s_omega) / 2.0) ** 2
    return UncertaintyCertificate(
        s_tau=s_tau,
        s_omega=s_omega,
        mu=float(mu),
        product_lhs=product_lhs,
        additive_lhs=additive_lhs,
        rhs=float(rhs),
        product_holds=bool(product_lhs >= rhs - SLACK_TOL),
        additive_holds=bool(additive_lhs >= rhs - SLACK_TOL),
        slack=float(product_lhs - rhs),
    )


def proof_chain_check(
    tau: ModularFrame,
    omega: ModularFrame,
    x: ModuleVector,
    rel_tol: float = SUPPORT_REL_TOL,
    tol: float = CHAIN_TOL,
) -> list[tuple[str, float, float, bool]]:
    """Replay the chain of norms behind the product bound on one instance.

    With T, Omega the supports of the two coefficient sequences, u the
    omega-coefficients of x restricted to Omega, and w_n the cross
    coefficients (<tau_n, omega_m>)_{m in Omega}, the chain is

        ||x||^2 = ||sum_{n in T} <x,tau_n><tau_n,x>||        (tau Parseval)
                = ||sum_{n in T} <u,w_n><w_n,u>||            (omega Parseval)
               <= (sum_{n in T} ||<w_n,w_n>||) ||<u,u>||     (Cauchy-Schwarz)
               <= (sum_{n,m} ||<tau_n,omega_m>||^2) ||<u,u>||
               <= mu^2 |T| |Omega| ||<u,u>||
               <= mu^2 |T| |Omega| ||x||^2,

    which forces |T| |Omega| >= 1/mu^2.  Returns one (step_name, lhs, rhs,
    holds) tuple per link; equalities and inequalities are tested with
    relative tolerance tol.
    """
    _check_rel_tol(rel_tol)
    _require_parseval(tau, "first (tau)")
    _require_parseval(omega, "second (omega)")
    _require_nonzero(x)

    coeff_tau = analysis(tau, x)
    coeff_omega = analysis(omega, x)
    supp_t = support(coeff_tau, rel_tol=rel_tol)
    supp_o = support(coeff_omega, rel_tol=rel_tol)

    v0 = norm(inner_product(x, x))

    # sum over the tau-support of <x,tau_n><tau_n,x>
    sum_aa = AlgebraElement(
        x.shape,
        [
            np.einsum("nab,ncb->ac", blk[supp_t], blk[supp_t].conj())
            for blk in coeff_tau.blocks
        ],
    )
    v1 = norm(sum_aa)

    # u = omega-coefficients restricted to their support
    u_blocks = [blk[supp_o] for blk in coeff_omega.blocks]
    # cross coefficients w_n = (<tau_n, omega_m>)_{m in supp_o}, n in supp_t
    w_blocks = [
        np.einsum("nrab,mrcb->nmac", tb, wb.conj())[np.ix_(supp_t, supp_o)]
        for tb, wb in zip(tau.blocks, omega.blocks)
    ]

    # q_n = <u, w_n>, then sum_n q_n q_n*
    sum_qq = AlgebraElement(
        x.shape,
        [
            np.einsum(
                "nab,ncb->ac",
                np.einsum("mab,nmcb->nac", ub, wb.conj()),
                np.einsum("mab,nmcb->nac", ub, wb.conj()).conj(),
            )
            for ub, wb in zip(u_blocks, w_blocks)
        ],
    )
    v1x = norm(sum_qq)

    # ||<w_n, w_n>|| for each n in supp_t, maximized across blocks
    gram_w = [
        np.einsum("nmab,nmcb->nac", wb, wb.conj()) for wb in w_blocks
    ]
    w_norms = np.max(
        [np.linalg.svd(g, compute_uv=False)[..., 0] for g in gram_w], axis=0
    )
    gram_u = AlgebraElement(
        x.shape,
        [np.einsum("mab,mcb->ac", ub, ub.conj()) for ub in u_blocks],
    )
    norm_g = norm(gram_u)
    v2 = float(w_norms.sum() * norm_g)

    cross = cross_gram_norms(tau, omega)
    v3 = float((cross[np.ix_(supp_t, supp_o)] ** 2).sum() * norm_g)

    mu = float(cross.max())
    count = len(supp_t) * len(supp_o)
    v4 = mu**2 * count * norm_g
    v5 = mu**2 * count * v0

    def eq(a: float, b: float) -> bool:
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

    def le(a: float, b: float) -> bool:
        return a <= b + tol * max(1.0, abs(a), abs(b))

    return [
        ("parseval_support_identity", v0, v1, eq(v0, v1)),
        ("dual_frame_expansion", v1, v1x, eq(v1, v1x)),
        ("cauchy_schwarz", v1x, v2, le(v1x, v2)),
        ("entrywise_norm_bound", v2, v3, le(v2, v3)),
        ("coherence_sup", v3, v4, le(v3, v4)),
        ("support_count_parseval", v4, v5, le(v4, v5)),
    ]


def _validate_subset(count: int, indices, name: str) -> list[int]:
    out = []
    for i in indices:
        j = int(i)
        if not 0 <= j < count:
            raise InputError(f"{name} index {j} out of range 0..{count - 1}")
        out.append(j)
    if len(set(out)) != len(out):
        raise InputError(f"{name} contains repeated indices")
    return sorted(out)


def support_pair_feasible(
    tau: ModularFrame,
    omega: ModularFrame,
    support_t,
    support_omega,
    threshold: float = FEASIBILITY_TOL,
) -> tuple[bool, ModuleVector | None]:
    """Can a nonzero x have tau-support inside T and omega-support inside Omega?

    The constraints <x, tau_n> = 0 (n outside T) and <x, omega_m> = 0
    (m outside Omega) are complex-linear in the coordinates of x, so the
    question is whether the stacked constraint matrix has a nontrivial
    kernel; singular values at or below threshold times the largest count
    as zero.  Returns the verdict and a unit-module-norm witness when
    feasible.
    """
    if tau.shape != omega.shape or tau.d != omega.d:
        raise InputError(
            f"frames live in different modules: shape {tau.shape.block_dims} "
            f"d={tau.d} vs shape {omega.shape.block_dims} d={omega.d}"
        )
    supp_t = _validate_subset(tau.count, support_t, "support")
    supp_o = _validate_subset(omega.count, support_omega, "fourier support")
    comp_t = sorted(set(range(tau.count)) - set(supp_t))
    comp_o = sorted(set(range(omega.count)) - set(supp_o))

    shape, d = tau.shape, tau.d
    coords = [
        (r, b, a, c)
        for r in range(d)
        for b, n in enumerate(shape.block_dims)
        for a in range(n)
        for c in range(n)
    ]
    dim = len(coords)

    if not comp_t and not comp_o:
        return True, basis_vector(shape, d, 0)

    columns = []
    for r, b, a, c in coords:
        blocks = [np.zeros((d, n, n), dtype=np.complex128) for n in shape.block_dims]
        blocks[b][r, a, c] = 1.0
        probe = ModuleVector(shape, d, blocks)
        ct = analysis(tau, probe)
        co = analysis(omega, probe)
        parts = [np.concatenate([cb[n].ravel() for cb in ct.blocks]) for n in comp_t]
        parts += [np.concatenate([cb[m].ravel() for cb in co.blocks]) for m in comp_o]
        columns.append(np.concatenate(parts))
    mat = np.array(columns).T

    _, sv, vh = np.linalg.svd(mat)
    rank = int(np.count_nonzero(sv > threshold * sv[0])) if sv.size else 0
    if rank >= dim:
        return False, None

    kernel = vh[-1].conj()
    blocks = [np.zeros((d, n, n), dtype=np.complex128) for n in shape.block_dims]
    for value, (r, b, a, c) in zip(kernel, coords):
        blocks[b][r, a, c] = value
    witness = ModuleVector(shape, d, blocks)
    scale = module_norm(witness)
    if scale > 0:
        witness = ModuleVector(shape, d, [blk / scale for blk in witness.blocks])
    return True, witness


def random_audit(
    shape,
    d: int,
    n_tau: int,
    n_omega: int,
    trials: int,
    seed: int = 0,
    rel_tol: float = SUPPORT_REL_TOL,
    threads: int = 1,
) -> dict:
    """Certify `trials` random Parseval pairs with random nonzero vectors.

    Each trial draws its own generator from (seed, trial), so results do
    not depend on scheduling and the whole report is reproducible.  The
    report counts violations (the bound guarantees zero), tracks the
    minimum slack and the tightest trial, and keeps one record per trial.
    """
    trials = int(trials)
    if trials < 1:
        raise InputError(f"trials must be positive, got {trials}")
    _check_rel_tol(rel_tol)

    def one_trial(t: int) -> dict:
        rng = np.random.default_rng((seed, t))
        tau = random_parseval_frame(shape, d, n_tau, rng)
        omega = random_parseval_frame(shape, d, n_omega, rng)
        x = random_vector(shape, d, rng)
        while module_norm(x) <= ZERO_VECTOR_TOL:
            x = random_vector(shape, d, rng)
        cert = certify(tau, omega, x, rel_tol=rel_tol)
        chain = proof_chain_check(tau, omega, x, rel_tol=rel_tol)
        record = {"trial": t, **cert.to_dict()}
        record["chain_holds"] = all(holds for *_, holds in chain)
        failing = [name for name, _, _, holds in chain if not holds]
        if failing:
            record["failing_steps"] = failing
        return record

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one_trial, range(trials)))
    else:
        records = [one_trial(t) for t in range(trials)]

    violations = sum(
        1
        for r in records
        if not (r["product_holds"] and r["additive_holds"] and r["chain_holds"])
    )
    slacks = [r["slack"] for r in records]
    tightest = int(np.argmin(slacks))
    return {
        "algebra": list(shape.block_dims),
        "d": int(d),
        "n_tau": int(n_tau),
        "n_omega": int(n_omega),
        "trials": trials,
        "seed": int(seed),
        "rel_tol": float(rel_tol),
        "slack_tol": SLACK_TOL,
        "violations": int(violations),
        "min_slack": float(min(slacks)),
        "tightest_trial": tightest,
        "records": records,
    }

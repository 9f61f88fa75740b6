"""Independent dense-matrix oracle for the block-structured code paths.

Everything here embeds the algebra A = M_{n1} + ... + M_{nB} as block
diagonal matrices of size N = n1 + ... + nB and works with plain matmul:

    element  ->  (N, N) block-diagonal matrix
    vector in A^d  ->  (N, d*N) horizontal stack [X_1 ... X_d]
    operator on A^d  ->  (d*N, d*N) block matrix of embedded entries

Under this embedding <x, y> = X Y^H, the right operator action is X M,
and analysis coefficients are X T_n^H.  None of the library's einsum
layouts are reused, so agreement is a genuine cross-check.
"""

import numpy as np


def embed_element(a) -> np.ndarray:
    total = sum(a.shape.block_dims)
    out = np.zeros((total, total), dtype=np.complex128)
    pos = 0
    for n, blk in zip(a.shape.block_dims, a.blocks):
        out[pos : pos + n, pos : pos + n] = blk
        pos += n
    return out


def embed_vector(x) -> np.ndarray:
    return np.hstack([embed_element(e) for e in x.entries])


def embed_operator(m) -> np.ndarray:
    rows = []
    for i in range(m.d):
        rows.append(np.hstack([embed_element(m.entry(i, j)) for j in range(m.d)]))
    return np.vstack(rows)


def oracle_inner_product(x, y) -> np.ndarray:
    """Dense matrix of <x, y> under the embedding."""
    return embed_vector(x) @ embed_vector(y).conj().T


def oracle_op_apply(m, x) -> np.ndarray:
    """Dense embedding of the right action x M."""
    return embed_vector(x) @ embed_operator(m)


def oracle_analysis(frame, x) -> list[np.ndarray]:
    """Dense embeddings of every coefficient <x, tau_n>."""
    xd = embed_vector(x)
    return [xd @ embed_vector(v).conj().T for v in frame.vectors]


def oracle_norm(a) -> float:
    return float(np.linalg.svd(embed_element(a), compute_uv=False)[0])


def oracle_min_eig(a) -> float:
    dense = embed_element(a)
    herm = (dense + dense.conj().T) / 2.0
    return float(np.linalg.eigvalsh(herm).min())

"""Alternating eigen-solvers over product and low-Schmidt-rank vectors.

Both objectives are quadratic in each local factor once the other factor is
fixed, so every half-step is an exact extremal eigenproblem on a compressed
operator and the objective is monotone along the iteration.
"""

from __future__ import annotations

import numpy as np


def _haar_columns(rng: np.random.Generator, dim: int, k: int) -> np.ndarray:
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    q, _ = np.linalg.qr(g)
    return q


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _min_pair(h: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return float(w[0]), v[:, 0]


def min_low_rank_expectation(
    x: np.ndarray,
    dims: tuple[int, int],
    k: int,
    rng: np.random.Generator,
    max_iters: int = 200,
    tol: float = 1e-12,
) -> tuple[float, np.ndarray]:
    """One seeded run of ``min <psi|x|psi>`` over unit ``psi`` of Schmidt rank <= k.

    Fixing a ``k``-dimensional B-side subspace spanned by the columns of ``V``,
    every admissible ``psi`` is ``sum_a u_a (x) V[:, a]`` and the optimum over
    the ``u_a`` is the lowest eigenvector of ``(I (x) V)^dagger x (I (x) V)``.
    The A-side half-step is symmetric, using the top-``k`` left singular
    vectors of the current ``psi``.

    Returns the best value and the flat vector achieving it.
    """
    da, db = dims
    t = x.reshape(da, db, da, db)
    if k >= min(da, db):
        return _min_pair(x)
    v = _haar_columns(rng, db, k)
    best = np.inf
    best_psi = None
    for _ in range(max_iters):
        # B subspace fixed: variables w[i, a]
        c = np.einsum("ka,ikjl,lb->iajb", v.conj(), t, v).reshape(da * k, da * k)
        val_a, w = _min_pair(c)
        psi = (w.reshape(da, k) @ v.T).reshape(da, db)
        u = np.linalg.svd(psi, full_matrices=False)[0][:, :k]
        # A subspace fixed: variables w[a, l]
        c = np.einsum("ia,ikjl,jb->akbl", u.conj(), t, u).reshape(k * db, k * db)
        val_b, w = _min_pair(c)
        psi = u @ w.reshape(k, db)
        v = np.linalg.svd(psi, full_matrices=False)[2][:k].T
        improved = best - val_b
        if val_b < best:
            best, best_psi = val_b, psi.reshape(-1)
        if improved < tol:
            break
    return best, best_psi


def min_product_expectation(
    h: np.ndarray,
    dims: tuple[int, int],
    rng: np.random.Generator,
    max_iters: int = 500,
    tol: float = 1e-14,
    start: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """One seeded run of ``min <e,f|h|e,f>`` over unit product vectors."""
    da, db = dims
    t = h.reshape(da, db, da, db)
    if start is None:
        f = _random_unit(rng, db)
    else:
        f = start[1]
    best = np.inf
    e = None
    for _ in range(max_iters):
        ce = np.einsum("k,ikjl,l->ij", f.conj(), t, f)
        _, e = _min_pair(ce)
        cf = np.einsum("i,ikjl,j->kl", e.conj(), t, e)
        val, f = _min_pair(cf)
        improved = best - val
        best = min(best, val)
        if improved < tol:
            break
    return best, e, f


def max_product_overlap(
    proj_a: np.ndarray,
    dims: tuple[int, int],
    rng: np.random.Generator,
    proj_conj: np.ndarray | None = None,
    max_iters: int = 2000,
    tol: float = 1e-15,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Maximize ``<e,f|Pi|e,f> + <e*,f|Pi'|e*,f>`` over unit product vectors.

    ``Pi`` and ``Pi'`` are orthogonal projectors (``Pi'`` optional). Conjugating
    ``e`` turns ``<e*|C|e*>`` into ``<e|conj(C)|e>``, so the e-step stays an
    eigenproblem. Returns the residual ``sum_j (1 - overlap_j)`` and ``(e, f)``.
    """
    da, db = dims
    t1 = proj_a.reshape(da, db, da, db)
    t2 = None if proj_conj is None else proj_conj.reshape(da, db, da, db)
    n_terms = 1 if t2 is None else 2
    f = _random_unit(rng, db)
    best_res = np.inf
    best = None
    for _ in range(max_iters):
        ce = np.einsum("k,ikjl,l->ij", f.conj(), t1, f)
        if t2 is not None:
            ce = ce + np.einsum("k,ikjl,l->ij", f.conj(), t2, f).conj()
        w, vecs = np.linalg.eigh(0.5 * (ce + ce.conj().T))
        e = vecs[:, -1]
        cf = np.einsum("i,ikjl,j->kl", e.conj(), t1, e)
        if t2 is not None:
            ec = e.conj()
            cf = cf + np.einsum("i,ikjl,j->kl", ec.conj(), t2, ec)
        w, vecs = np.linalg.eigh(0.5 * (cf + cf.conj().T))
        f = vecs[:, -1]
        res = max(n_terms - float(w[-1]), 0.0)
        improved = best_res - res
        if res < best_res:
            best_res, best = res, (e, f)
        if res < 1e-15 or improved < tol:
            break
    return best_res, best[0], best[1]

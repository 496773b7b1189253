"""Dense complex-matrix primitives: Hermitian spectra, norms, tensor products,
partial traces.

Everything here works on plain ``numpy`` arrays. Bipartite index convention
throughout the package: basis vector ``|i>_A (x) |j>_B`` sits at flat index
``i * dim_b + j``.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple

import numpy as np

from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatchError, NonHermitianError, NonSquareError


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2:
        raise NonSquareError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def check_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NonSquareError(f"matrix is not square: shape {a.shape}")
    return a


def hermitian_defect(m) -> float:
    """Largest entrywise violation of ``M == M^dagger``."""
    a = check_square(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    a = check_square(m)
    scale = 1.0 + (float(np.max(np.abs(a))) if a.size else 0.0)
    return hermitian_defect(a) <= tol.hermitian * scale


def eig_hermitian(m, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back in descending order. Degenerate eigenvalues keep the
    relative order produced by the underlying LAPACK solver (a stable sort is
    used), so the result is deterministic for a given input.

    Raises
    ------
    NonSquareError
        If ``m`` is not square.
    NonHermitianError
        If ``m`` deviates from its adjoint by more than ``tol.hermitian``
        relative to ``1 + max|m|``.
    """
    a = check_square(m)
    if not is_hermitian(a, tol):
        raise NonHermitianError(
            f"matrix is not Hermitian (defect {hermitian_defect(a):.3e})"
        )
    # symmetrize so round-off in the input cannot leak into the spectrum
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def eigvalsh_desc(m) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix without the symmetry check."""
    a = check_square(m)
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))[::-1]


def min_eigh(m) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of a Hermitian matrix (no symmetry check)."""
    a = check_square(m)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return float(w[0]), v[:, 0]


def trace_norm(m) -> float:
    """``Tr sqrt(M^dagger M)``, the sum of singular values."""
    a = check_square(m)
    if a.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def operator_norm(m) -> float:
    """Largest singular value."""
    a = check_square(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(a (x) b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ms) -> np.ndarray:
    return reduce(np.kron, [as_matrix(m) for m in ms])


def _check_bipartite(a: np.ndarray, dims: tuple[int, int]) -> tuple[int, int]:
    d1, d2 = (int(d) for d in dims)
    if a.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatchError(
            f"matrix of shape {a.shape} does not act on a {d1}x{d2} bipartite space"
        )
    return d1, d2


def partial_trace(m, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    m : array_like
        Square matrix of size ``dims[0] * dims[1]``.
    dims : (int, int)
        Local dimensions ``(d_A, d_B)``.
    keep : {"A", "B"}
        Which factor survives.
    """
    a = check_square(m)
    d1, d2 = _check_bipartite(a, dims)
    t = a.reshape(d1, d2, d1, d2)
    if keep.upper() == "A":
        return np.einsum("ijkj->ik", t)
    if keep.upper() == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose_matrix(m, dims: tuple[int, int], side: str = "B") -> np.ndarray:
    """Transpose the indices of one factor: ``<m,mu|X^{T_B}|n,nu> = X[(m,nu),(n,mu)]``."""
    a = check_square(m)
    d1, d2 = _check_bipartite(a, dims)
    t = a.reshape(d1, d2, d1, d2)
    if side.upper() == "B":
        t = t.transpose(0, 3, 2, 1)
    elif side.upper() == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return t.reshape(d1 * d2, d1 * d2)


def regroup_copies(m, dims: tuple[int, int], n: int) -> np.ndarray:
    """Reorder ``A1 B1 A2 B2 ... An Bn`` into ``A1..An B1..Bn``.

    ``m`` acts on ``(d_A d_B)^n`` dimensions in copy order (as produced by
    repeated :func:`kron`); the result acts on ``d_A^n (x) d_B^n`` with the same
    bipartite index convention as a single copy.
    """
    a = check_square(m)
    d1, d2 = dims
    total = (d1 * d2) ** n
    if a.shape != (total, total):
        raise DimensionMismatchError(f"expected {total}x{total}, got {a.shape}")
    if n == 1:
        return a.copy()
    t = a.reshape([d1, d2] * n * 2)
    rows_a = [2 * k for k in range(n)]
    rows_b = [2 * k + 1 for k in range(n)]
    perm = rows_a + rows_b + [2 * n + k for k in rows_a] + [2 * n + k for k in rows_b]
    return t.transpose(perm).reshape(total, total)


def tensor_power(m, dims: tuple[int, int], n: int) -> np.ndarray:
    """``m^{(x) n}`` regrouped as a bipartite operator on ``d_A^n (x) d_B^n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = check_square(m)
    return regroup_copies(reduce(np.kron, [a] * n), dims, n)


def proj(v) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    return np.outer(v, v.conj())


def orthonormal_complement(basis: np.ndarray, dim: int, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the complement of ``span(basis)`` in ``C^dim``.

    Computational basis vectors are tried in index order, so a support spanned
    by the first ``k`` basis vectors gets the complement ``e_k, e_{k+1}, ...``.
    """
    q = np.zeros((dim, 0), dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if q.size:
        q, _ = np.linalg.qr(q)
        s = np.linalg.svd(q, compute_uv=False)
        q = q[:, s > tol]
    out = []
    for k in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            if q.shape[1]:
                v = v - q @ (q.conj().T @ v)
            for w in out:
                v = v - w * np.vdot(w, v)
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            out.append(v / nv)
    if not out:
        return np.zeros((dim, 0), dtype=complex)
    return np.column_stack(out)

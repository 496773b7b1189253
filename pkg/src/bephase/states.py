"""State constructors, Schmidt analysis and purification.

The one-based oscillator basis ``|1>, |2>, ...`` maps to zero-based
indices ``0, 1, ...`` here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import linalg
from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    AmbientTooSmallError,
    DimensionMismatchError,
    EmptyWeightsError,
    FidelityOutOfRangeError,
    InvalidParamsError,
    InvalidStateError,
    NotNormalizedError,
    RankOutOfRangeError,
    WrongBlockInputError,
    ZeroDimensionError,
    ZeroVectorError,
)

__all__ = [
    "BipartiteVector",
    "DensityOperator",
    "SchmidtDecomposition",
    "CvBesParams",
    "Approximant",
    "maximally_entangled",
    "isotropic",
    "cv_bes",
    "cv_bes_unnormalized_trace",
    "spurious_block_state",
    "distillable_approximant",
    "proof1_approximant",
    "schmidt_decompose",
    "purify",
    "random_density",
    "random_vector",
    "product_density",
    "basis_vector",
]


@dataclass(frozen=True, eq=False)
class BipartiteVector:
    """Pure state amplitudes on ``C^dim_a (x) C^dim_b`` (index ``i * dim_b + j``)."""

    amps: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.dim_a < 1 or self.dim_b < 1:
            raise ZeroDimensionError("local dimensions must be positive")
        if amps.size != self.dim_a * self.dim_b:
            raise DimensionMismatchError(
                f"{amps.size} amplitudes do not fit {self.dim_a}x{self.dim_b}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return abs(self.norm - 1.0) <= tol.norm

    def require_normalized(self, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
        if not self.is_normalized(tol):
            raise NotNormalizedError(f"vector norm {self.norm!r} is not 1")

    def normalized(self) -> "BipartiteVector":
        n = self.norm
        if n == 0:
            raise ZeroVectorError("cannot normalize the zero vector")
        return BipartiteVector(self.amps / n, self.dim_a, self.dim_b)

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``dim_a x dim_b``."""
        return self.amps.reshape(self.dim_a, self.dim_b)

    def projector(self) -> "DensityOperator":
        v = self.normalized()
        return DensityOperator(linalg.proj(v.amps), self.dim_a, self.dim_b)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive semidefinite operator on ``C^dim_a (x) C^dim_b``.

    The invariants are checked on construction. Tiny anti-Hermitian round-off
    is removed by symmetrizing the stored matrix.
    """

    mat: np.ndarray
    dim_a: int
    dim_b: int
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ZeroDimensionError("local dimensions must be positive")
        m = np.asarray(self.mat, dtype=complex)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match {self.dim_a}x{self.dim_b}"
            )
        if not linalg.is_hermitian(m, self.tol):
            raise InvalidStateError("density operator must be Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.tol.trace:
            raise InvalidStateError(f"trace {tr!r} differs from 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < -self.tol.psd * (1.0 + max(abs(w[0]), abs(w[-1]))):
            raise InvalidStateError(f"negative eigenvalue {w[0]!r}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_unnormalized(cls, mat, dim_a: int, dim_b: int, **kw) -> "DensityOperator":
        m = np.asarray(mat, dtype=complex)
        tr = np.trace(m).real
        if tr <= 0:
            raise InvalidStateError("operator has non-positive trace")
        return cls(m / tr, dim_a, dim_b, **kw)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def reduced(self, keep: str = "A") -> np.ndarray:
        return linalg.partial_trace(self.mat, self.dims, keep=keep)

    def expectation(self, v) -> float:
        amps = v.amps if isinstance(v, BipartiteVector) else np.asarray(v).reshape(-1)
        return float(np.vdot(amps, self.mat @ amps).real)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh_desc(self.mat)


class SchmidtDecomposition(NamedTuple):
    """``v = sum_k coeffs[k] * left[:, k] (x) right[:, k]``, coefficients descending."""

    coeffs: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    rank: int

    def reassemble(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coeffs, self.left_vectors, self.right_vectors).reshape(-1)


def basis_vector(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def maximally_entangled(m: int) -> BipartiteVector:
    """``sum_i |i,i> / sqrt(m)`` on ``m (x) m``."""
    if m < 1:
        raise ZeroDimensionError("m must be >= 1")
    amps = np.zeros(m * m, dtype=complex)
    amps[np.arange(m) * (m + 1)] = 1.0 / np.sqrt(m)
    return BipartiteVector(amps, m, m)


def isotropic(m: int, fidelity: float) -> DensityOperator:
    """Isotropic state with the given overlap ``F = <Psi_+|rho|Psi_+>``.

    ``rho = F P_+ + (1 - F) (I - P_+) / (m^2 - 1)``, which equals the
    ``(1 - q) I / m^2 + q P_+`` form with ``q = (m^2 F - 1) / (m^2 - 1)``.
    """
    if m < 2:
        raise ZeroDimensionError("isotropic states need m >= 2")
    if not 0.0 <= fidelity <= 1.0:
        raise FidelityOutOfRangeError(f"fidelity {fidelity!r} outside [0, 1]")
    p_plus = linalg.proj(maximally_entangled(m).amps)
    eye = np.eye(m * m)
    mat = fidelity * p_plus + (1.0 - fidelity) * (eye - p_plus) / (m * m - 1)
    return DensityOperator(mat, m, m)


@dataclass(frozen=True)
class CvBesParams:
    """Geometric amplitudes ``a_n = a**n``, ``c_n = c**n`` with ``0 < a < c < 1``."""

    a: float = 0.4
    c: float = 0.6
    N: int = 6

    def __post_init__(self):
        if not (0.0 < self.a < self.c < 1.0):
            raise InvalidParamsError(f"need 0 < a < c < 1, got a={self.a}, c={self.c}")
        if self.N < 1:
            raise InvalidParamsError("truncation N must be >= 1")


def _cv_bes_vectors(params: CvBesParams) -> list[np.ndarray]:
    a, c, N = params.a, params.c, params.N
    d = N
    vecs = []
    psi = np.zeros(d * d)
    for n in range(1, N + 1):
        psi[(n - 1) * d + (n - 1)] = a**n
    vecs.append(psi)
    for n in range(1, N + 1):
        for m in range(n + 1, N + 1):
            v = np.zeros(d * d)
            v[(n - 1) * d + (m - 1)] = c**m * a**n
            v[(m - 1) * d + (n - 1)] = a**m / c**m
            vecs.append(v)
    return vecs


def cv_bes_unnormalized_trace(params: CvBesParams) -> float:
    """Closed-form trace of the unnormalized truncated state."""
    a, c, N = params.a, params.c, params.N
    total = sum(a ** (2 * n) for n in range(1, N + 1))
    for n in range(1, N + 1):
        for m in range(n + 1, N + 1):
            total += c ** (2 * m) * a ** (2 * n) + c ** (-2 * m) * a ** (2 * m)
    return total


def cv_bes(params: CvBesParams | None = None, *, unnormalized: bool = False):
    """Truncation of the two-oscillator PPT entangled family to ``N (x) N``.

    ``rho ~ |Psi><Psi| + sum_{n<m} |Psi_mn><Psi_mn|`` with
    ``Psi = sum_n a^n |n,n>`` and
    ``Psi_mn = c^m a^n |n,m> + c^-m a^m |m,n>``, normalized by its trace.

    With ``unnormalized=True`` the raw real matrix is returned instead of a
    :class:`DensityOperator`.
    """
    params = params or CvBesParams()
    d = params.N
    mat = np.zeros((d * d, d * d))
    for v in _cv_bes_vectors(params):
        mat += np.outer(v, v)
    if unnormalized:
        return mat
    return DensityOperator.from_unnormalized(mat, d, d)


def spurious_block_state(sigma: DensityOperator, blocks: int, weights: Sequence[float]) -> DensityOperator:
    """Direct sum of weighted copies of a ``3 (x) 3`` state on locally orthogonal blocks.

    Block ``n`` occupies local indices ``[3n, 3n + 3)`` on both sides; weights
    are renormalized over the ``blocks`` entries used.
    """
    if sigma.dims != (3, 3):
        raise WrongBlockInputError(f"expected a 3x3 state, got {sigma.dims}")
    w = np.asarray(list(weights), dtype=float)[:blocks]
    if blocks < 1 or w.size < blocks:
        raise EmptyWeightsError(f"need {blocks} weights, got {w.size}")
    if np.any(w <= 0):
        raise EmptyWeightsError("weights must be positive")
    w = w / w.sum()
    d = 3 * blocks
    s = sigma.mat.reshape(3, 3, 3, 3)
    t = np.zeros((d, d, d, d), dtype=complex)
    for n, wn in enumerate(w):
        sl = slice(3 * n, 3 * n + 3)
        t[sl, sl, sl, sl] = wn * s
    return DensityOperator(t.reshape(d * d, d * d), d, d)


def schmidt_decompose(v: BipartiteVector, rank_tolerance: float = DEFAULT_TOLERANCES.rank) -> SchmidtDecomposition:
    """Schmidt decomposition from the SVD of the ``dim_a x dim_b`` amplitude matrix."""
    if v.norm == 0:
        raise ZeroVectorError("cannot decompose the zero vector")
    u, s, vh = np.linalg.svd(v.matrix(), full_matrices=False)
    rank = int(np.sum(s > rank_tolerance))
    return SchmidtDecomposition(s, u, vh.T, rank)


def schmidt_rank(v: BipartiteVector, rank_tolerance: float = DEFAULT_TOLERANCES.rank) -> int:
    return schmidt_decompose(v, rank_tolerance).rank


def purify(rho: DensityOperator, tol: Tolerances = DEFAULT_TOLERANCES) -> BipartiteVector:
    """Purification on ``(system 12) (x) ancilla``, ancilla dimension = rank of ``rho``.

    The returned vector is bipartite across the cut (12)|3, so its Schmidt
    rank there equals the ancilla dimension; it is maximal exactly when
    ``rho`` has full rank.
    """
    eigs = linalg.eig_hermitian(rho.mat, tol)
    cut = tol.psd * (1.0 + abs(eigs.eigenvalues[0]))
    keep = eigs.eigenvalues > cut
    w = eigs.eigenvalues[keep]
    vecs = eigs.eigenvectors[:, keep]
    r = int(keep.sum())
    amps = (vecs * np.sqrt(w)).reshape(rho.dim, r)
    return BipartiteVector(amps.reshape(-1), rho.dim, r).normalized()


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_density(dim_a: int, dim_b: int, rank: int | None = None, seed=None) -> DensityOperator:
    """Seeded ``G G^dagger / Tr`` with a complex Gaussian ``d x rank`` factor ``G``."""
    d = dim_a * dim_b
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise RankOutOfRangeError(f"rank {rank} outside [1, {d}]")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return DensityOperator.from_unnormalized(g @ g.conj().T, dim_a, dim_b)


def random_vector(dim_a: int, dim_b: int, schmidt_rank: int | None = None, seed=None) -> BipartiteVector:
    """Seeded normalized vector; with ``schmidt_rank=k`` it has exactly ``k`` Schmidt terms.

    The rank-``k`` case draws Gaussian ``dim_a x k`` and ``k x dim_b`` factors,
    which is full rank ``k`` with probability one.
    """
    rng = _rng(seed)
    if schmidt_rank is None:
        amps = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    else:
        k = schmidt_rank
        if not 1 <= k <= min(dim_a, dim_b):
            raise RankOutOfRangeError(f"Schmidt rank {k} impossible on {dim_a}x{dim_b}")
        left = rng.standard_normal((dim_a, k)) + 1j * rng.standard_normal((dim_a, k))
        right = rng.standard_normal((k, dim_b)) + 1j * rng.standard_normal((k, dim_b))
        amps = (left @ right).reshape(-1)
    return BipartiteVector(amps, dim_a, dim_b).normalized()


def product_density(rho_a, rho_b) -> DensityOperator:
    a = np.asarray(rho_a)
    b = np.asarray(rho_b)
    return DensityOperator(np.kron(a, b), a.shape[0], b.shape[0])


@dataclass(frozen=True, eq=False)
class Approximant:
    """Finite-support approximant of a state with an added distillable block."""

    state: DensityOperator
    phi: BipartiteVector
    normalization: float
    discarded_mass: float
    complement_a: np.ndarray
    complement_b: np.ndarray

    def __iter__(self):
        # allows ``rho_n, phi = distillable_approximant(...)``
        return iter((self.state, self.phi))


def _local_support(dim: int, N: int, reduced: np.ndarray, tol: float) -> np.ndarray:
    """Span of the first N basis vectors joined with the range of ``reduced``."""
    cols = [basis_vector(k, dim) for k in range(min(N, dim))]
    w, v = np.linalg.eigh(reduced)
    cut = tol * (1.0 + abs(w[-1]))
    cols.extend(v[:, i] for i in range(dim) if w[i] > cut)
    basis = np.column_stack(cols)
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    return u[:, s > 1e-10]


def distillable_approximant(
    rho: DensityOperator,
    N: int,
    schmidt_rank: int = 2,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Approximant:
    """Compress ``rho`` to rank ``N`` with ``N``-term Schmidt truncation and mix in
    a maximally entangled block on the orthogonal complement.

    ``rho_N = K_N (rho~_N + |Phi><Phi| / N)`` where ``rho~_N`` keeps the top ``N``
    spectral terms of ``rho`` and the top ``N`` Schmidt terms of each eigenvector
    (no renormalization before ``K_N``). ``Phi`` is
    ``sum_{i<p} |a_i, b_i> / sqrt(p)`` with ``a_i, b_i`` the first complement
    vectors of the local supports; ``p = schmidt_rank`` (2 gives the two-qubit
    block).

    Raises
    ------
    AmbientTooSmallError
        If a local dimension is below ``N + schmidt_rank`` or the complement of
        the compressed support is too small.
    """
    p = int(schmidt_rank)
    if N < 1 or p < 1:
        raise ValueError("N and schmidt_rank must be positive")
    da, db = rho.dims
    if min(da, db) < N + p:
        raise AmbientTooSmallError(
            f"local dims {rho.dims} too small for N={N} plus a rank-{p} block"
        )
    eigs = linalg.eig_hermitian(rho.mat, tol)
    compressed = np.zeros_like(rho.mat)
    for n in range(min(N, rho.dim)):
        pn = eigs.eigenvalues[n]
        if pn <= 0:
            continue
        sd = schmidt_decompose(BipartiteVector(eigs.eigenvectors[:, n], da, db), 0.0)
        k = min(N, sd.coeffs.size)
        psi_n = np.einsum("k,ik,jk->ij", sd.coeffs[:k], sd.left_vectors[:, :k], sd.right_vectors[:, :k]).reshape(-1)
        compressed += pn * np.outer(psi_n, psi_n.conj())
    kept = float(np.trace(compressed).real)

    sup_a = _local_support(da, N, linalg.partial_trace(compressed, (da, db), "A"), tol.psd)
    sup_b = _local_support(db, N, linalg.partial_trace(compressed, (da, db), "B"), tol.psd)
    comp_a = linalg.orthonormal_complement(sup_a, da)
    comp_b = linalg.orthonormal_complement(sup_b, db)
    if comp_a.shape[1] < p or comp_b.shape[1] < p:
        raise AmbientTooSmallError("orthogonal complement of the compressed support is too small")
    comp_a = comp_a[:, :p]
    comp_b = comp_b[:, :p]
    phi_amps = sum(np.kron(comp_a[:, i], comp_b[:, i]) for i in range(p)) / np.sqrt(p)
    phi = BipartiteVector(phi_amps, da, db)

    k_n = 1.0 / (kept + 1.0 / N)
    mat = k_n * (compressed + linalg.proj(phi.amps) / N)
    return Approximant(
        state=DensityOperator(mat, da, db, tol),
        phi=phi,
        normalization=k_n,
        discarded_mass=1.0 - kept,
        complement_a=comp_a,
        complement_b=comp_b,
    )


# name used by the public operation list
proof1_approximant = distillable_approximant


def embed(rho: DensityOperator, dim_a: int, dim_b: int) -> DensityOperator:
    """Place ``rho`` on the leading local indices of a larger ambient space."""
    if dim_a < rho.dim_a or dim_b < rho.dim_b:
        raise DimensionMismatchError("target dimensions smaller than the state")
    t = np.zeros((dim_a, dim_b, dim_a, dim_b), dtype=complex)
    t[: rho.dim_a, : rho.dim_b, : rho.dim_a, : rho.dim_b] = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    return DensityOperator(t.reshape(dim_a * dim_b, -1), dim_a, dim_b)


def mixture(states: Iterable[DensityOperator], probs: Sequence[float]) -> DensityOperator:
    states = list(states)
    probs = np.asarray(probs, dtype=float)
    probs = probs / probs.sum()
    mat = sum(p * s.mat for p, s in zip(probs, states))
    return DensityOperator(mat, *states[0].dims)

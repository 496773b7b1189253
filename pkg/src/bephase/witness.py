"""Edge-state machinery: ranges and kernels, product vectors under conjugation
constraints, the witness ``W = P + Q^{T_A} - eps I`` and the Schmidt probe.

Solver outcomes that find nothing are reported as inconclusive; these are
numerical searches, not proofs.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from ._seesaw import max_product_overlap, min_low_rank_expectation, min_product_expectation
from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .criteria import partial_transpose, ppt_check, state_hash
from .errors import InfeasibleConstraintsError, NotPPTError, ZeroEpsilonError
from .states import BipartiteVector, DensityOperator, schmidt_decompose

__all__ = [
    "ProductVector",
    "EdgeStatus",
    "EdgeWitness",
    "SchmidtProbe",
    "range_kernel",
    "projector_onto",
    "product_vector_in_subspace",
    "split_projector",
    "is_edge_state",
    "has_maximal_ranks",
    "witness_epsilon",
    "build_edge_witness",
    "schmidt_probe_search",
    "random_product_values",
    "sweep_csv",
]

EPSILON_SAFETY = 0.1


def _sub_rng(seed, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def range_kernel(rho, tol: float = DEFAULT_TOLERANCES.kernel) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal range and kernel bases split at ``tol * ||rho||_op``."""
    mat = rho.mat if isinstance(rho, DensityOperator) else linalg.check_square(rho)
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    cut = tol * max(abs(w[0]), abs(w[-1]))
    big = np.abs(w) > cut
    return v[:, big], v[:, ~big]


def projector_onto(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns."""
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]), dtype=complex)
    return basis @ basis.conj().T


def split_projector(P, tol: float = DEFAULT_TOLERANCES.kernel) -> tuple[np.ndarray, np.ndarray]:
    """Write ``P = P1 + |Psi><Psi|`` with ``Psi`` the leading range vector of ``P``.

    Returns ``(P1, Psi)``; ``Psi`` is a plain vector.
    """
    rng_basis, _ = range_kernel(np.asarray(P), tol)
    if rng_basis.shape[1] == 0:
        raise InfeasibleConstraintsError("P has an empty range")
    return projector_onto(rng_basis[:, 1:]), rng_basis[:, 0]


@dataclass(frozen=True, eq=False)
class ProductVector:
    e: np.ndarray
    f: np.ndarray
    residual: float

    @property
    def amps(self) -> np.ndarray:
        return np.kron(self.e, self.f)


def product_vector_in_subspace(
    basis: np.ndarray,
    dims: tuple[int, int],
    conj_basis: np.ndarray | None = None,
    restarts: int = 20,
    seed: int = 0,
    max_iters: int = 2000,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ProductVector | None:
    """Search for ``|e,f>`` in ``span(basis)`` (and ``|e*,f>`` in ``span(conj_basis)``).

    Minimizes ``||(I - Pi)|e,f>||^2`` (plus ``||(I - Pi')|e*,f>||^2`` when the
    conjugate constraint is given) by alternating top-eigenvector updates.
    Returns ``None`` when no restart gets the residual below
    ``tol.product_residual``.
    """
    basis = np.asarray(basis)
    if basis.shape[1] == 0 or (conj_basis is not None and np.asarray(conj_basis).shape[1] == 0):
        return None
    pi = projector_onto(basis)
    pi2 = None if conj_basis is None else projector_onto(np.asarray(conj_basis))
    best = None
    for r in range(max(1, restarts)):
        res, e, f = max_product_overlap(pi, dims, _sub_rng(seed, r), pi2, max_iters=max_iters)
        if best is None or res < best.residual:
            best = ProductVector(e, f, res)
        if res < tol.product_residual:
            return best
    return None


@dataclass(frozen=True, eq=False)
class EdgeStatus:
    """``status`` is ``"not_edge"`` (with the product vector found) or ``"edge_inconclusive"``."""

    status: str
    product: ProductVector | None = None
    range_dim: int = 0
    pt_range_dim: int = 0

    @property
    def is_edge(self) -> bool:
        return self.status == "edge_inconclusive"


def is_edge_state(
    delta: DensityOperator,
    restarts: int = 20,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> EdgeStatus:
    """Look for ``|e,f>`` in ``R(delta)`` with ``|e*,f>`` in ``R(delta^{T_A})``.

    A hit disproves the edge property; an exhausted search reports the state as
    edge numerically, labelled inconclusive.
    """
    if not ppt_check(delta, tol):
        raise NotPPTError("edge states are PPT; input has a non-positive partial transpose")
    rng_basis, _ = range_kernel(delta, tol.kernel)
    pt_basis, _ = range_kernel(partial_transpose(delta, side="A"), tol.kernel)
    hit = product_vector_in_subspace(rng_basis, delta.dims, pt_basis, restarts, seed, tol=tol)
    status = "not_edge" if hit is not None else "edge_inconclusive"
    return EdgeStatus(status, hit, rng_basis.shape[1], pt_basis.shape[1])


def has_maximal_ranks(delta: DensityOperator, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """``r(delta) + r(delta^{T_A}) == 2n^2 - 2n + 1`` on ``n (x) n`` (a label, not a requirement)."""
    n = delta.dim_a
    if delta.dim_b != n:
        return False
    r1 = range_kernel(delta, tol.kernel)[0].shape[1]
    r2 = range_kernel(partial_transpose(delta, side="A"), tol.kernel)[0].shape[1]
    return r1 + r2 == 2 * n * n - 2 * n + 1


def witness_epsilon(
    P,
    Q,
    dims: tuple[int, int],
    restarts: int = 20,
    samples: int = 2000,
    seed: int = 0,
) -> float:
    """Lowest ``<e,f|P + Q^{T_A}|e,f>`` found over product vectors.

    See-saw descents from seeded starts plus uniform random product samples;
    the result is an upper bound on the true infimum.
    """
    h = np.asarray(P, dtype=complex) + partial_transpose(np.asarray(Q, dtype=complex), dims, side="A")
    best = np.inf
    for r in range(max(1, restarts)):
        val, _, _ = min_product_expectation(h, dims, _sub_rng(seed, r))
        best = min(best, val)
    if samples > 0:
        best = min(best, float(np.min(random_product_values(h, dims, samples, seed + 1))))
    return float(best)


def random_product_values(h, dims: tuple[int, int], samples: int, seed: int = 0) -> np.ndarray:
    """``<e,f|h|e,f>`` on ``samples`` seeded uniform random product states."""
    da, db = dims
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((samples, da)) + 1j * rng.standard_normal((samples, da))
    f = rng.standard_normal((samples, db)) + 1j * rng.standard_normal((samples, db))
    e /= np.linalg.norm(e, axis=1, keepdims=True)
    f /= np.linalg.norm(f, axis=1, keepdims=True)
    t = np.asarray(h).reshape(da, db, da, db)
    return np.einsum("si,sk,ikjl,sj,sl->s", e.conj(), f.conj(), t, e, f, optimize=True).real


@dataclass(frozen=True, eq=False)
class EdgeWitness:
    """``W = P + Q^{T_A} - epsilon I`` for a PPT state ``delta``."""

    P: np.ndarray
    Q: np.ndarray
    epsilon: float
    dims: tuple[int, int]
    product_minimum: float = 0.0
    state_ref: str = ""

    @property
    def W(self) -> np.ndarray:
        return self.W_plus_eps - self.epsilon * np.eye(self.P.shape[0])

    @property
    def W_plus_eps(self) -> np.ndarray:
        return self.P + partial_transpose(self.Q, self.dims, side="A")

    def value_on(self, delta: DensityOperator) -> float:
        return float(np.trace(self.W @ delta.mat).real)


def build_edge_witness(
    delta: DensityOperator,
    restarts: int = 20,
    samples: int = 2000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> EdgeWitness:
    """Witness from the kernel projectors of ``delta`` and ``delta^{T_A}``.

    ``epsilon`` is 90% of the best product-vector minimum of ``P + Q^{T_A}``,
    so ``Tr(W delta) = -epsilon`` because ``P`` and ``Q`` annihilate the
    respective ranges.

    Raises
    ------
    NotPPTError
        If ``delta`` is NPT.
    ZeroEpsilonError
        If the product minimum is numerically zero (no useful witness).
    """
    if not ppt_check(delta, tol):
        raise NotPPTError("witness construction needs a PPT state")
    _, ker = range_kernel(delta, tol.kernel)
    _, ker_pt = range_kernel(partial_transpose(delta, side="A"), tol.kernel)
    P = projector_onto(ker)
    Q = projector_onto(ker_pt)
    found = witness_epsilon(P, Q, delta.dims, restarts, samples, seed)
    if found <= 1e-10:
        raise ZeroEpsilonError(f"product minimum {found!r} is not positive")
    return EdgeWitness(P, Q, (1.0 - EPSILON_SAFETY) * found, delta.dims, found, state_hash(delta))


@dataclass(frozen=True, eq=False)
class SchmidtProbe:
    """``psi^s ~ sum_i l_i |e_i, f_i>`` with its expectation on ``W + eps I``."""

    s: int
    coefficients: np.ndarray
    products: list[tuple[np.ndarray, np.ndarray]] = field(repr=False)
    value: float = 0.0

    def vector(self, dims: tuple[int, int]) -> BipartiteVector:
        amps = sum(l * np.kron(e, f) for l, (e, f) in zip(self.coefficients, self.products))
        return BipartiteVector(amps, *dims).normalized()


def _collect_products(kernel_p1, kernel_q_conj, dims, s, restarts, seed, tol):
    found: list[ProductVector] = []
    stack = np.zeros((dims[0] * dims[1], 0), dtype=complex)
    for r in range(max(1, restarts)):
        pv = product_vector_in_subspace(kernel_p1, dims, kernel_q_conj, restarts=1, seed=seed * 1_000_003 + r, tol=tol)
        if pv is None:
            continue
        cand = np.column_stack([stack, pv.amps])
        if np.linalg.matrix_rank(cand, tol=1e-6) > stack.shape[1]:
            stack = cand
            found.append(pv)
            if len(found) == s:
                break
    return found


def schmidt_probe_search(
    W_plus_eps,
    dims: tuple[int, int],
    s: int,
    Q=None,
    P1=None,
    Psi=None,
    restarts: int = 50,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SchmidtProbe | None:
    """Look for ``psi^s`` of Schmidt rank <= s with ``<psi^s|W + eps I|psi^s> <= 0``.

    With constraints, the product vectors satisfy ``Q|e_i*, f_i> = 0`` and
    ``P1|e_i, f_i> = 0``; the coefficients ``l`` are restricted to the
    hyperplane ``<psi^s|Psi> = 0`` and chosen as the lowest eigenvector of the
    Hermitian form ``q_ij = <e_i,f_i|W + eps I|e_j,f_j>`` there. Without any
    constraint it is a plain minimization over Schmidt rank <= s.

    Returns ``None`` when no probe with value <= 1e-10 is found.

    Raises
    ------
    InfeasibleConstraintsError
        If the constrained product-vector search finds nothing at all.
    """
    h = linalg.check_square(W_plus_eps)
    da, db = dims
    n = da * db
    if Q is None and P1 is None and Psi is None:
        best, best_psi = np.inf, None
        for r in range(max(1, restarts if s < min(dims) else 1)):
            val, psi = min_low_rank_expectation(h, dims, s, _sub_rng(seed, r), max_iters=500)
            if val < best:
                best, best_psi = val, psi
        if best > 1e-10:
            return None
        sd = schmidt_decompose(BipartiteVector(best_psi, da, db), 0.0)
        k = min(s, sd.coeffs.size)
        prods = [(sd.left_vectors[:, i], sd.right_vectors[:, i]) for i in range(k)]
        return SchmidtProbe(s, sd.coeffs[:k].astype(complex), prods, float(best))

    ker_p1 = np.eye(n) if P1 is None else range_kernel(np.asarray(P1), tol.kernel)[1]
    ker_q = None if Q is None else range_kernel(np.asarray(Q), tol.kernel)[1]
    if ker_p1.shape[1] == 0 or (ker_q is not None and ker_q.shape[1] == 0):
        raise InfeasibleConstraintsError("constraint operators have trivial kernels")
    prods = _collect_products(ker_p1, ker_q, dims, s, restarts, seed, tol)
    if not prods:
        raise InfeasibleConstraintsError("no product vector satisfies the constraints")
    cols = np.column_stack([pv.amps for pv in prods])
    q = cols.conj().T @ h @ cols
    if Psi is not None:
        psi_amps = Psi.amps if isinstance(Psi, BipartiteVector) else np.asarray(Psi).reshape(-1)
        c = psi_amps.conj() @ cols
        # coefficient vectors l with sum_i c_i l_i = 0
        _, sv, vh = np.linalg.svd(c.reshape(1, -1))
        null = vh[int(np.sum(sv > 1e-12)):].conj().T
    else:
        null = np.eye(len(prods), dtype=complex)
    if null.shape[1] == 0:
        return None
    qr = null.conj().T @ q @ null
    _, y = np.linalg.eigh(0.5 * (qr + qr.conj().T))
    best = None
    for j in range(y.shape[1]):
        l = null @ y[:, j]
        amps = cols @ l
        nrm = np.linalg.norm(amps)
        if nrm < 1e-12:
            continue
        val = float(np.vdot(amps, h @ amps).real) / nrm**2
        if best is None or val < best[0]:
            best = (val, l / nrm)
    if best is None or best[0] > 1e-10:
        return None
    return SchmidtProbe(s, best[1], [(pv.e, pv.f) for pv in prods], best[0])


def sweep_csv(rows: Sequence[dict]) -> str:
    """CSV with columns ``state,s,found,value``."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["state", "s", "found", "value"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in ["state", "s", "found", "value"]})
    return buf.getvalue()

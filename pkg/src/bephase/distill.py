"""Distillability certificates on ``n``-copy states and their stability radii.

A state is certified distillable by a vector ``Psi`` of Schmidt rank <= 2 on the
``n``-copy space with ``<Psi|(rho^{(x)n})^{T_B}|Psi> = epsilon < 0``. Restricting
to such vectors is the same as projecting both sides onto rank-2 subspaces,
since ``Psi`` lives in ``P_A (x) P_B^T`` of its own Schmidt vectors.

A search that finds nothing returns :class:`NotFound`, which is inconclusive by
construction: nothing here ever claims a state is non-distillable.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from ._seesaw import min_low_rank_expectation
from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .criteria import WitnessValue, p_reduction_value, partial_transpose, state_hash
from .errors import (
    DimensionCapExceededError,
    InvalidEtaError,
    NonNegativeWitnessError,
    WrongRankError,
)
from .linalg import Spectrum
from .states import BipartiteVector, DensityOperator, distillable_approximant, random_density, schmidt_decompose

__all__ = [
    "DistillCertificate",
    "NotFound",
    "BallReport",
    "DensityDemoRow",
    "MAX_MATRIX_SIZE",
    "n_copy_pt",
    "pt_rank2_spectral_decomp",
    "rank2_witness_search",
    "certify_distillable",
    "stability_radius",
    "p_stability_radius",
    "perturb_and_verify",
    "tensor_power_deviation",
    "state_at_operator_distance",
    "density_demo",
    "density_demo_csv",
]

MAX_MATRIX_SIZE = 4096


@dataclass(frozen=True, eq=False)
class DistillCertificate:
    """Witness data: ``<psi|(rho^{(x)n})^{T_B}|psi> = epsilon < 0`` with rank(psi) <= 2."""

    n_copies: int
    psi: BipartiteVector
    epsilon: float
    single_copy_dims: tuple[int, int]
    state_ref: str = ""

    def recompute(self, rho: DensityOperator) -> float:
        x = n_copy_pt(rho, self.n_copies)
        a = self.psi.amps
        return float(np.vdot(a, x @ a).real)

    def revalidate(self, rho: DensityOperator, atol: float = 1e-10, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        if rho.dims != self.single_copy_dims:
            return False
        if schmidt_decompose(self.psi, tol.rank).rank > 2:
            return False
        value = self.recompute(rho)
        return abs(value - self.epsilon) <= atol and value < -tol.certificate

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Rank-2 local projectors ``(P_A, P_B)`` with ``psi = (P_A (x) P_B^T) psi``."""
        sd = schmidt_decompose(self.psi, 0.0)
        u = sd.left_vectors[:, :2]
        v = sd.right_vectors[:, :2]
        p_a = u @ u.conj().T
        p_b = (v @ v.conj().T).T
        return p_a, p_b


@dataclass(frozen=True)
class NotFound:
    """Search exhausted without a certificate; says nothing about non-distillability."""

    best_value: float
    n_max: int = 1
    status: str = "inconclusive"

    def __bool__(self):
        return False


def n_copy_pt(rho: DensityOperator, n: int, cap: int = MAX_MATRIX_SIZE) -> np.ndarray:
    """``(rho^{(x)n})^{T_B}`` on ``d_A^n (x) d_B^n`` with every copy's B transposed."""
    size = rho.dim**n
    if size > cap:
        raise DimensionCapExceededError(f"{n}-copy matrix would be {size}x{size} (cap {cap})")
    return linalg.tensor_power(partial_transpose(rho), rho.dims, n)


def pt_rank2_spectral_decomp(psi: BipartiteVector, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Nonzero eigenpairs of ``(|psi><psi|)^{T_B}`` for a Schmidt-rank-2 ``psi``.

    With ``psi = s1 |u1 v1> + s2 |u2 v2>`` the four eigenpairs are
    ``s1^2 : |u1 v1*>``, ``s2^2 : |u2 v2*>`` and
    ``+-s1 s2 : (|u1 v2*> +- |u2 v1*>)/sqrt(2)``, all inside the 2x2 subspace
    spanned by the Schmidt vectors (B side conjugated).

    Raises
    ------
    WrongRankError
        Unless the Schmidt rank is exactly 2.
    """
    psi = psi.normalized()
    sd = schmidt_decompose(psi, tol.rank)
    if sd.rank != 2:
        raise WrongRankError(f"expected Schmidt rank 2, got {sd.rank}")
    s1, s2 = sd.coeffs[:2]
    u1, u2 = sd.left_vectors[:, 0], sd.left_vectors[:, 1]
    v1, v2 = sd.right_vectors[:, 0].conj(), sd.right_vectors[:, 1].conj()
    vals = np.array([s1 * s1, s2 * s2, s1 * s2, -s1 * s2])
    vecs = np.column_stack(
        [
            np.kron(u1, v1),
            np.kron(u2, v2),
            (np.kron(u1, v2) + np.kron(u2, v1)) / np.sqrt(2),
            (np.kron(u1, v2) - np.kron(u2, v1)) / np.sqrt(2),
        ]
    )
    order = np.argsort(-vals, kind="stable")
    return Spectrum(vals[order], vecs[:, order])


def _sub_rng(seed, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def rank2_witness_search(
    rho: DensityOperator,
    n: int = 1,
    restarts: int = 32,
    max_iters: int = 200,
    seed: int = 0,
    cap: int = MAX_MATRIX_SIZE,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DistillCertificate | NotFound:
    """Minimize ``<Psi|(rho^{(x)n})^{T_B}|Psi>`` over Schmidt-rank-2 ``Psi``.

    Alternating optimization from ``restarts`` seeded random subspaces, each
    restart drawing its own generator from ``(seed, index)``. Returns a
    certificate when the best value is below ``-tol.certificate``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = n_copy_pt(rho, n, cap)
    dims = (rho.dim_a**n, rho.dim_b**n)
    best, best_psi = np.inf, None
    for r in range(max(1, restarts)):
        val, psi = min_low_rank_expectation(x, dims, 2, _sub_rng(seed, r), max_iters=max_iters)
        if val < best:
            best, best_psi = val, psi
    if best < -tol.certificate:
        psi = BipartiteVector(best_psi, *dims).normalized()
        eps = float(np.vdot(psi.amps, x @ psi.amps).real)
        return DistillCertificate(n, psi, eps, rho.dims, state_hash(rho))
    return NotFound(float(best), n)


def certify_distillable(rho: DensityOperator, n_max: int = 1, **search_params) -> DistillCertificate | NotFound:
    """First certificate over ``n = 1 .. n_max`` copies, else :class:`NotFound`."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    best = np.inf
    for n in range(1, n_max + 1):
        res = rank2_witness_search(rho, n, **search_params)
        if res:
            return res
        best = min(best, res.best_value)
    return NotFound(float(best), n_max)


def stability_radius(cert: DistillCertificate) -> float:
    """``|epsilon| / (4 n)``: every state this close (operator or trace norm) stays certified."""
    return abs(cert.epsilon) / (4.0 * cert.n_copies)


def p_stability_radius(wv: WitnessValue) -> float:
    """``|epsilon| / (1 + 1/(p - 1))`` for a negative ``Lambda_p`` witness value."""
    if not wv.value < 0:
        raise NonNegativeWitnessError(f"witness value {wv.value!r} is not negative")
    return abs(wv.value) / (1.0 + 1.0 / (wv.p - 1))


@dataclass(frozen=True)
class BallReport:
    eta: float
    n_copies: int
    epsilon: float
    samples: int
    violations: int
    max_value: float
    max_distance: float
    projected: int
    seed: int
    p: int | None = None


def _random_traceless_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = 0.5 * (g + g.conj().T)
    return h - np.trace(h).real / d * np.eye(d)


def _project_to_states(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    return (v * w) @ v.conj().T


def perturb_and_verify(
    rho: DensityOperator,
    witness: DistillCertificate | WitnessValue,
    eta: float,
    samples: int = 100,
    seed: int = 0,
) -> BallReport:
    """Re-evaluate a fixed witness on random states inside a trace-norm ball.

    Each sample draws a traceless Hermitian ``Delta`` with ``||Delta||_T = eta``.
    If ``rho + Delta`` is not a state, it is replaced by its projection onto the
    state space (negative eigenvalues clipped, trace renormalized), and when
    that moves it further than ``eta`` from ``rho`` it is pulled back along
    the segment to ``rho`` until the trace distance is exactly ``eta``. The
    final distance is always re-measured and reported.
    """
    if not eta >= 0 or samples < 1:
        raise InvalidEtaError(f"need eta >= 0 and samples >= 1, got {eta!r}, {samples}")
    n = witness.n_copies if isinstance(witness, DistillCertificate) else 1
    p = None if isinstance(witness, DistillCertificate) else witness.p
    eps = witness.epsilon if isinstance(witness, DistillCertificate) else witness.value
    d = rho.dim
    violations = projected = 0
    max_value = -np.inf
    max_dist = 0.0
    for s in range(samples):
        rng = _sub_rng(seed, s)
        if eta == 0:
            mat = rho.mat
        else:
            delta = _random_traceless_hermitian(rng, d)
            delta *= eta / linalg.trace_norm(delta)
            mat = rho.mat + delta
            if np.linalg.eigvalsh(mat)[0] < 0:
                projected += 1
                tau = _project_to_states(mat)
                dist = linalg.trace_norm(tau - rho.mat)
                if dist > eta:
                    tau = rho.mat + (eta / dist) * (tau - rho.mat)
                mat = tau
        pert = DensityOperator(mat, *rho.dims)
        dist = linalg.trace_norm(pert.mat - rho.mat)
        if dist > eta * (1 + 1e-9) + 1e-14:
            raise AssertionError(f"perturbed state left the ball: {dist} > {eta}")
        val = witness.recompute(pert)
        max_value = max(max_value, val)
        max_dist = max(max_dist, dist)
        if val >= 0:
            violations += 1
    return BallReport(float(eta), n, float(eps), samples, violations, float(max_value), float(max_dist), projected, int(seed), p)


def state_at_operator_distance(rho: DensityOperator, eta: float, rng: np.random.Generator) -> DensityOperator:
    """A random state ``rho'`` with ``||rho - rho'||_op = eta`` (convex move towards a random state)."""
    for _ in range(100):
        sigma = random_density(rho.dim_a, rho.dim_b, seed=rng)
        gap = linalg.operator_norm(sigma.mat - rho.mat)
        t = eta / gap
        if t <= 1:
            return DensityOperator((1 - t) * rho.mat + t * sigma.mat, *rho.dims)
    raise ValueError(f"eta={eta} too large for a state-space move from rho")


def tensor_power_deviation(rho: DensityOperator, rho_prime: DensityOperator, psi: BipartiteVector, n: int) -> float:
    """``|sum_k lambda_k <phi_k|rho^{(x)n} - rho'^{(x)n}|phi_k>|`` for rank-2 ``psi`` on n copies.

    ``lambda_k, phi_k`` come from :func:`pt_rank2_spectral_decomp`; the quantity
    is bounded by ``4 n ||rho - rho'||_op``.
    """
    eigs = pt_rank2_spectral_decomp(psi)
    diff = linalg.tensor_power(rho.mat, rho.dims, n) - linalg.tensor_power(rho_prime.mat, rho.dims, n)
    v = eigs.eigenvectors
    terms = np.einsum("ik,ij,jk->k", v.conj(), diff, v)
    return float(abs(np.sum(eigs.eigenvalues * terms)))


@dataclass(frozen=True, eq=False)
class DensityDemoRow:
    N: int
    trace_distance: float
    certificate: DistillCertificate
    approximant: DensityOperator = field(repr=False)
    witness: WitnessValue | None = None
    discarded_mass: float = 0.0


def _block_certificate(approx, tol: Tolerances) -> DistillCertificate:
    rho_n = approx.state
    a1, a2 = approx.complement_a[:, 0], approx.complement_a[:, 1]
    b1, b2 = approx.complement_b[:, 0].conj(), approx.complement_b[:, 1].conj()
    # PT of the Phi block is SWAP/2 on this 2x2 subspace; its -1/2 eigenvector
    psi = BipartiteVector((np.kron(a1, b2) - np.kron(a2, b1)) / np.sqrt(2), *rho_n.dims)
    x = partial_transpose(rho_n)
    eps = float(np.vdot(psi.amps, x @ psi.amps).real)
    return DistillCertificate(1, psi, eps, rho_n.dims, state_hash(rho_n))


def density_demo(
    rho: DensityOperator,
    N_range: Iterable[int],
    schmidt_p: int | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[DensityDemoRow]:
    """Approximate ``rho`` by certified-distillable states of growing support.

    For each ``N`` builds the approximant of :func:`distillable_approximant`,
    records ``||rho_N - rho||_T`` and an ``n = 1`` certificate on its entangled
    block. With ``schmidt_p`` set, a second approximant with a rank-``p``
    maximally entangled block is certified through the ``Lambda_p`` witness.
    """
    rows = []
    for N in N_range:
        approx = distillable_approximant(rho, N, 2, tol)
        cert = _block_certificate(approx, tol)
        wv = None
        if schmidt_p is not None:
            approx_p = distillable_approximant(rho, N, schmidt_p, tol)
            wv = p_reduction_value(approx_p.state, approx_p.phi, schmidt_p, tol)
        rows.append(
            DensityDemoRow(
                N=int(N),
                trace_distance=linalg.trace_norm(approx.state.mat - rho.mat),
                certificate=cert,
                approximant=approx.state,
                witness=wv,
                discarded_mass=approx.discarded_mass,
            )
        )
    return rows


def density_demo_csv(rows: Sequence[DensityDemoRow]) -> str:
    """CSV with columns ``N,distance,epsilon`` (plus ``witness`` when present)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    has_w = any(r.witness is not None for r in rows)
    w.writerow(["N", "distance", "epsilon"] + (["witness"] if has_w else []))
    for r in rows:
        line = [r.N, repr(r.trace_distance), repr(r.certificate.epsilon)]
        if has_w:
            line.append(repr(r.witness.value) if r.witness is not None else "")
        w.writerow(line)
    return buf.getvalue()

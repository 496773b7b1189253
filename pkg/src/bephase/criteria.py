"""Partial transposition and positive-map tests.

The ``Lambda_p`` family, ``Lambda_p(X) = Tr(X) I - X / (p - 1)``, is positive
on Schmidt-rank ``p - 1`` inputs but not on rank ``p``; ``p = 2`` is the
reduction map. It always acts on the second (B) factor; the A-side variant is
obtained by swapping the subsystems first (:func:`swap_subsystems`).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import floor

import numpy as np

from . import linalg
from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    DegenerateFilterError,
    DimensionMismatchError,
    FidelityOutOfRangeError,
    PTooSmallError,
)
from .states import BipartiteVector, DensityOperator

__all__ = [
    "partial_transpose",
    "PPTResult",
    "ppt_check",
    "lambda_p_apply",
    "id_lambda_p",
    "WitnessValue",
    "p_reduction_value",
    "reduction_violating_vector",
    "realignment_value",
    "isotropic_schmidt_bound",
    "local_filter",
    "FilterReport",
    "local_filter_invariance_check",
    "swap_subsystems",
    "state_hash",
]


def partial_transpose(rho, dims: tuple[int, int] | None = None, side: str = "B") -> np.ndarray:
    """Partial transpose of a bipartite operator.

    ``rho`` may be a :class:`DensityOperator` (dimensions taken from it) or any
    square array together with ``dims``.
    """
    if isinstance(rho, DensityOperator):
        return linalg.partial_transpose_matrix(rho.mat, rho.dims, side)
    if dims is None:
        raise DimensionMismatchError("dims are required for a raw matrix")
    return linalg.partial_transpose_matrix(rho, dims, side)


@dataclass(frozen=True, eq=False)
class PPTResult:
    is_ppt: bool
    min_eigenvalue: float
    eigenvector: np.ndarray | None = None

    def __bool__(self):
        return self.is_ppt


def ppt_check(rho: DensityOperator, tol: Tolerances = DEFAULT_TOLERANCES) -> PPTResult:
    """PPT iff the smallest eigenvalue of ``rho^{T_B}`` is above ``-tol.psd``.

    An NPT result carries the negative eigenpair.
    """
    w, v = linalg.min_eigh(partial_transpose(rho))
    if w >= -tol.psd:
        return PPTResult(True, w)
    return PPTResult(False, w, v)


def lambda_p_apply(x, p: int) -> np.ndarray:
    """``Tr(x) I - x / (p - 1)``."""
    if p < 2:
        raise PTooSmallError(f"p must be >= 2, got {p}")
    a = linalg.check_square(x)
    return np.trace(a) * np.eye(a.shape[0]) - a / (p - 1)


def id_lambda_p(rho, p: int, dims: tuple[int, int] | None = None) -> np.ndarray:
    """``[I (x) Lambda_p](rho) = rho_A (x) I_B - rho / (p - 1)``."""
    if p < 2:
        raise PTooSmallError(f"p must be >= 2, got {p}")
    if isinstance(rho, DensityOperator):
        mat, dims = rho.mat, rho.dims
    else:
        mat = linalg.check_square(rho)
    rho_a = linalg.partial_trace(mat, dims, "A")
    return np.kron(rho_a, np.eye(dims[1])) - mat / (p - 1)


def state_hash(rho) -> str:
    """Short SHA-256 digest of a state's dimensions and matrix (rounded to 1e-12)."""
    mat = rho.mat if isinstance(rho, DensityOperator) else np.asarray(rho)
    dims = rho.dims if isinstance(rho, DensityOperator) else mat.shape
    r = np.round(np.asarray(mat, dtype=complex), 12) + 0.0
    h = hashlib.sha256()
    h.update(repr(tuple(int(d) for d in dims)).encode())
    h.update(np.ascontiguousarray(r.real).tobytes())
    h.update(np.ascontiguousarray(r.imag).tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class WitnessValue:
    """``<psi|[I (x) Lambda_p](rho)|psi>`` together with the inputs needed to recompute it."""

    value: float
    psi: BipartiteVector
    p: int
    state_ref: str = ""

    def recompute(self, rho: DensityOperator) -> float:
        return _reduction_value(rho, self.psi, self.p)

    def revalidate(self, rho: DensityOperator, atol: float = 1e-12) -> bool:
        return abs(self.recompute(rho) - self.value) <= atol

    @property
    def is_violation(self) -> bool:
        return self.value < 0


def _reduction_value(rho: DensityOperator, psi: BipartiteVector, p: int) -> float:
    m = psi.matrix()
    rho_a = rho.reduced("A")
    # <psi|rho_A (x) I|psi> = Tr(rho_A Tr_B|psi><psi|)
    local = np.einsum("ij,ik,kj->", m.conj(), rho_a, m).real
    return float(local - rho.expectation(psi) / (p - 1))


def p_reduction_value(
    rho: DensityOperator,
    psi: BipartiteVector,
    p: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> WitnessValue:
    """Witness value ``<psi|(rho_A (x) I - rho / (p - 1))|psi>``.

    A negative value means ``[I (x) Lambda_p](rho)`` is not positive, which is
    what the single-copy protocol in :mod:`bephase.protocol` consumes.
    """
    if p < 2:
        raise PTooSmallError(f"p must be >= 2, got {p}")
    if psi.dims != rho.dims:
        raise DimensionMismatchError(f"vector dims {psi.dims} vs state dims {rho.dims}")
    psi.require_normalized(tol)
    return WitnessValue(_reduction_value(rho, psi, p), psi, int(p), state_hash(rho))


def reduction_violating_vector(rho: DensityOperator, p: int) -> BipartiteVector:
    """Minimal eigenvector of ``[I (x) Lambda_p](rho)`` (the most violating ``psi``)."""
    _, v = linalg.min_eigh(id_lambda_p(rho, p))
    return BipartiteVector(v, *rho.dims)


def realignment_value(rho: DensityOperator) -> float:
    """Trace norm of the realigned matrix ``R[(i,j),(k,l)] = rho[(i,k),(j,l)]``.

    Values above 1 certify entanglement.
    """
    da, db = rho.dims
    r = rho.mat.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)
    return float(np.sum(np.linalg.svd(r, compute_uv=False)))


def isotropic_schmidt_bound(m: int, fidelity: float, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Largest ``p >= 1`` with ``F > (p - 1) / m + slack``.

    For isotropic states this is a lower bound on the Schmidt number.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 0.0 <= fidelity <= 1.0:
        raise FidelityOutOfRangeError(f"fidelity {fidelity!r} outside [0, 1]")
    p = max(1, floor(m * (fidelity - tol.schmidt_slack)) + 1)
    # floor arithmetic can overshoot by one at exact multiples of 1/m
    while p > 1 and not fidelity > (p - 1) / m + tol.schmidt_slack:
        p -= 1
    return int(p)


def local_filter(rho: DensityOperator, a, side: str = "A", threshold: float = 1e-12) -> DensityOperator:
    """``(A (x) I) rho (A^dagger (x) I) / Tr`` (or the B-side analogue)."""
    a = linalg.check_square(a)
    da, db = rho.dims
    if side.upper() == "A":
        if a.shape[0] != da:
            raise DimensionMismatchError("filter size does not match subsystem A")
        op = np.kron(a, np.eye(db))
    else:
        if a.shape[0] != db:
            raise DimensionMismatchError("filter size does not match subsystem B")
        op = np.kron(np.eye(da), a)
    out = op @ rho.mat @ op.conj().T
    tr = np.trace(out).real
    if tr <= threshold:
        raise DegenerateFilterError(f"filtered trace {tr!r} below {threshold}")
    return DensityOperator(out / tr, da, db)


@dataclass(frozen=True, eq=False)
class FilterReport:
    ppt_before: PPTResult
    ppt_after: PPTResult
    filtered: DensityOperator

    @property
    def ppt_preserved(self) -> bool:
        """False only when a PPT input became NPT."""
        return not (self.ppt_before.is_ppt and not self.ppt_after.is_ppt)


def local_filter_invariance_check(rho: DensityOperator, a, tol: Tolerances = DEFAULT_TOLERANCES) -> FilterReport:
    """PPT status before and after the one-sided local filter ``A (x) I``."""
    filtered = local_filter(rho, a)
    return FilterReport(ppt_check(rho, tol), ppt_check(filtered, tol), filtered)


def swap_subsystems(rho: DensityOperator) -> DensityOperator:
    da, db = rho.dims
    t = rho.mat.reshape(da, db, da, db).transpose(1, 0, 3, 2)
    return DensityOperator(t.reshape(da * db, da * db), db, da)

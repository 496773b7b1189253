"""Single-copy procedure turning a ``Lambda_p`` violation into an isotropic state
with Schmidt number at least ``p``.

Pipeline: truncate to an ``m (x) m`` support, apply the local filter built
from the violating vector, twirl with ``U (x) U*`` and read off the fidelity.

Filter choice. Write the violating vector as ``|psi> = (M (x) I)|Phi_+>``,
i.e. ``M = sqrt(m) * reshape(psi, (m, m))``. Then for
``sigma = (M^dagger (x) I) rho (M (x) I) / norm``::

    norm             = Tr(M M^dagger rho_A)  = m <psi|rho_A (x) I|psi>
    <Phi_+|sigma|Phi_+> = <psi|rho|psi> / norm

so ``F > (p - 1) / m`` holds exactly when
``<psi|rho_A (x) I|psi> - <psi|rho|psi> / (p - 1) < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import linalg
from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .criteria import WitnessValue, isotropic_schmidt_bound, p_reduction_value
from .errors import (
    FilterAnnihilatesStateError,
    NoViolationError,
    NonSquareLocalDimsError,
    NotReachedError,
)
from .states import BipartiteVector, DensityOperator, isotropic, maximally_entangled

__all__ = [
    "Truncation",
    "SchmidtCertificate",
    "truncate",
    "truncation_dim_search",
    "filter_from_violation",
    "apply_filter",
    "twirl_exact",
    "haar_unitary",
    "twirl_sample_oracle",
    "run_protocol",
]


@dataclass(frozen=True, eq=False)
class Truncation:
    m: int
    state: DensityOperator
    psi: BipartiteVector
    witness: WitnessValue


@dataclass(frozen=True, eq=False)
class SchmidtCertificate:
    """Isotropic output ``(m, F)`` with ``F > (p - 1)/m``, hence Schmidt number >= ``p``."""

    m: int
    F: float
    p: int
    filter: np.ndarray = field(repr=False)
    witness: WitnessValue = field(repr=False)
    p_lower: int = 0
    isotropic_witness: float = 0.0

    def revalidate(self, rho_m: DensityOperator, atol: float = 1e-10, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        """Recompute ``F`` from the truncated state and check the strict bound."""
        sigma, _ = apply_filter(rho_m, self.filter)
        f = fidelity_with_phi_plus(sigma)
        return abs(f - self.F) <= atol and f > (self.p - 1) / self.m + tol.schmidt_slack


def fidelity_with_phi_plus(rho: DensityOperator) -> float:
    if rho.dim_a != rho.dim_b:
        raise NonSquareLocalDimsError(f"need square local dims, got {rho.dims}")
    return rho.expectation(maximally_entangled(rho.dim_a))


def _local_bases(rho: DensityOperator, basis: str):
    if basis == "computational":
        return np.eye(rho.dim_a), np.eye(rho.dim_b)
    if basis == "spectral":
        out = []
        for side in ("A", "B"):
            w, v = np.linalg.eigh(rho.reduced(side))
            out.append(v[:, np.argsort(-w, kind="stable")])
        return tuple(out)
    raise ValueError(f"basis must be 'computational' or 'spectral', got {basis!r}")


def truncate(rho: DensityOperator, psi: BipartiteVector, m: int, basis: str = "computational"):
    """Project ``rho`` and ``psi`` onto the leading ``m (x) m`` local support.

    Returns ``(rho_m, psi_m)`` both normalized, or ``None`` when either
    projection vanishes.
    """
    ua, ub = _local_bases(rho, basis)
    pa, pb = ua[:, :m], ub[:, :m]
    op = np.kron(pa, pb)
    mat = op.conj().T @ rho.mat @ op
    tr = np.trace(mat).real
    amps = op.conj().T @ psi.amps
    if tr <= 1e-14 or np.linalg.norm(amps) <= 1e-14:
        return None
    return DensityOperator(mat / tr, m, m), BipartiteVector(amps, m, m).normalized()


def truncation_dim_search(
    rho: DensityOperator,
    psi: BipartiteVector,
    p: int,
    epsilon_full: float | None = None,
    basis: str = "computational",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Truncation:
    """Smallest ``m`` whose truncated pair keeps the witness at or below ``epsilon_full / 2``.

    Raises
    ------
    NoViolationError
        If the full witness value is not negative.
    NotReachedError
        If no ``m`` up to the ambient local dimension qualifies.
    """
    if epsilon_full is None:
        epsilon_full = p_reduction_value(rho, psi, p, tol).value
    if not epsilon_full < 0:
        raise NoViolationError(f"witness value {epsilon_full!r} is not negative")
    for m in range(1, min(rho.dims) + 1):
        got = truncate(rho, psi, m, basis)
        if got is None:
            continue
        rho_m, psi_m = got
        wv = p_reduction_value(rho_m, psi_m, p, tol)
        if wv.value <= epsilon_full / 2:
            return Truncation(m, rho_m, psi_m, wv)
    raise NotReachedError(f"no truncation up to m={min(rho.dims)} reaches epsilon/2")


def filter_from_violation(psi: BipartiteVector) -> np.ndarray:
    """``M[i, j] = sqrt(m) * psi[i*m + j]`` so that ``|psi> = (M (x) I)|Phi_+>``."""
    if psi.dim_a != psi.dim_b:
        raise NonSquareLocalDimsError(f"need square local dims, got {psi.dims}")
    return np.sqrt(psi.dim_a) * psi.matrix()


def apply_filter(rho: DensityOperator, M, threshold: float = 1e-12) -> tuple[DensityOperator, float]:
    """``(M^dagger (x) I) rho (M (x) I) / norm`` and the success weight ``norm``."""
    M = linalg.check_square(M)
    op = np.kron(M.conj().T, np.eye(rho.dim_b))
    out = op @ rho.mat @ op.conj().T
    norm = float(np.trace(out).real)
    if norm <= threshold:
        raise FilterAnnihilatesStateError(f"filter success weight {norm!r} below {threshold}")
    return DensityOperator(out / norm, *rho.dims), norm


def twirl_exact(rho: DensityOperator) -> DensityOperator:
    """``U (x) U*`` twirl: the isotropic state with the same ``Phi_+`` fidelity."""
    f = fidelity_with_phi_plus(rho)
    return isotropic(rho.dim_a, min(max(f, 0.0), 1.0))


def haar_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian matrix with the R-diagonal phases removed."""
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def twirl_sample_oracle(
    rho: DensityOperator,
    samples: int,
    seed=0,
    unitaries: Iterable[np.ndarray] | None = None,
) -> DensityOperator:
    """Monte-Carlo average of ``(U (x) U*) rho (U (x) U*)^dagger``.

    ``unitaries`` overrides the Haar sampler (used to pin the average in tests).
    """
    m = rho.dim_a
    if rho.dim_b != m:
        raise NonSquareLocalDimsError(f"need square local dims, got {rho.dims}")
    if unitaries is None:
        rng = np.random.default_rng(seed)
        unitaries = (haar_unitary(m, rng) for _ in range(samples))
    us = np.stack(list(unitaries))
    # (U (x) U*) rho (U (x) U*)^dagger = sum over the 4-index tensor form
    t = rho.mat.reshape(m, m, m, m)
    acc = np.einsum("sai,sbj,ijkl,sck,sdl->abcd", us, us.conj(), t, us.conj(), us, optimize=True)
    mat = acc.reshape(m * m, m * m) / us.shape[0]
    return DensityOperator(mat, m, m)


def run_protocol(
    rho: DensityOperator,
    psi: BipartiteVector,
    p: int,
    basis: str = "computational",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SchmidtCertificate:
    """Truncate, filter and twirl; certify Schmidt number >= ``p`` for the output.

    Raises
    ------
    NoViolationError
        If ``psi`` does not violate ``[I (x) Lambda_p](rho) >= 0``.
    FilterAnnihilatesStateError
        If the filter has zero success probability.
    """
    tr = truncation_dim_search(rho, psi, p, basis=basis, tol=tol)
    M = filter_from_violation(tr.psi)
    sigma, _ = apply_filter(tr.state, M)
    iso = twirl_exact(sigma)
    f = fidelity_with_phi_plus(iso)
    if not f > (p - 1) / tr.m + tol.schmidt_slack:
        raise NoViolationError(
            f"filtered fidelity {f!r} does not exceed {(p - 1) / tr.m!r}; witness {tr.witness.value!r}"
        )
    iso_value = p_reduction_value(iso, maximally_entangled(tr.m), p, tol).value
    if not iso_value < 0:
        raise NoViolationError(f"isotropic cross-check failed: {iso_value!r}")
    return SchmidtCertificate(
        m=tr.m,
        F=f,
        p=int(p),
        filter=M,
        witness=tr.witness,
        p_lower=isotropic_schmidt_bound(tr.m, f, tol),
        isotropic_witness=iso_value,
    )

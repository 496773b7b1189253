"""Numerical tolerances shared by every module.

A single frozen record so that the criteria, certificates and solvers all
agree on what "zero", "positive" and "Hermitian" mean. Callers that need
different thresholds build their own record with :func:`dataclasses.replace`
or :meth:`Tolerances.from_mapping` and pass it explicitly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping


@dataclass(frozen=True)
class Tolerances:
    # max |M - M^dagger| relative to (1 + max|M|)
    hermitian: float = 1e-12
    # eigenvalue >= -psd * (1 + ||M||_op) counts as nonnegative
    psd: float = 1e-10
    # |Tr rho - 1|
    trace: float = 1e-10
    # | ||v|| - 1 |
    norm: float = 1e-10
    # singular values above this count towards a Schmidt rank
    rank: float = 1e-10
    # a distillability witness must be below -certificate to count
    certificate: float = 1e-9
    # slack on the strict isotropic bound F > (p-1)/m
    schmidt_slack: float = 1e-9
    # product-vector solver success threshold on the residual
    product_residual: float = 1e-9
    # relative eigenvalue threshold separating range from kernel
    kernel: float = 1e-9

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any] | None) -> "Tolerances":
        if not values:
            return cls()
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})


DEFAULT_TOLERANCES = Tolerances()

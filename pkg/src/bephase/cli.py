"""Command-line entry point: ``bephase <command> ...`` or ``python -m bephase``.

Every command prints a JSON report whose header holds the full run
configuration. Exit codes: 0 success (certificate found), 2 inconclusive
(search exhausted, nothing certified), 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, criteria, distill, formats, protocol, states, witness
from ._tolerances import Tolerances
from .errors import BephaseError, InfeasibleConstraintsError, NoViolationError, ZeroEpsilonError
from .fixtures import ppt_entangled_family, ppt_entangled_fixture

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
SEED_ENV = "BEPHASE_SEED"


@dataclass
class RunConfig:
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    max_matrix_size: int = distill.MAX_MATRIX_SIZE
    out: str | None = None
    params: dict = field(default_factory=dict)

    def header(self, command: str) -> dict:
        return {
            "artifact": "bephase",
            "version": __version__,
            "command": command,
            "config": {
                "seed": self.seed,
                "tolerances": self.tolerances.as_dict(),
                "max_matrix_size": self.max_matrix_size,
                "out": self.out,
                "params": self.params,
            },
        }


def _load_config(args) -> RunConfig:
    data = formats.load_json(args.config) if args.config else {}
    seed = int(data.get("seed", 0))
    if os.environ.get(SEED_ENV):
        seed = int(os.environ[SEED_ENV])
    if args.seed is not None:
        seed = args.seed
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in {"func", "config", "seed", "out", "command"}
    }
    return RunConfig(
        seed=seed,
        tolerances=Tolerances.from_mapping(data.get("tolerances")),
        max_matrix_size=int(data.get("max_matrix_size", distill.MAX_MATRIX_SIZE)),
        out=args.out,
        params=params,
    )


def _emit(report: dict, cfg: RunConfig) -> None:
    text = formats.dump_json(report, cfg.out)
    print(text)


def _write_csv(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)


def _state_summary(rho: states.DensityOperator, tol: Tolerances) -> dict:
    ppt = criteria.ppt_check(rho, tol)
    return {
        "dims": list(rho.dims),
        "trace": float(np.trace(rho.mat).real),
        "ppt": ppt.is_ppt,
        "pt_min_eigenvalue": ppt.min_eigenvalue,
        "realignment": criteria.realignment_value(rho),
        "state_ref": criteria.state_hash(rho),
    }


def cmd_make_state(args, cfg: RunConfig) -> int:
    kind = args.kind
    vector = None
    extra = {}
    if kind == "cv-bes":
        rho = states.cv_bes(states.CvBesParams(args.a, args.c, args.n))
    elif kind == "spurious":
        sigma = ppt_entangled_fixture() if args.t is None else ppt_entangled_family(args.t)
        weights = args.weights or [2.0 ** -(k + 1) for k in range(args.blocks)]
        rho = states.spurious_block_state(sigma, args.blocks, weights)
    elif kind == "isotropic":
        rho = states.isotropic(args.m, args.f)
        extra = {"F": args.f}
    elif kind == "max-ent":
        vector = states.maximally_entangled(args.m)
        rho = vector.projector()
    elif kind == "random":
        rho = states.random_density(args.dim_a, args.dim_b, args.rank, seed=cfg.seed)
    else:  # argparse restricts choices
        raise BephaseError(f"unknown kind {kind!r}")
    payload = formats.vector_to_json(vector) if vector is not None else formats.state_to_json(rho, **extra)
    report = cfg.header("make-state")
    report["summary"] = _state_summary(rho, cfg.tolerances)
    if args.state_out:
        formats.dump_json(payload, args.state_out)
        report["state_file"] = args.state_out
    else:
        report["state"] = payload
    _emit(report, cfg)
    return EXIT_OK


def _candidates(rho: states.DensityOperator, p: int, tol: Tolerances) -> dict:
    out = {}
    if rho.dim_a == rho.dim_b:
        out["psi_plus"] = states.maximally_entangled(rho.dim_a)
    ppt = criteria.ppt_check(rho, tol)
    if not ppt.is_ppt:
        out["pt_negative_eigenvector"] = states.BipartiteVector(ppt.eigenvector, *rho.dims)
    out["most_violating"] = criteria.reduction_violating_vector(rho, p)
    return out


def cmd_analyze(args, cfg: RunConfig) -> int:
    tol = cfg.tolerances
    rho = formats.load_state(args.state)
    report = cfg.header("analyze")
    report["summary"] = _state_summary(rho, tol)
    values = []
    for p in args.p:
        for name, psi in _candidates(rho, p, tol).items():
            wv = criteria.p_reduction_value(rho, psi, p, tol)
            values.append({"p": p, "candidate": name, "value": wv.value})
    report["lambda_p"] = values
    if rho.dim_a == rho.dim_b and rho.dim_a >= 2:
        iso = protocol.twirl_exact(rho)
        if np.max(np.abs(iso.mat - rho.mat)) <= 1e-10:
            f = protocol.fidelity_with_phi_plus(rho)
            report["isotropic"] = {"F": f, "schmidt_lower_bound": criteria.isotropic_schmidt_bound(rho.dim_a, f, tol)}
    _emit(report, cfg)
    return EXIT_OK


def _search_params(args, cfg: RunConfig) -> dict:
    return {
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "seed": cfg.seed,
        "cap": cfg.max_matrix_size,
        "tol": cfg.tolerances,
    }


def cmd_distill(args, cfg: RunConfig) -> int:
    rho = formats.load_state(args.state)
    res = distill.certify_distillable(rho, args.n_max, **_search_params(args, cfg))
    report = cfg.header("distill")
    if res:
        report["result"] = "certificate"
        report["certificate"] = formats.certificate_to_json(res)
        report["stability_radius"] = distill.stability_radius(res)
        code = EXIT_OK
    else:
        report["result"] = res.status
        report["best_value"] = res.best_value
        report["n_max"] = res.n_max
        code = EXIT_INCONCLUSIVE
    _emit(report, cfg)
    return code


def cmd_ball(args, cfg: RunConfig) -> int:
    rho = formats.load_state(args.state)
    report = cfg.header("ball")
    if args.p is not None:
        psi = criteria.reduction_violating_vector(rho, args.p)
        wv = criteria.p_reduction_value(rho, psi, args.p, cfg.tolerances)
        if not wv.value < 0:
            report["result"] = "inconclusive"
            report["witness"] = formats.witness_to_json(wv)
            _emit(report, cfg)
            return EXIT_INCONCLUSIVE
        w, radius = wv, distill.p_stability_radius(wv)
        report["witness"] = formats.witness_to_json(wv)
    else:
        if args.certificate:
            data = formats.load_json(args.certificate)
            # accept either a bare certificate or a full distill report
            cert = formats.certificate_from_json(data.get("certificate", data), rho)
        else:
            cert = distill.certify_distillable(rho, args.n_max, **_search_params(args, cfg))
        if not cert:
            report["result"] = cert.status
            report["best_value"] = cert.best_value
            _emit(report, cfg)
            return EXIT_INCONCLUSIVE
        w, radius = cert, distill.stability_radius(cert)
        report["certificate"] = formats.certificate_to_json(cert)
    ball = distill.perturb_and_verify(rho, w, args.eta, args.samples, cfg.seed)
    report["result"] = "ball"
    report["radius"] = radius
    report["eta_within_radius"] = bool(args.eta < radius)
    report["ball"] = formats.ball_report_to_json(ball)
    _emit(report, cfg)
    return EXIT_OK


def cmd_density(args, cfg: RunConfig) -> int:
    rho = formats.load_state(args.state)
    rows = distill.density_demo(rho, range(args.n_min, args.n_max + 1), args.schmidt_p, cfg.tolerances)
    report = cfg.header("density")
    report["rows"] = [
        {
            "N": r.N,
            "trace_distance": r.trace_distance,
            "epsilon": r.certificate.epsilon,
            "revalidated": r.certificate.revalidate(r.approximant),
            "discarded_mass": r.discarded_mass,
            "witness": None if r.witness is None else r.witness.value,
        }
        for r in rows
    ]
    _write_csv(distill.density_demo_csv(rows), args.csv)
    _emit(report, cfg)
    return EXIT_OK


def cmd_protocol(args, cfg: RunConfig) -> int:
    rho = formats.load_state(args.state)
    psi = formats.vector_from_json(formats.load_json(args.psi)) if args.psi else criteria.reduction_violating_vector(rho, args.p)
    report = cfg.header("protocol")
    try:
        cert = protocol.run_protocol(rho, psi.normalized(), args.p, basis=args.basis, tol=cfg.tolerances)
    except NoViolationError as exc:
        report["result"] = "inconclusive"
        report["reason"] = str(exc)
        _emit(report, cfg)
        return EXIT_INCONCLUSIVE
    report["result"] = "certificate"
    report["certificate"] = formats.schmidt_certificate_to_json(cert)
    _emit(report, cfg)
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    rho = formats.load_state(args.state)
    report = cfg.header("witness")
    edge = witness.is_edge_state(rho, restarts=args.restarts, seed=cfg.seed, tol=cfg.tolerances)
    report["edge_status"] = edge.status
    report["maximal_ranks"] = witness.has_maximal_ranks(rho, cfg.tolerances)
    if edge.product is not None:
        report["product_residual"] = edge.product.residual
    try:
        w = witness.build_edge_witness(rho, restarts=args.restarts, samples=args.samples, seed=cfg.seed, tol=cfg.tolerances)
    except ZeroEpsilonError as exc:
        report["result"] = "inconclusive"
        report["reason"] = str(exc)
        _emit(report, cfg)
        return EXIT_INCONCLUSIVE
    report["result"] = "witness"
    report["witness"] = formats.edge_witness_to_json(w)
    report["value_on_state"] = w.value_on(rho)
    _emit(report, cfg)
    return EXIT_OK


def _random_local_filter(rng: np.random.Generator, d: int) -> np.ndarray:
    return np.eye(d) + 0.5 * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def cmd_sweep(args, cfg: RunConfig) -> int:
    """Locally filtered members of the 3x3 fixture family; tabulate Schmidt probes."""
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for k in range(args.states):
        sigma = ppt_entangled_family(float(rng.uniform(0.05, 0.95)))
        op = np.kron(_random_local_filter(rng, 3), _random_local_filter(rng, 3))
        delta = states.DensityOperator.from_unnormalized(op @ sigma.mat @ op.conj().T, 3, 3)
        ref = criteria.state_hash(delta)
        try:
            w = witness.build_edge_witness(delta, seed=cfg.seed + k, tol=cfg.tolerances)
        except ZeroEpsilonError:
            rows.append({"state": ref, "s": "", "found": "no_witness", "value": ""})
            continue
        constraints = {}
        if args.constrained:
            p1, psi = witness.split_projector(w.P)
            constraints = {"Q": w.Q, "P1": p1, "Psi": psi}
        for s in args.s:
            try:
                probe = witness.schmidt_probe_search(
                    w.W_plus_eps, w.dims, s, seed=cfg.seed + k, tol=cfg.tolerances, **constraints
                )
            except InfeasibleConstraintsError:
                rows.append({"state": ref, "s": s, "found": "infeasible", "value": ""})
                continue
            rows.append(
                {
                    "state": ref,
                    "s": s,
                    "found": probe is not None,
                    "value": "" if probe is None else probe.value,
                }
            )
    _write_csv(witness.sweep_csv(rows), args.csv)
    report = cfg.header("sweep")
    report["rows"] = rows
    _emit(report, cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bephase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bephase {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV}, then config, then 0)")
    common.add_argument("--config", default=None, help="JSON config with seed, tolerances, max_matrix_size")
    common.add_argument("--out", default=None, help="also write the JSON report here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-state", parents=[common], help="build a state and report its properties")
    p.add_argument("kind", choices=["cv-bes", "spurious", "isotropic", "max-ent", "random"])
    p.add_argument("--a", type=float, default=0.4)
    p.add_argument("--c", type=float, default=0.6)
    p.add_argument("--n", type=int, default=6, help="truncation for cv-bes")
    p.add_argument("--m", type=int, default=3, help="local dimension for isotropic / max-ent")
    p.add_argument("--f", type=float, default=0.7, help="fidelity for isotropic")
    p.add_argument("--blocks", type=int, default=2)
    p.add_argument("--weights", type=float, nargs="*", default=None)
    p.add_argument("--t", type=float, default=None, help="3x3 family parameter for spurious")
    p.add_argument("--dim-a", type=int, default=2)
    p.add_argument("--dim-b", type=int, default=2)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--state-out", default=None, help="write the state JSON here instead of embedding it")
    p.set_defaults(func=cmd_make_state)

    p = sub.add_parser("analyze", parents=[common], help="PPT status and Lambda_p witness values")
    p.add_argument("state")
    p.add_argument("--p", type=int, nargs="+", default=[2, 3])
    p.set_defaults(func=cmd_analyze)

    def search_flags(q):
        q.add_argument("--n-max", type=int, default=1)
        q.add_argument("--restarts", type=int, default=32)
        q.add_argument("--max-iters", type=int, default=200)

    p = sub.add_parser("distill", parents=[common], help="search for a rank-2 distillability certificate")
    p.add_argument("state")
    search_flags(p)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("ball", parents=[common], help="perturbation-ball check of a certificate")
    p.add_argument("state")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--p", type=int, default=None, help="use the Lambda_p witness instead of a distillability certificate")
    p.add_argument("--certificate", default=None, help="certificate JSON (as printed by distill) to reuse")
    search_flags(p)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("density", parents=[common], help="approximants with distillable blocks")
    p.add_argument("state")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--schmidt-p", type=int, default=None)
    p.add_argument("--csv", default=None, help="CSV output (N, distance, epsilon)")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("protocol", parents=[common], help="single-copy Schmidt-number protocol")
    p.add_argument("state")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--psi", default=None, help="vector JSON; default is the most violating vector")
    p.add_argument("--basis", choices=["computational", "spectral"], default="computational")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("witness", parents=[common], help="edge-state test and kernel witness")
    p.add_argument("state")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sweep", parents=[common], help="tabulate Schmidt-probe searches on edge-like states")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--s", type=int, nargs="+", default=[2, 3])
    p.add_argument("--constrained", action="store_true", help="build probes from kernel-constrained product vectors")
    p.add_argument("--csv", default=None, help="CSV output (state, s, found, value)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        return args.func(args, cfg)
    except (BephaseError, ValueError, KeyError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

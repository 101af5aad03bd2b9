"""Command line front end.

Four subcommands: ``count`` prints the minimal additional-noise count for
a system file, ``synthesize`` writes a full verified realization report,
``check`` re-verifies a stored (B1, D1) pair against a system, and
``paper-example`` runs the built-in worked example end to end. Exit codes
are stable for scripting: 0 all checks pass, 1 domain or validation
failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import QRealizeError, SynthesisError
from .io import (
    parse_realization,
    parse_system_document,
    report_document,
    serialize_report,
)
from .linalg import DEFAULT_POLICY, TolerancePolicy
from .realizability import (
    LtiSystem,
    check_physical_realizability,
    compute_s_tilde,
    minimal_noise_count,
    multiplicity_noise_count,
)
from .synthesis import minimality_certificate, synthesize_realization

# Reference values for the built-in example's skew invariant, quoted to
# the 4 decimal places the source prints.
_EXAMPLE_S_TILDE = np.array(
    [
        [0.0, 2.3788, 0.0, 0.6472],
        [-2.3788, 0.0, -0.6472, 0.0],
        [0.0, 0.6472, 0.0, 0.5],
        [-0.6472, 0.0, -0.5, 0.0],
    ]
)

_CERTIFICATE_TRIALS = 200


def example_system() -> LtiSystem:
    """The built-in two-mode-pair example system (n=4, n_u=n_y=2)."""
    i2 = np.eye(2)
    a = np.block([[-1.3894 * i2, -0.4472 * i2], [-0.2 * i2, -0.25 * i2]])
    b = np.vstack([-0.4472 * i2, np.zeros((2, 2))])
    c = np.hstack([-0.4472 * i2, np.zeros((2, 2))])
    return LtiSystem.from_matrices(a, b, c)


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _policy_from_flags(args) -> TolerancePolicy:
    rank_tol = args.rank_tol if args.rank_tol is not None else DEFAULT_POLICY.rank_rel_tol
    residual_tol = (
        args.residual_tol if args.residual_tol is not None else DEFAULT_POLICY.residual_tol
    )
    try:
        return TolerancePolicy(rank_rel_tol=rank_tol, residual_tol=residual_tol)
    except ValueError as exc:
        raise QRealizeError(f"invalid tolerance flag: {exc}") from exc


def _print_residuals(report) -> None:
    for e in report:
        verdict = "PASS" if e.passed else "FAIL"
        print(f"{e.name:<16} relative={e.relative:.3e} tol={e.tol:.1e} {verdict}")


def cmd_count(args) -> int:
    doc = parse_system_document(_read_text(args.path))
    policy = doc.resolve_policy(args.rank_tol, args.residual_tol)
    r, n_v = minimal_noise_count(doc.system, policy)
    bound = multiplicity_noise_count(doc.system, policy)
    print(f"r={r} n_v={n_v}")
    print(f"multiplicity_bound={bound}")
    return 0


def cmd_synthesize(args) -> int:
    doc = parse_system_document(_read_text(args.path))
    policy = doc.resolve_policy(args.rank_tol, args.residual_tol)
    seed = doc.resolve_seed(args.seed)
    system = doc.system

    skew = compute_s_tilde(system, policy)
    r, n_v = minimal_noise_count(system, policy)
    bound = multiplicity_noise_count(system, policy)
    try:
        realization, report = synthesize_realization(system, policy)
    except SynthesisError as exc:
        if exc.realization is None or exc.report is None:
            raise
        realization, report = exc.realization, exc.report
    certificate = minimality_certificate(
        system, trials=_CERTIFICATE_TRIALS, seed=seed, policy=policy
    )

    out = report_document(
        system,
        skew,
        r,
        n_v,
        bound,
        realization,
        report,
        certificate,
        policy,
        seed,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_report(out))
    status = "pass" if report.all_passed else "FAIL"
    print(f"wrote {args.out} (n_v={n_v}, residuals {status})")
    return 0 if report.all_passed else 1


def cmd_check(args) -> int:
    doc = parse_system_document(_read_text(args.system_path))
    policy = doc.resolve_policy(args.rank_tol, args.residual_tol)
    b1, d1 = parse_realization(_read_text(args.realization_path))
    report = check_physical_realizability(doc.system, b1, d1, policy)
    _print_residuals(report)
    return 0 if report.all_passed else 1


def cmd_paper_example(args) -> int:
    policy = _policy_from_flags(args)
    seed = args.seed if args.seed is not None else 0
    system = example_system()

    skew = compute_s_tilde(system, policy)
    print("S_tilde =")
    for row in skew.S_tilde:
        print("  " + "  ".join(f"{x:8.4f}" for x in row))
    deviation = float(np.abs(skew.S_tilde - _EXAMPLE_S_TILDE).max())
    match_ok = deviation <= 1e-4
    print(f"reference match: max deviation {deviation:.2e} {'PASS' if match_ok else 'FAIL'}")

    r, n_v = minimal_noise_count(system, policy)
    print(f"r={r} n_v={n_v}")
    counts_ok = r == 4 and n_v == 6
    print(f"multiplicity_bound={multiplicity_noise_count(system, policy)}")

    try:
        _, report = synthesize_realization(system, policy)
        synth_ok = report.all_passed
    except SynthesisError as exc:
        if exc.report is None:
            raise
        report = exc.report
        synth_ok = False
    _print_residuals(report)

    certificate = minimality_certificate(
        system, trials=_CERTIFICATE_TRIALS, seed=seed, policy=policy
    )
    cert_ok = certificate.lower_bound_held and certificate.embedding_agreed
    print(
        f"certificate: trials={certificate.trials} "
        f"min_observed_rank={certificate.min_observed_rank} "
        f"bound_held={'PASS' if certificate.lower_bound_held else 'FAIL'} "
        f"embedding_agreed={'PASS' if certificate.embedding_agreed else 'FAIL'}"
    )
    return 0 if (match_ok and counts_ok and synth_ok and cert_ok) else 1


def _add_tolerance_flags(parser) -> None:
    parser.add_argument(
        "--rank-tol",
        type=float,
        default=None,
        help="relative singular value cutoff for numerical ranks (default 1e-9)",
    )
    parser.add_argument(
        "--residual-tol",
        type=float,
        default=None,
        help="relative threshold for identity residuals (default 1e-8)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrealize",
        description="Minimal quantum-noise realization of LTI systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="minimal additional noise channel count")
    count.add_argument("path", help="system JSON file")
    _add_tolerance_flags(count)
    count.set_defaults(func=cmd_count)

    synth = sub.add_parser("synthesize", help="construct and verify a realization")
    synth.add_argument("path", help="system JSON file")
    synth.add_argument("-o", "--out", required=True, help="report output file")
    _add_tolerance_flags(synth)
    synth.add_argument("--seed", type=int, default=None, help="certificate RNG seed (default 0)")
    synth.set_defaults(func=cmd_synthesize)

    check = sub.add_parser("check", help="verify a stored (B1, D1) pair")
    check.add_argument("system_path", help="system JSON file")
    check.add_argument("realization_path", help="realization or report JSON file")
    _add_tolerance_flags(check)
    check.set_defaults(func=cmd_check)

    example = sub.add_parser("paper-example", help="run the built-in worked example")
    _add_tolerance_flags(example)
    example.add_argument("--seed", type=int, default=None, help="certificate RNG seed (default 0)")
    example.set_defaults(func=cmd_paper_example)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QRealizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

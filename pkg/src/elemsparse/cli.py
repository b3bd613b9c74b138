"""Command-line front end.

Subcommands: sparsify (one-shot sketch), bounds (sample-size calculator),
experiment (Monte-Carlo guarantee check), compare (hybrid vs l1 vs l2).

Exit codes: 0 success, 1 config or I/O error, 2 guarantee violated
(experiment only: empirical failure rate above delta).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .bounds import BoundRequest, bound_report
from .distributions import DistributionKind, distribution_for_kind
from .errors import ElemsparseError, InvalidSpecError
from .experiment import (
    BoundForm,
    ExperimentConfig,
    FileSource,
    SCHEMA_VERSION,
    bound_inputs,
    compare_distributions,
    compare_payload,
    experiment_payload,
    payload_text,
    resolve_matrix,
    run_experiment,
)
from .generate import GENERATOR_KINDS, GeneratorSpec
from .io import FORMATS, load_matrix, write_csv, write_matrix_market
from .matrix import coo_to_dense, frobenius_norm, stable_rank
from .sampler import build_alias_table, draw_samples, sampling_operator

__all__ = ["main", "build_parser"]

_DIST_CHOICES = ("hybrid", "l1", "l2")
_FORM_CHOICES = tuple(f.value for f in BoundForm)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; 2 is reserved for "guarantee
    # violated" here, so usage errors are remapped to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _generator_spec(text: str) -> GeneratorSpec:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise InvalidSpecError(f"--generate wants KIND,M,N,SEED, got {text!r}")
    kind, m, n, seed = parts[0], parts[1], parts[2], parts[3]
    try:
        return GeneratorSpec(kind=kind, m=int(m), n=int(n), seed=int(seed))
    except ValueError as exc:
        raise InvalidSpecError(f"--generate {text!r}: {exc}") from None


def _add_source_flags(p) -> None:
    p.add_argument("--input", help="matrix file to load")
    p.add_argument("--format", choices=FORMATS, help="input format (default: by suffix)")
    p.add_argument(
        "--generate",
        type=_generator_spec,
        metavar="KIND,M,N,SEED",
        help=f"generate the input instead; kinds: {', '.join(GENERATOR_KINDS)}",
    )


def _add_bound_flags(p) -> None:
    p.add_argument("--epsilon", type=float, help="absolute spectral error target")
    p.add_argument(
        "--epsilon-rel",
        type=float,
        help="relative error target: scales ||X||_2 under --bound-form corollary, ||X||_F otherwise",
    )
    p.add_argument("--delta", type=float, default=0.1, help="failure probability (default 0.1)")
    p.add_argument("--beta", type=float, help="distribution quality override (default: computed certificate)")
    p.add_argument("--s", type=int, help="sample-count override, skips the bound")
    p.add_argument("--bound-form", choices=_FORM_CHOICES, default="unsimplified")


def build_parser() -> _Parser:
    parser = _Parser(prog="elemsparse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sparsify", help="sample one sparse sketch and write it out")
    _add_source_flags(p)
    _add_bound_flags(p)
    p.add_argument("--dist", choices=_DIST_CHOICES, default="hybrid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--out-format", choices=("matrix-market", "csv"), default="matrix-market")
    p.set_defaults(func=_cmd_sparsify)

    p = sub.add_parser("bounds", help="print the sample-size report for given parameters")
    _add_source_flags(p)
    _add_bound_flags(p)
    p.add_argument("--m", type=int, help="rows, when no --input is given")
    p.add_argument("--n", type=int, help="columns, when no --input is given")
    p.add_argument("--frobenius", type=float, help="||X||_F, when no --input is given")
    p.add_argument("--stable-rank", type=float, help="sr(X), enables the corollary row")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("experiment", help="Monte-Carlo check of the sparsification guarantee")
    _add_source_flags(p)
    _add_bound_flags(p)
    p.add_argument("--dist", choices=_DIST_CHOICES, default="hybrid")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed+t")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--out-format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("compare", help="hybrid vs l1 vs l2 at one shared sample size")
    _add_source_flags(p)
    _add_bound_flags(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--out-format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_compare)

    return parser


def _source(args):
    if (args.input is None) == (args.generate is None):
        raise InvalidSpecError("exactly one of --input and --generate is required")
    if args.input is not None:
        return FileSource(args.input, args.format)
    return args.generate


def _experiment_config(args, dist: str | None) -> ExperimentConfig:
    return ExperimentConfig(
        source=_source(args),
        dist_kind=DistributionKind(dist) if dist is not None else DistributionKind.HYBRID,
        epsilon=args.epsilon,
        epsilon_rel=args.epsilon_rel,
        delta=args.delta,
        beta=args.beta,
        s_override=args.s,
        bound_form=BoundForm(args.bound_form),
        trials=args.trials,
        base_seed=args.seed,
        jobs=args.jobs,
        out_path=args.out,
        out_format=args.out_format,
    )


def _cmd_sparsify(args) -> int:
    source = _source(args)
    x = resolve_matrix(source)
    dist = distribution_for_kind(x, DistributionKind(args.dist))
    if args.s is not None:
        s_used = args.s
        if s_used < 1:
            raise InvalidSpecError("--s must be a positive integer")
    elif args.epsilon is None and args.epsilon_rel is None:
        raise InvalidSpecError("sparsify needs --s or one of --epsilon/--epsilon-rel")
    else:
        cfg = ExperimentConfig(
            source=source,
            dist_kind=dist.kind,
            epsilon=args.epsilon,
            epsilon_rel=args.epsilon_rel,
            delta=args.delta,
            beta=args.beta,
            bound_form=BoundForm(args.bound_form),
            base_seed=args.seed,
        )
        beta = args.beta if args.beta is not None else dist.beta
        _, _, s_used = bound_inputs(cfg, x, beta)
    table = build_alias_table(dist)
    omega = draw_samples(table, s_used, args.seed)
    sketch = sampling_operator(x, dist, omega)
    if args.out_format == "matrix-market":
        write_matrix_market(args.out, sketch.matrix)
    else:
        write_csv(args.out, coo_to_dense(sketch.matrix))
    print(f"wrote {args.out}: {x.m}x{x.n}, s={s_used}, nnz={sketch.matrix.nnz}")
    return 0


def _cmd_bounds(args) -> int:
    if args.input is not None:
        x = load_matrix(args.input, args.format)
        m, n = x.m, x.n
        fro = frobenius_norm(x)
        sr = stable_rank(x)
    else:
        if args.m is None or args.n is None or args.frobenius is None:
            raise InvalidSpecError("bounds needs --input or all of --m/--n/--frobenius")
        m, n, fro, sr = args.m, args.n, args.frobenius, args.stable_rank
    if (args.epsilon is None) == (args.epsilon_rel is None):
        raise InvalidSpecError("exactly one of --epsilon and --epsilon-rel is required")
    epsilon = args.epsilon if args.epsilon is not None else args.epsilon_rel * fro
    beta = args.beta if args.beta is not None else 1.0
    req = BoundRequest(m, n, epsilon, args.delta, beta, fro, stable_rank=sr)
    report = bound_report(req, epsilon_rel=args.epsilon_rel)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "bounds",
        "request": {
            "m": m,
            "n": n,
            "epsilon": epsilon,
            "epsilon_rel": args.epsilon_rel,
            "delta": args.delta,
            "beta": beta,
            "frobenius": fro,
            "stable_rank": sr,
        },
        "report": {
            "s_theorem1": report.s_theorem1,
            "case_used": report.case_used.value,
            "s_unsimplified": report.s_unsimplified,
            "s_corollary": report.s_corollary,
            "gamma": report.gamma,
            "rho2": report.rho2,
            "tail_at_s": report.tail_at_s,
        },
    }
    text = payload_text(payload)
    if args.out is not None:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_experiment(args) -> int:
    cfg = _experiment_config(args, args.dist)
    result = run_experiment(cfg)
    if cfg.out_path is None:
        sys.stdout.write(payload_text(experiment_payload(result, cfg)))
    else:
        print(
            f"s={result.s_used} epsilon={result.epsilon_used:.6g} "
            f"failure_rate={result.empirical_failure_rate:.4f} delta={cfg.delta:g} "
            f"-> {'pass' if result.passed else 'FAIL'} ({cfg.out_path})"
        )
    return 0 if result.passed else 2


def _cmd_compare(args) -> int:
    cfg = _experiment_config(args, None)
    result = compare_distributions(cfg)
    if cfg.out_path is None:
        sys.stdout.write(payload_text(compare_payload(result, cfg)))
    else:
        for summ in result.summaries:
            print(
                f"{summ.kind.value}: beta={summ.beta_certificate:.6g} "
                f"median={summ.median_error:.6g} p90={summ.p90_error:.6g}"
            )
        print(f"wrote {cfg.out_path} (s={result.s_used})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ElemsparseError, OSError) as exc:
        print(f"elemsparse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

'''command line: solve, gen and info

    python cli.py solve --randsvd 20,1e5,1,1 --rhs rsv:4 --s 3 --restart 20 --csv out.csv --summary
    python cli.py gen --randsvd 20,1e10,5,1 --out A.mtx
    python cli.py info --matrix data/matrices/494_bus.mtx

exit codes: 0 converged, 2 not converged (iteration cap, key dimension
without the backward tolerance, non-finite values), 1 bad usage or input'''
import argparse
import sys
from pathlib import Path

import numpy as np

import sstep_gmres
import summary_printer
from dense_kernels import cond2
from diagnostics import write_csv
from errors import CliUsageError, SStepGmresError, SvdNotConvergedError
from models.csr_matrix import CsrMatrix
from models.randsvd_spec import RandSvdSpec
from models.solver_config import SolverConfig
from problems import Problem, build_rhs, randsvd_problem
from sparse_io import gen_randsvd, load_matrix_market, randsvd_singular_values, write_matrix_market

INFO_MAX_N = 2000

class CliParser(argparse.ArgumentParser):
    '''argument errors raise CliUsageError instead of exiting'''
    def error(self, message):
        raise CliUsageError(f"{self.prog}: {message}")

def randsvd_arg(text: str) -> RandSvdSpec:
    try:
        return RandSvdSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None

def add_solve_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", metavar="PATH", help="Matrix Market file (coordinate real general/symmetric)")
    source.add_argument("--randsvd", type=randsvd_arg, metavar="n,kappa,mode,seed", help="generated randsvd matrix")
    parser.add_argument("--rhs", default="ones", help="ones | file:PATH | rsv:k (k-th right singular vector of a randsvd matrix)")
    parser.add_argument("--x0", choices=["zero", "random"], default="zero", help="initial guess, random is seeded by --seed")
    parser.add_argument("--seed", type=int, default=0, help="seed of the random initial guess")
    parser.add_argument("--s", type=int, default=1, help="block size")
    parser.add_argument("--basis", choices=["monomial", "newton", "chebyshev"], default="monomial", help="Krylov basis polynomials")
    parser.add_argument("--arnoldi", choices=["classical", "modified"], default="classical", help="s-step Arnoldi variant")
    parser.add_argument("--orth", choices=["bcgsi+", "bmgs"], default="bcgsi+", help="block orthogonalization scheme")
    parser.add_argument("--tol", type=float, help="backward error threshold (default n*u)")
    parser.add_argument("--tolh", type=float, help="key dimension threshold (default sqrt(n)*u)")
    parser.add_argument("--tolls", type=float, help="least-squares residual threshold (default tol)")
    parser.add_argument("--no-key-dimension", action="store_true", help="disable the key dimension stopping criterion")
    parser.add_argument("--ls-terminates", action="store_true", help="let the least-squares criterion stop the run on its own")
    parser.add_argument("--restart", type=int, help="restart length in Krylov columns")
    parser.add_argument("--max-outer", type=int, help="cap on block steps over all cycles")
    parser.add_argument("--max-restarts", type=int, default=10, help="cap on restart cycles")
    parser.add_argument("--precond", choices=["none", "jacobi"], default="none", help="preconditioner")
    parser.add_argument("--precond-side", choices=["left", "right"], default="right", help="side the preconditioner is applied on")
    parser.add_argument("--basis-operator", choices=["plain", "preconditioned"], default="plain", help="operator the basis polynomials are applied to")
    parser.add_argument("--check-backward-every", type=int, default=1, help="block steps between backward error checks")
    parser.add_argument("--diag-every", type=int, default=1, help="block steps between condition number measurements, 0 disables them")
    parser.add_argument("--csv", metavar="PATH", help="write the per-block-step diagnostics, - for stdout")
    parser.add_argument("--summary", action="store_true", help="print a summary of the run")
    parser.add_argument("--verbose", action="store_true", help="print progress for every block step")

def build_parser() -> CliParser:
    parser = CliParser(prog="cli.py", description="s-step GMRES with classical and modified s-step Arnoldi")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve A x = b and report diagnostics")
    add_solve_arguments(solve)
    solve.set_defaults(func=run_solve)

    gen = sub.add_parser("gen", help="write a randsvd matrix and its singular values")
    gen.add_argument("--randsvd", type=randsvd_arg, required=True, metavar="n,kappa,mode,seed", help="randsvd parameters")
    gen.add_argument("--out", required=True, metavar="PATH", help="Matrix Market output, singular values go to PATH with suffix .sv")
    gen.set_defaults(func=run_gen)

    info = sub.add_parser("info", help="print the properties of a matrix")
    info.add_argument("--matrix", required=True, metavar="PATH", help="Matrix Market file")
    info.set_defaults(func=run_info)
    return parser

def config_from_args(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        s=args.s,
        max_outer=args.max_outer,
        max_restarts=args.max_restarts,
        basis=args.basis,
        variant=args.arnoldi,
        scheme=args.orth,
        tol=args.tol,
        tol_ls=args.tolls,
        tol_h=args.tolh,
        restart=args.restart,
        precond=args.precond,
        precond_side=args.precond_side,
        basis_operator=args.basis_operator,
        check_backward_every=args.check_backward_every,
        check_key_dimension=not args.no_key_dimension,
        ls_advisory=not args.ls_terminates,
        diag_every=args.diag_every,
        seed=args.seed,
        verbose=args.verbose,
    )

def load_problem(args: argparse.Namespace) -> Problem:
    if args.randsvd is not None:
        return randsvd_problem(args.randsvd, args.rhs)
    A = load_matrix_market(args.matrix)
    return Problem(Path(args.matrix).stem, A, build_rhs(args.rhs, A.n))

def run_solve(args: argparse.Namespace) -> int:
    problem = load_problem(args)
    cfg = config_from_args(args)
    try:
        cfg = cfg.resolve(problem.n)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    x0 = np.zeros(problem.n)
    if args.x0 == "random":
        x0 = np.random.default_rng(cfg.seed).standard_normal(problem.n)

    result = sstep_gmres.solve(problem.A, problem.b, x0, cfg)
    if args.csv == "-":
        write_csv(result.records, sys.stdout)
    elif args.csv:
        with open(args.csv, "w", newline="") as f:
            write_csv(result.records, f)
    if args.summary:
        summary_printer.print_summary(result, problem.name)
    return 0 if result.status.converged else 2

def run_gen(args: argparse.Namespace) -> int:
    spec: RandSvdSpec = args.randsvd
    A, _ = gen_randsvd(spec)
    out = Path(args.out)
    with open(out, "w") as f:
        write_matrix_market(CsrMatrix.from_dense(A), f)
    sigma = randsvd_singular_values(spec, np.random.default_rng(spec.seed))
    with open(out.with_suffix(".sv"), "w") as f:
        for value in sigma:
            f.write(f"{float(value)!r}\n")
    print(f"wrote {out} ({spec.n}x{spec.n}, {spec.n * spec.n} entries) and {out.with_suffix('.sv')}")
    return 0

def run_info(args: argparse.Namespace) -> int:
    A = load_matrix_market(args.matrix)
    print(f"matrix: {args.matrix}")
    print(f"n: {A.n}")
    print(f"nnz: {A.nnz}")
    print(f"symmetric: {A.is_symmetric()}")
    print(f"frobenius norm: {A.frobenius_norm():.6e}")
    if A.n > INFO_MAX_N:
        print(f"cond2: not estimated, n = {A.n} exceeds {INFO_MAX_N}")
        return 0
    try:
        print(f"cond2: {cond2(A.to_dense()):.6e}")
    except SvdNotConvergedError as exc:
        print(f"cond2: {exc.values[0] / exc.values[-1]:.6e} (Jacobi SVD did not converge, LAPACK info {exc.info})")
    return 0

def main(argv: list = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        # --help
        return exc.code if isinstance(exc.code, int) else 0
    except CliUsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    except (OSError, ValueError, SStepGmresError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1

if __name__ == "__main__":
    sys.exit(main())

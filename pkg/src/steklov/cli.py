"""Command line entry point: ``steklov {spectrum,verify,hps-check,corpus}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .fourier import steklov_spectrum_fourier
from .hps import hps_test_function, make_cover, string_mode, verify_identity_chain


def _complex_list(text: str) -> list:
    return [complex(tok.replace(" ", "")) for tok in text.split(",") if tok.strip()]


def _pair(text: str) -> tuple:
    p, q = (int(t) for t in text.split(","))
    return p, q


def _emit(header, rows, out, name):
    if out is None:
        import csv
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([harness.fmt(x) if not isinstance(x, str) else x for x in r])
    else:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        harness.write_csv(path / name, header, rows)


def cmd_spectrum(args) -> int:
    dom = harness.load_domain(args.domain)
    spec = harness.solve(dom, args.solver, args.kmax, args.modes, args.nodes)
    L = dom.spec.L
    rows = [[dom.id, spec.solver, k, v, v * L] for k, v in enumerate(spec.values)]
    _emit(["domain", "solver", "k", "sigma", "sigmaL"], rows, args.out, f"{dom.id}_spectrum.csv")
    return 0


def cmd_verify(args) -> int:
    dom = harness.load_domain(args.domain)
    rep = harness.verify_domain(dom, args.solver, args.kmax, args.pqmax, args.modes, args.nodes)
    _emit(harness.K_COLUMNS, rep.k_table(), args.out, f"{dom.id}.csv")
    if args.out is not None:
        harness.write_csv(Path(args.out) / f"{dom.id}_pairs.csv", harness.PQ_COLUMNS, rep.pq_table())
    for bad in rep.violations:
        logging.error("bound violated: %s", bad)
    return 1 if rep.violations else 0


def cmd_hps_check(args) -> int:
    cover = make_cover(args.cover_degree, _complex_list(args.phi))
    report = verify_identity_chain(cover, string_mode(args.mode, 1.0), args.grid)
    rows = [[name, value] for name, value in report.rows()]
    if args.pq is not None:
        p, q = args.pq
        spec = steklov_spectrum_fourier(cover.inner, args.modes, max(p, q) + 1)
        res = hps_test_function(cover, spec, p, q, args.grid)
        rows += [["test_rayleigh_product", res.product],
                 ["sigma_p_sigma_q", res.sigma_p * res.sigma_q],
                 ["dominance", res.dominance],
                 ["test_string_bound", res.string_bound],
                 ["top_mode_bound", res.top_mode_bound]]
    _emit(["quantity", "value"], rows, args.out, "hps_check.csv")
    return 0


def cmd_corpus(args) -> int:
    config = harness.default_corpus_path() if args.config in (None, "default") else args.config
    return harness.run_corpus(config, args.out or "corpus_out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steklov", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--domain", required=True, help="JSON file or builtin name (builtin:disk, ...)")
        p.add_argument("--solver", default="auto", choices=["auto", *harness.SOLVERS])
        p.add_argument("--kmax", type=int, default=8)
        p.add_argument("--modes", type=int, default=64, help="Fourier mode cutoff N")
        p.add_argument("--nodes", type=int, default=128, help="BEM nodes M per boundary component")
        p.add_argument("--out", default=None, help="output directory (default: stdout)")

    p = sub.add_parser("spectrum", help="print sigma_0..sigma_kmax")
    solver_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check both eigenvalue bounds on one domain")
    solver_flags(p)
    p.add_argument("--pqmax", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hps-check", help="residuals of the test-function identity chain")
    p.add_argument("--cover-degree", type=int, default=1)
    p.add_argument("--phi", default="1", help="Taylor coefficients a_1,a_2,... (complex allowed)")
    p.add_argument("--mode", type=int, default=1)
    p.add_argument("--pq", type=_pair, default=None, help="p,q for the constrained construction")
    p.add_argument("--modes", type=int, default=64)
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hps_check)

    p = sub.add_parser("corpus", help="run a corpus config (default: built-in corpus)")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

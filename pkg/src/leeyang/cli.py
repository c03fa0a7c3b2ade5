"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 enumeration cap exceeded,
4 property falsified (a witness file is written), 5 recovery or
interpolation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from . import partition, reductions, satgadgets, zeros
from .errors import (
    CapExceededError,
    InconsistentSamplesError,
    LeeYangError,
    NormalizationError,
    PreconditionError,
    RankDeficientError,
    TemplateFalsifiedError,
)
from .graphs import MultiGraph, bipartite_double, connected_graphs, random_connected_graph
from .polynomial import UniPoly, format_rational, parse_rational
from .ratinterp import interpolate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_FALSIFIED = 4
EXIT_RECOVERY = 5

log = logging.getLogger("leeyang")


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> RunConfig:
        opts = {k: v for k, v in vars(args).items() if k not in ("command", "func")}
        return cls(args.command, opts)


class InputError(Exception):
    pass


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_graph(path: str) -> MultiGraph:
    try:
        with open(path) as fh:
            return MultiGraph.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read graph {path}: {exc}") from exc


def _emit(obj, path: str | None) -> None:
    text = _dump(obj)
    if path:
        _write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required here")


# subcommands


def cmd_partition(args) -> int:
    g = _load_graph(args.graph)
    if args.model == "ising":
        _need(args, "beta")
        poly = partition.ising_poly(g, args.beta, method=args.method, cap=args.cap or partition.ENUMERATION_CAP)
    elif args.model == "matching":
        method = "dp" if args.method == "auto" else args.method
        poly = partition.matching_poly(g, allow_signed=args.allow_signed, method=method, cap=args.cap or partition.MATCHING_ENUMERATION_CAP)
    else:
        _need(args, "alpha1", "alpha2")
        poly = partition.twospin_poly(g, args.alpha1, args.alpha2)
    out = {"model": args.model, "graph": g.to_json(), "polynomial": poly.to_json()}
    if args.lam is not None:
        out["value"] = format_rational(poly(args.lam))
    _emit(out, args.emit)
    return EXIT_OK


def cmd_observables(args) -> int:
    g = _load_graph(args.graph)
    _need(args, "lam")
    if args.model == "ising":
        _need(args, "beta")
    if args.model == "twospin":
        _need(args, "alpha1", "alpha2")
    obs = partition.observables(g, args.model, beta=args.beta, lam=args.lam, alpha1=args.alpha1, alpha2=args.alpha2)
    _emit({k: format_rational(v) for k, v in obs.items()}, args.emit)
    return EXIT_OK


def _corpus(args):
    rng = random.Random(args.seed)
    for n in range(1, args.max_n + 1):
        if args.family == "random":
            for i in range(args.sample):
                yield f"r{n}_{i}", random_connected_graph(n, rng)
            continue
        gs = connected_graphs(n).graphs
        if n > args.exhaustive_up_to and args.sample < len(gs):
            idx = sorted(rng.sample(range(len(gs)), args.sample))
            gs_items = [(i, gs[i]) for i in idx]
        else:
            gs_items = list(enumerate(gs))
        for i, g in gs_items:
            yield f"n{n}_{i}", g


def _certify_ising(gid, g, beta, args, roots_rows, loci):
    z = partition.ising_poly(g, beta)
    dz = z.lambda_derivative()
    certs = []
    if g.n >= 1:
        uc = zeros.certify_unit_circle(z, tol=args.tol, precision=args.precision)
        certs.append(uc)
    inner = dz.divide_by_x_power(1)
    certs.append(zeros.certify_strictly_inside_unit_disk(inner) if inner.degree >= 1 else zeros.Certificate("strictly_inside_unit_disk", True))
    certs.append(zeros.certify_coprime(z, dz, "coprime_with_derivative"))
    if args.emit_roots or args.figure:
        rz = zeros.find_roots(z, args.precision)
        rd = zeros.find_roots(inner, args.precision) if inner.degree >= 1 else None
        for label, rs in (("Z", rz), ("DZ", rd)):
            if rs is None:
                continue
            for i, (r, rad) in enumerate(zip(rs.roots, rs.radii)):
                roots_rows.append([gid, str(beta), label, i, mpmath.nstr(r.real, 40), mpmath.nstr(r.imag, 40), mpmath.nstr(rad, 6)])
            loci.setdefault(label, []).extend(rs.roots)
    return certs


def _certify_matching(gid, g, args, roots_rows, loci):
    zm = partition.matching_poly(g)
    axis, simple = zeros.certify_imaginary_axis_and_simple(zm)
    if args.emit_roots or args.figure:
        rs = zeros.find_roots(zm, args.precision)
        for i, (r, rad) in enumerate(zip(rs.roots, rs.radii)):
            roots_rows.append([gid, "", "ZM", i, mpmath.nstr(r.real, 40), mpmath.nstr(r.imag, 40), mpmath.nstr(rad, 6)])
        loci.setdefault("ZM", []).extend(rs.roots)
    return [axis, simple]


def cmd_certify(args) -> int:
    if args.graph:
        items = [("input", _load_graph(args.graph))]
    else:
        items = list(_corpus(args))
    betas = args.beta or ([] if args.model == "matching" else None)
    if args.model == "ising" and not betas:
        raise InputError("--beta is required for the ising model")
    lines, roots_rows, loci = [], [], {}
    failures = []
    for gid, g in items:
        if args.model == "ising":
            for beta in betas:
                for c in _certify_ising(gid, g, beta, args, roots_rows, loci):
                    rec = c.to_json(f"{gid}@beta={format_rational(beta)}")
                    lines.append(rec)
                    if not c.verdict:
                        failures.append({**rec, "graph": g.to_json()})
        else:
            from .graphs import has_hamiltonian_path

            if args.require_hamiltonian and not has_hamiltonian_path(g):
                continue
            for c in _certify_matching(gid, g, args, roots_rows, loci):
                rec = c.to_json(gid)
                lines.append(rec)
                if not c.verdict:
                    failures.append({**rec, "graph": g.to_json()})
    text = "".join(json.dumps(x, sort_keys=True) + "\n" for x in lines)
    if args.emit:
        _write_atomic(args.emit, text)
    else:
        sys.stdout.write(text)
    if args.emit_roots:
        with open(args.emit_roots, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["graph_id", "beta", "polynomial", "index", "re", "im", "radius"])
            w.writerows(roots_rows)
    if args.figure:
        from .plotting import plot_zero_loci

        title = "zeros of Z and DZ" if args.model == "ising" else "zeros of Z_M"
        plot_zero_loci(loci, args.figure, title)
    summary = {"graphs": len(items), "certificates": len(lines), "failures": len(failures)}
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    if failures:
        _write_atomic(args.witness, _dump(failures))
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_recover(args) -> int:
    g = _load_graph(args.graph)
    m = args.model
    if m in ("ising", "ising-path", "susceptibility"):
        _need(args, "beta")
    if m in ("ising", "ising-path", "matching", "matching-path", "twospin"):
        _need(args, "lam")
    if m == "twospin":
        _need(args, "alpha1", "alpha2")
    verify = not args.no_verify
    if m == "ising":
        rep = reductions.recover_ising_star(g, args.beta, args.lam, verify=verify)
    elif m == "ising-path":
        rep = reductions.recover_ising_path(g, args.beta, args.lam, verify=verify)
    elif m == "susceptibility":
        rep = reductions.recover_via_susceptibility(g, args.beta, verify=verify)
    elif m == "matching":
        rep = reductions.recover_matching_star(g, args.lam, oracle=_signed_monomer_oracle(g), verify=verify)
    elif m == "matching-path":
        rep = reductions.recover_matching_path(g, args.lam, oracle=_signed_monomer_oracle(g), verify=verify)
    else:
        rep = reductions.recover_twospin(g, args.alpha1, args.alpha2, args.lam, verify=verify)
    out = rep.to_json()
    if args.formula_registry:
        with open(args.formula_registry) as fh:
            reg = json.load(fh)
        w = rep.polynomial.coeff(0)
        if w.denominator != 1:
            raise InconsistentSamplesError("perfect-matching weight is not an integer")
        out["sat_count"] = satgadgets.extract_sat_count(int(w), reg["mu"], reg["nu_used"], reg["kappa"], reg["stripped"])
    _emit(out, args.emit)
    if rep.verified is False or not rep.consistent:
        _write_atomic(args.witness, _dump(out))
        return EXIT_FALSIFIED
    return EXIT_OK


def _signed_monomer_oracle(g):
    signed = any(w < 0 for _, _, w in g.edges)
    return reductions.AverageOracle("monomer_count", lambda h, lam: partition.monomer_count(h, lam, allow_signed=signed))


def cmd_compile(args) -> int:
    try:
        with open(args.formula) as fh:
            phi = satgadgets.MonotoneTwoCnf.parse(fh.read(), args.nu)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    out = satgadgets.compile_formula(phi, args.mode, args.kappa)
    graph_json = out.graph.to_json()
    graph_json["registry"] = out.registry_json()
    _emit(graph_json, args.emit)
    if args.bipartite:
        _emit(bipartite_double(out.graph).to_json(), args.bipartite)
    if args.registry:
        _emit(out.registry_json(), args.registry)
    summary = {"vertices": out.graph.n, "arcs": len(out.graph.arcs), **satgadgets.degree_audit(out)}
    if args.certificate:
        path = satgadgets.build_hamiltonian_certificate(out)
        cert = path.to_json()
        cert["valid"] = satgadgets.validate_certificate(out, path)
        _emit(cert, args.certificate)
        summary["certificate_valid"] = cert["valid"]
    if args.count:
        w = satgadgets.cycle_cover_weight(out.graph)
        summary["cycle_cover_weight"] = str(w)
        summary["sat_count"] = satgadgets.extract_sat_count(w, out.mu, out.nu_used, out.kappa, out.stripped)
        summary["sat_count_enumerated"] = phi.count_satisfying()
        if summary["sat_count"] != summary["sat_count_enumerated"]:
            sys.stderr.write(_dump(summary))
            _write_atomic(args.witness, _dump({"formula": [list(c) for c in phi.clauses], **summary}))
            return EXIT_FALSIFIED
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify_gadgets(args) -> int:
    result = satgadgets.derive_gadget_weights()
    report = satgadgets.verify_gadget_properties(result.xor, result.clause)
    frozen_match = set(result.xor.arcs) == set(satgadgets.XOR_TEMPLATE.arcs) and set(result.clause.arcs) == set(
        satgadgets.CLAUSE_TEMPLATE.arcs
    )
    out = {
        "search_log": result.log,
        "xor_arcs": [list(a) for a in result.xor.arcs],
        "clause_arcs": [list(a) for a in result.clause.arcs],
        "variable_weights": result.variable_weights,
        "xor_closures": report.xor_closures,
        "variable_cover_counts": {str(k): v for k, v in report.variable_cover_counts.items()},
        "matches_frozen_templates": frozen_match,
    }
    _emit(out, args.emit)
    if not frozen_match:
        _write_atomic(args.witness, _dump(out))
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_interp(args) -> int:
    try:
        with open(args.samples) as fh:
            raw = json.load(fh)
        pts = [(parse_rational(x), parse_rational(r)) for x, r in raw]
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"bad samples file: {exc}") from exc
    rep = interpolate(pts, args.degree)
    _emit({"numerator": rep.numerator.to_json(), "denominator": rep.denominator.to_json()}, args.emit)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leeyang", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--graph", required=True, help="graph JSON file")
        sp.add_argument("--emit", help="write JSON here instead of stdout")
        sp.add_argument("--witness", default="witness.json", help="witness file for falsified properties")

    sp = sub.add_parser("partition", help="partition polynomial of a graph")
    common(sp)
    sp.add_argument("--model", choices=["ising", "matching", "twospin"], default="ising")
    sp.add_argument("--beta", type=_rational)
    sp.add_argument("--alpha1", type=_rational)
    sp.add_argument("--alpha2", type=_rational)
    sp.add_argument("--lambda", dest="lam", type=_rational, help="also evaluate at this activity")
    sp.add_argument("--allow-signed", action="store_true")
    sp.add_argument("--method", choices=["auto", "enumerate", "dp"], default="auto")
    sp.add_argument("--cap", type=int, help="enumeration cap (vertices for ising, edges for matching)")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("observables", help="Gibbs averages at one parameter point")
    common(sp)
    sp.add_argument("--model", choices=["ising", "matching", "twospin"], default="ising")
    sp.add_argument("--beta", type=_rational)
    sp.add_argument("--alpha1", type=_rational)
    sp.add_argument("--alpha2", type=_rational)
    sp.add_argument("--lambda", dest="lam", type=_rational)
    sp.set_defaults(func=cmd_observables)

    sp = sub.add_parser("certify", help="zero-location certificates over a graph corpus")
    common(sp, graph=False)
    sp.add_argument("--graph", help="certify a single graph instead of a corpus")
    sp.add_argument("--model", choices=["ising", "matching"], default="ising")
    sp.add_argument("--family", choices=["connected", "random"], default="connected")
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--beta", type=_rational, action="append", help="repeatable")
    sp.add_argument("--exhaustive-up-to", type=int, default=6)
    sp.add_argument("--sample", type=int, default=40, help="graphs sampled per n above the exhaustive range")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--precision", type=int, default=256)
    sp.add_argument("--tol", type=float, default=1e-25)
    sp.add_argument("--require-hamiltonian", action="store_true", help="matching model: skip graphs without a Hamiltonian path")
    sp.add_argument("--emit-roots", help="CSV of roots with inclusion radii")
    sp.add_argument("--figure", help="PNG of the zero loci")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("recover", help="recover a partition function from an average oracle")
    common(sp)
    sp.add_argument("--model", required=True, choices=["ising", "ising-path", "susceptibility", "matching", "matching-path", "twospin"])
    sp.add_argument("--beta", type=_rational)
    sp.add_argument("--lambda", dest="lam", type=_rational)
    sp.add_argument("--alpha1", type=_rational)
    sp.add_argument("--alpha2", type=_rational)
    sp.add_argument("--no-verify", action="store_true", help="skip the direct computation")
    sp.add_argument("--formula-registry", help="registry from compile-2sat; report the satisfying count")
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("compile-2sat", help="compile a monotone 2-CNF into a gadget graph")
    common(sp, graph=False)
    sp.add_argument("--formula", required=True, help="one clause per line, two positive integers")
    sp.add_argument("--nu", type=int, help="variable count if larger than the largest literal")
    sp.add_argument("--mode", choices=["keep", "chain"], default="keep")
    sp.add_argument("--kappa", type=int)
    sp.add_argument("--certificate", help="write the alternating Hamiltonian path here")
    sp.add_argument("--bipartite", help="write the bipartite double as an undirected graph")
    sp.add_argument("--registry", help="write the gadget registry here")
    sp.add_argument("--count", action="store_true", help="compute the cycle-cover weight and extract the count")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("verify-gadgets", help="re-run the gadget weight search and verification")
    common(sp, graph=False)
    sp.set_defaults(func=cmd_verify_gadgets)

    sp = sub.add_parser("interp", help="rational interpolation from exact samples")
    common(sp, graph=False)
    sp.add_argument("--samples", required=True, help='JSON list of ["x", "value"] rational pairs')
    sp.add_argument("--degree", type=int, required=True)
    sp.set_defaults(func=cmd_interp)
    return p


def run(args) -> int:
    try:
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except CapExceededError as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except TemplateFalsifiedError as exc:
        sys.stderr.write(f"property falsified: {exc}\n")
        _write_atomic(args.witness, _dump({"error": str(exc), "closure": exc.closure}))
        return EXIT_FALSIFIED
    except (RankDeficientError, InconsistentSamplesError, NormalizationError) as exc:
        sys.stderr.write(f"recovery failed: {exc}\n")
        return EXIT_RECOVERY
    except LeeYangError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RECOVERY


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    log.debug("config %s", asdict(RunConfig.from_args(args)))
    return run(args)


if __name__ == "__main__":
    sys.exit(main())

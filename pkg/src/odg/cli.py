"""Command-line interface.

Every invocation writes exactly one JSON document to stdout; diagnostics go
to stderr. Exit codes: 0 success, 2 parse or usage error, 3 infeasible
design, 4 optimizer did not converge, 5 invalid permutation, 6 symmetry
search too large, 7 oracle too large.

Input formats
-------------
Coefficient files are either CSV (one row per treatment, comma-separated,
no header) or an edge list whose first line is ``v=<n>`` followed by one
1-indexed ``j i`` pair per line for the comparison of treatment j against
treatment i. Design files hold v decimal weights separated by commas or
whitespace. ``--p`` accepts a float in [-inf, 0] or the literal ``neg-inf``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from ._config import default_rank_tol
from .contrasts import (
    ContrastSystem,
    classify,
    detect_pairwise,
    graph_system,
    parse_contrast_matrix,
    parse_edge_list,
    rank_of,
)
from .closed_form import a_optimal, d_optimal_uniform, e_optimal_bipartite
from .criteria import CriterionValue, psi_p, validate_p
from .forests import verify_d_identity
from .optimizer import OptimizeOptions, e_certificate, grid_oracle, optimize_phi_p
from .spectral import Design, covariance_matrix, eigenvalues_sym, vertex_weighted_laplacian
from .symmetry import Permutation, check_invariance, find_cyclic_invariance, orbit_reduction
from .errors import (
    InfeasibleDesign,
    MalformedInput,
    NotAContrast,
    NotInvariant,
    TooLarge,
    ZeroRow,
)


class _ExitWith(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _parse_p(text: str) -> float:
    if text.strip().lower() == "neg-inf":
        return -math.inf
    try:
        return validate_p(float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _format_p(p: float) -> str:
    return "neg-inf" if p == -math.inf else repr(float(p))


def _load_system(path: str) -> ContrastSystem:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stripped = text.lstrip()
    if stripped.replace(" ", "").startswith("v="):
        return graph_system(parse_edge_list(text))
    return parse_contrast_matrix(text)


def _load_design(path: str, v: int) -> Design:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    tokens = [tok for chunk in text.split(",") for tok in chunk.split()]
    try:
        weights = [float(tok) for tok in tokens]
    except ValueError:
        raise MalformedInput(f"design file {path}: non-numeric weight") from None
    if len(weights) != v:
        raise MalformedInput(f"design file {path}: got {len(weights)} weights, system has v={v}")
    return Design(np.array(weights))


def _criterion_doc(value: CriterionValue) -> dict:
    return {"p": _format_p(value.p), "psi": value.psi, "phi": value.phi, "rank": value.rank}


def _certificate_doc(cert) -> dict:
    return {
        "lhs_max": cert.lhs_max,
        "rhs": cert.rhs,
        "gap": cert.gap,
        "witness": cert.witness_vertex + 1,
    }


def _report(command: str, inputs: dict, **parts) -> dict:
    doc = {
        "command": command,
        "inputs": inputs,
        "design": parts.pop("design", None),
        "criterion": parts.pop("criterion", None),
        "spectrum": parts.pop("spectrum", None),
        "certificate": parts.pop("certificate", None),
        "symmetry": parts.pop("symmetry", None),
        "oracle": parts.pop("oracle", None),
    }
    doc.update(parts)
    return doc


def _cmd_eval(args) -> tuple[dict, int]:
    system = _load_system(args.q)
    design = _load_design(args.w, system.v)
    rank = rank_of(system, args.rank_tol)
    value = psi_p(system, design, args.p, rank=rank, rank_tol=args.rank_tol)
    spectrum = eigenvalues_sym(covariance_matrix(system, design), args.rank_tol)
    extra = {}
    graph = detect_pairwise(system)
    if graph is not None:
        lap = eigenvalues_sym(vertex_weighted_laplacian(graph, design), args.rank_tol)
        extra["laplacian_spectrum"] = [float(x) for x in lap.values]
    doc = _report(
        "eval",
        {"q": args.q, "w": args.w, "p": _format_p(args.p), "rank_tol": args.rank_tol or default_rank_tol()},
        design=[float(x) for x in design.w],
        criterion=_criterion_doc(value),
        spectrum=[float(x) for x in spectrum.values],
        **extra,
    )
    return doc, 0


def _parse_perm_arg(text: str, v: int) -> Permutation:
    try:
        perm = Permutation.from_one_line(text)
    except ValueError as exc:
        raise _ExitWith(5, f"invalid permutation: {exc}") from None
    if perm.v != v:
        raise _ExitWith(5, f"permutation has {perm.v} entries, system has v={v}")
    return perm


def _closed_form_for(system: ContrastSystem, p: float):
    """Closed-form dispatch; returns (result, method) or (None, None)."""
    if p == -1.0:
        result = a_optimal(system)
        return result, result.method
    if p == -math.inf:
        graph = detect_pairwise(system)
        if graph is not None and classify(graph).bipartition is not None:
            result = e_optimal_bipartite(graph)
            return result, result.method
        return None, None
    if p == 0.0 and rank_of(system) == system.v - 1:
        result = d_optimal_uniform(system)
        return result, result.method
    return None, None


def _cmd_optimize(args) -> tuple[dict, int]:
    system = _load_system(args.q)
    exit_code = 0
    orbits = None
    if args.perm is not None:
        perm = _parse_perm_arg(args.perm, system.v)
        try:
            orbits = orbit_reduction(system, perm)
        except NotInvariant as exc:
            raise _ExitWith(5, f"permutation rejected: {exc}") from None

    closed, method = (None, None)
    if args.method in ("closed", "auto"):
        closed, method = _closed_form_for(system, args.p)
        if closed is None and args.method == "closed":
            raise _ExitWith(2, f"no closed form applies for p={_format_p(args.p)} on this system")

    if closed is not None:
        design, criterion = closed.design, closed.criterion
        iterations, converged = 0, True
    else:
        method = "numeric"
        opts = OptimizeOptions(tol=args.tol, max_iter=args.max_iter, seed=args.seed, orbits=orbits)
        result = optimize_phi_p(system, args.p, opts)
        design, criterion = result.design, result.criterion
        iterations, converged = result.iterations, result.converged
        if not converged:
            exit_code = 4
            print("warning: optimizer did not converge within its budget", file=sys.stderr)

    certificate = e_certificate(system, design) if args.p == -math.inf else None
    spectrum = eigenvalues_sym(covariance_matrix(system, design))
    doc = _report(
        "optimize",
        {
            "q": args.q,
            "p": _format_p(args.p),
            "method": args.method,
            "tol": args.tol,
            "max_iter": args.max_iter,
            "seed": args.seed,
            "perm": args.perm,
        },
        design=[float(x) for x in design.w],
        criterion=_criterion_doc(criterion),
        spectrum=[float(x) for x in spectrum.values],
        certificate=_certificate_doc(certificate) if certificate else None,
        optimizer={"method": method, "iterations": iterations, "converged": converged},
    )
    return doc, exit_code


def _cmd_symmetry(args) -> tuple[dict, int]:
    system = _load_system(args.q)
    perm_doc = None
    invariant = None
    orbit_of = None
    orbit_count = None
    if args.perm is not None:
        perm = _parse_perm_arg(args.perm, system.v)
        perm_doc = [x + 1 for x in perm.mapping]
        invariant = check_invariance(system, perm)
        if invariant:
            reduction = orbit_reduction(system, perm)
            orbit_of = [x + 1 for x in reduction.orbit_of]
            orbit_count = reduction.orbit_count

    cyclic = None
    if system.v <= args.max_v:
        found = find_cyclic_invariance(system, args.max_v)
        if found is not None:
            cyclic = [x + 1 for x in found.mapping]
    elif args.perm is None:
        raise _ExitWith(6, f"v={system.v} exceeds --max-v={args.max_v}; supply --perm to test a permutation")
    elif invariant and perm is not None and perm.is_cyclic:
        cyclic = perm_doc

    uniform_optimal = cyclic is not None
    conclusion = (
        "uniform design is optimal for every orthogonally invariant criterion"
        if uniform_optimal
        else "no cyclic invariance found"
    )
    doc = _report(
        "symmetry",
        {"q": args.q, "max_v": args.max_v, "perm": args.perm},
        symmetry={
            "perm": perm_doc,
            "perm_invariant": invariant,
            "orbit_of": orbit_of,
            "orbit_count": orbit_count,
            "cyclic": cyclic,
            "uniform_optimal": uniform_optimal,
            "conclusion": conclusion,
        },
    )
    return doc, 0


def _cmd_oracle(args) -> tuple[dict, int]:
    system = _load_system(args.q)
    try:
        if args.mode == "kappa":
            graph = detect_pairwise(system)
            if graph is None:
                raise _ExitWith(2, "kappa mode requires a pairwise-comparison system")
            design = _load_design(args.w, system.v) if args.w else Design.uniform(system.v)
            report = verify_d_identity(graph, design)
            oracle = {
                "mode": "kappa",
                "rank": report.rank,
                "psi0": report.psi_det,
                "kappa": report.forest_total,
                "char_coeff": report.char_coefficient,
                "max_rel_dev": report.max_rel_deviation,
                "passed": report.passed,
            }
            doc = _report(
                "oracle",
                {"q": args.q, "mode": args.mode, "w": args.w},
                design=[float(x) for x in design.w],
                oracle=oracle,
            )
            return doc, 0
        if args.p is None:
            raise _ExitWith(2, "grid mode requires --p")
        design = grid_oracle(system, args.p, args.grid_step)
        rank = rank_of(system)
        value = psi_p(system, design, args.p, rank=rank)
        reference, method = _closed_form_for(system, args.p)
        if reference is None:
            result = optimize_phi_p(system, args.p)
            ref_design, ref_value, method = result.design, result.criterion, "numeric"
        else:
            ref_design, ref_value = reference.design, reference.criterion
        deviation = float(np.abs(design.w - ref_design.w).max())
        oracle = {
            "mode": "grid",
            "step": args.grid_step,
            "psi": value.psi,
            "reference_method": method,
            "reference_design": [float(x) for x in ref_design.w],
            "reference_psi": ref_value.psi,
            "max_coord_dev": deviation,
        }
        doc = _report(
            "oracle",
            {"q": args.q, "mode": args.mode, "p": _format_p(args.p), "grid_step": args.grid_step},
            design=[float(x) for x in design.w],
            criterion=_criterion_doc(value),
            oracle=oracle,
        )
        return doc, 0
    except TooLarge as exc:
        raise _ExitWith(7, f"oracle bound exceeded: {exc}") from None


def _cmd_export_dot(args) -> tuple[dict, int]:
    system = _load_system(args.q)
    graph = detect_pairwise(system)
    if graph is None:
        raise _ExitWith(2, "DOT export requires a pairwise-comparison system")
    design = _load_design(args.w, system.v) if args.w else None
    lines = ["digraph G {"]
    for i in range(graph.v):
        if design is not None:
            alpha = 1.0 / design.w[i]
            lines.append(f'  {i + 1} [label="{i + 1} | a={alpha:.4f}"];')
        else:
            lines.append(f'  {i + 1} [label="{i + 1}"];')
    for a, b in graph.edges:
        lines.append(f"  {a + 1} -> {b + 1};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(text)
    doc = _report(
        "export-dot",
        {"q": args.q, "w": args.w, "o": args.output},
        design=[float(x) for x in design.w] if design is not None else None,
        dot=args.output,
    )
    return doc, 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="odg", description="Optimal treatment proportions for contrast systems")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a criterion at a given design")
    ev.add_argument("--q", required=True, help="coefficient CSV or edge-list file")
    ev.add_argument("--w", required=True, help="design weight file")
    ev.add_argument("--p", required=True, type=_parse_p, help="criterion exponent, float or neg-inf")
    ev.add_argument("--rank-tol", type=float, default=None)
    ev.set_defaults(handler=_cmd_eval)

    opt = sub.add_parser("optimize", help="find an optimal design")
    opt.add_argument("--q", required=True)
    opt.add_argument("--p", required=True, type=_parse_p)
    opt.add_argument("--method", choices=("closed", "numeric", "auto"), default="auto")
    opt.add_argument("--tol", type=float, default=1e-8)
    opt.add_argument("--max-iter", type=int, default=10000)
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--perm", default=None, help="one-line 1-indexed permutation, e.g. '2 1 3'")
    opt.set_defaults(handler=_cmd_optimize)

    sym = sub.add_parser("symmetry", help="invariance and orbit analysis")
    sym.add_argument("--q", required=True)
    sym.add_argument("--max-v", type=int, default=9)
    sym.add_argument("--perm", default=None)
    sym.set_defaults(handler=_cmd_symmetry)

    orc = sub.add_parser("oracle", help="brute-force cross-checks")
    orc.add_argument("--q", required=True)
    orc.add_argument("--mode", choices=("kappa", "grid"), required=True)
    orc.add_argument("--w", default=None)
    orc.add_argument("--p", type=_parse_p, default=None)
    orc.add_argument("--grid-step", type=float, default=0.01)
    orc.set_defaults(handler=_cmd_oracle)

    dot = sub.add_parser("export-dot", help="emit the comparison graph as DOT")
    dot.add_argument("--q", required=True)
    dot.add_argument("--w", default=None)
    dot.add_argument("-o", "--output", required=True)
    dot.set_defaults(handler=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc, code = args.handler(args)
    except _ExitWith as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except (MalformedInput, NotAContrast, ZeroRow, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleDesign as exc:
        print(f"infeasible design: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: problem files in, CSV/JSON curves and reports out.

Problem files are JSON (schema 1) with complex numbers written as [re, im]
pairs.  All output is deterministic for fixed flags: CSV numbers use 17
significant digits with LF line endings, JSON is emitted with sorted keys.

Exit codes: 0 success, 2 file/schema errors, 3 precondition errors,
4 verification-residual failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .characteristics import (
    DegenerateConic,
    EllipseParams,
    QubitDiscriminationSetup,
    count_rank_segments,
    default_angle_grid,
    prior_sweep,
    qdoc,
    qmoc_coordinates,
    qmoc_ellipse_params,
    reduce_to_qubit,
    verify_ellipse,
)
from .decision import CurveKind, DecisionRegion
from .frames import build_equivalent_system, expand_povm, verify_equivalence
from .helstrom import Priors, helstrom_binary, helstrom_rank_one
from .measurement import Povm, outcome_pmf, rank_threshold, validate_povm
from .operators import DensityOperator, HermitianOperator, density_from_eigensystem

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_RESIDUAL = 4

_ELLIPSE_RESIDUAL_LIMIT = 1e-9
_FRAME_RESIDUAL_LIMIT = 1e-10


class ProblemSchemaError(ValueError):
    """A problem or operator file does not match the documented JSON schema."""


@dataclass(frozen=True)
class Problem:
    dimension: int
    rho0: DensityOperator
    rho1: DensityOperator
    priors: Priors
    qubit_setup: QubitDiscriminationSetup | None


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _parse_complex(value, where: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ProblemSchemaError(f"{where}: complex numbers are [re, im] pairs")
    re, im = value
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ProblemSchemaError(f"{where}: complex parts must be numbers")
    return complex(re, im)


def _parse_matrix(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise ProblemSchemaError(f"{where}: expected {dim} matrix rows")
    mat = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise ProblemSchemaError(f"{where}: row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            mat[i, j] = _parse_complex(entry, f"{where}[{i}][{j}]")
    return mat


def _parse_vector(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise ProblemSchemaError(f"{where}: expected {dim} amplitudes")
    return np.array([_parse_complex(v, f"{where}[{i}]") for i, v in enumerate(value)])


def _parse_density(value, dim: int, where: str) -> DensityOperator:
    if not isinstance(value, dict):
        raise ProblemSchemaError(f"{where}: expected an object")
    has_matrix = "matrix" in value
    has_eigen = "eigenvalues" in value or "eigenvectors" in value
    if has_matrix == has_eigen:
        raise ProblemSchemaError(
            f"{where}: exactly one of 'matrix' or 'eigenvalues'+'eigenvectors' is required"
        )
    if has_matrix:
        return DensityOperator.from_matrix(_parse_matrix(value["matrix"], dim, where))
    if "eigenvalues" not in value or "eigenvectors" not in value:
        raise ProblemSchemaError(f"{where}: eigen form needs both eigenvalues and eigenvectors")
    probs = value["eigenvalues"]
    if not isinstance(probs, list) or len(probs) != dim:
        raise ProblemSchemaError(f"{where}: expected {dim} eigenvalues")
    vectors = value["eigenvectors"]
    if not isinstance(vectors, list) or len(vectors) != dim:
        raise ProblemSchemaError(f"{where}: expected {dim} eigenvectors")
    vecs = [_parse_vector(v, dim, f"{where}.eigenvectors[{i}]") for i, v in enumerate(vectors)]
    return density_from_eigensystem([float(p) for p in probs], vecs)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ProblemSchemaError(f"{where}: missing required field '{key}'")
    return doc[key]


def load_problem(path: str) -> Problem:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ProblemSchemaError(f"{path}: top level must be an object")
    if _require(doc, "schema", path) != 1:
        raise ProblemSchemaError(f"{path}: unsupported schema {doc['schema']!r}")
    dim = _require(doc, "dimension", path)
    if not isinstance(dim, int) or dim < 1:
        raise ProblemSchemaError(f"{path}: dimension must be a positive integer")
    rho0 = _parse_density(_require(doc, "rho0", path), dim, f"{path}:rho0")
    rho1 = _parse_density(_require(doc, "rho1", path), dim, f"{path}:rho1")
    priors_doc = _require(doc, "priors", path)
    if not isinstance(priors_doc, dict) or "p_h1" not in priors_doc:
        raise ProblemSchemaError(f"{path}: priors must be an object with 'p_h1'")
    priors = Priors.from_p_h1(float(priors_doc["p_h1"]))
    setup = None
    if "qubit_setup" in doc:
        qs = doc["qubit_setup"]
        if not isinstance(qs, dict) or not {"alpha", "a0", "b0"} <= qs.keys():
            raise ProblemSchemaError(f"{path}: qubit_setup needs alpha, a0, b0")
        setup = QubitDiscriminationSetup.from_marginals(
            float(qs["alpha"]), float(qs["a0"]), float(qs["b0"])
        )
    return Problem(dim, rho0, rho1, priors, setup)


def load_povm_file(path: str) -> tuple[Povm, DecisionRegion]:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ProblemSchemaError(f"{path}: top level must be an object")
    if _require(doc, "schema", path) != 1:
        raise ProblemSchemaError(f"{path}: unsupported schema {doc['schema']!r}")
    dim = _require(doc, "dimension", path)
    elements = _require(doc, "elements", path)
    if not isinstance(elements, list) or not elements:
        raise ProblemSchemaError(f"{path}: elements must be a nonempty list")
    mats = [_parse_matrix(e, dim, f"{path}:elements[{i}]") for i, e in enumerate(elements)]
    povm = Povm.from_matrices(mats)
    region_doc = doc.get("decision_region", [len(mats) - 1])
    if not isinstance(region_doc, list) or not all(isinstance(i, int) for i in region_doc):
        raise ProblemSchemaError(f"{path}: decision_region must be a list of integers")
    report = validate_povm(povm)
    if not report.passed:
        raise ValueError(
            f"POVM fails validation: completeness residual {report.completeness_residual:.3e}, "
            f"min element eigenvalue {report.min_element_eigenvalue:.3e}"
        )
    return povm, DecisionRegion(frozenset(region_doc))


def _complex_out(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def _matrix_out(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_out(entry) for entry in row] for row in matrix]


def _vector_out(vector: np.ndarray) -> list[list[float]]:
    return [_complex_out(entry) for entry in vector]


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
            f.write("\n")


def cmd_helstrom(args) -> int:
    problem = load_problem(args.problem)
    sol = helstrom_binary(problem.rho0, problem.rho1, problem.priors)
    print(f"min_error = {_fmt(sol.min_error)}")
    print("eigenvalues = [" + ", ".join(_fmt(v) for v in sol.eigen.eigenvalues) + "]")
    print(f"w1_indices = {sorted(sol.w1_indices)}")
    if args.emit_operators:
        _write_json(
            args.emit_operators,
            {
                "schema": 1,
                "dimension": problem.dimension,
                "pi1": _matrix_out(sol.pi1.matrix),
                "pi0": _matrix_out(sol.pi0.matrix),
            },
        )
    return EXIT_OK


def _select_povm(tag: str, problem: Problem) -> Povm:
    if tag == "helstrom":
        povm, _ = helstrom_rank_one(problem.rho0, problem.rho1, problem.priors)
        return povm
    if tag == "canonical":
        return Povm.canonical(problem.dimension)
    povm, _ = load_povm_file(tag)
    return povm


def cmd_qdoc(args) -> int:
    problem = load_problem(args.problem)
    povm = _select_povm(args.povm, problem)
    curve = qdoc(problem.rho0, problem.rho1, povm, args.rule)
    rows = []
    for pt in curve.points:
        if curve.kind is CurveKind.SVT_QDOC:
            param = float(pt.param)
        else:
            param = float(pt.param[1])  # upper end of the threshold interval
        rows.append((param, pt.pf, pt.pd))
    _write_csv(args.out, ["param", "pf", "pd"], rows)
    return EXIT_OK


def cmd_qmoc(args) -> int:
    problem = load_problem(args.problem)
    setup = problem.qubit_setup
    if setup is None:
        setup = reduce_to_qubit(problem.rho0, problem.rho1)
    grid = default_angle_grid(args.samples)
    pf, pd = qmoc_coordinates(setup, grid)
    _write_csv(
        args.out,
        ["theta", "pf", "pd"],
        zip((float(t) for t in grid), (float(x) for x in pf), (float(y) for y in pd)),
    )
    params = qmoc_ellipse_params(setup)
    degenerate = isinstance(params, DegenerateConic)
    if args.ellipse_out:
        payload = {
            "beta": None if degenerate else params.rotation,
            "q": None if degenerate else params.semi_major,
            "r": None if degenerate else params.semi_minor,
            "degenerate": degenerate,
        }
        _write_json(args.ellipse_out, payload)
    if not degenerate:
        residual = verify_ellipse(setup, params, args.samples)
        if residual > _ELLIPSE_RESIDUAL_LIMIT:
            print(
                f"ellipse residual {residual:.3e} exceeds {_ELLIPSE_RESIDUAL_LIMIT:.0e}",
                file=sys.stderr,
            )
            return EXIT_RESIDUAL
    return EXIT_OK


def cmd_sweep_priors(args) -> int:
    problem = load_problem(args.problem)
    if args.grid < 2:
        raise ValueError("--grid must be at least 2 to include both endpoints")
    grid = np.linspace(0.0, 1.0, args.grid)
    curve = prior_sweep(problem.rho0, problem.rho1, grid)
    rows = [
        (float(pt.param), pt.pf, pt.pd, len(pt.region)) for pt in curve.points
    ]
    _write_csv(args.out, ["p_h1", "pf", "pd", "rank_pi1"], rows)
    segments = count_rank_segments(curve, problem.dimension)
    print(f"segments = {segments}")
    return EXIT_OK


def _resolve_counts(spec: str, povm: Povm) -> list[int]:
    ranks = []
    for elem in povm.elements:
        vals = np.linalg.eigvalsh(elem.matrix)
        ranks.append(int(np.sum(vals > rank_threshold(vals))))
    entries = [e.strip() for e in spec.split(",")]
    if len(entries) == 1:
        entries = entries * povm.num_outcomes
    if len(entries) != povm.num_outcomes:
        raise ValueError(
            f"--k needs 1 or {povm.num_outcomes} entries, got {len(entries)}"
        )
    counts = []
    for entry, rank in zip(entries, ranks):
        if entry == "rank":
            counts.append(rank)
        elif entry.startswith("rank+"):
            counts.append(rank + int(entry[5:]))
        else:
            counts.append(int(entry))
    return counts


def cmd_frames(args) -> int:
    doc = _load_json(args.input)
    if not isinstance(doc, dict):
        raise ProblemSchemaError(f"{args.input}: top level must be an object")
    if "elements" in doc:
        povm, base_region = load_povm_file(args.input)
        rho0 = rho1 = DensityOperator.maximally_mixed(povm.dim)
    else:
        problem = load_problem(args.input)
        sol = helstrom_binary(problem.rho0, problem.rho1, problem.priors)
        povm = Povm((sol.pi0, sol.pi1))
        base_region = DecisionRegion(frozenset({1}))
        rho0, rho1 = problem.rho0, problem.rho1

    counts = _resolve_counts(args.k, povm)
    try:
        expansion = expand_povm(povm, counts, args.seed_basis, args.rng_seed)
    except ValueError as exc:
        if "K < rank(E)" in str(exc):
            _write_json(args.out, {"schema": 1, "error": "K < rank(E)", "detail": str(exc)})
            print(f"precondition error: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
        raise

    expanded_povm, expanded_region = build_equivalent_system(expansion, base_region)
    grouped = np.zeros((povm.dim, povm.dim), dtype=complex)
    for j in sorted(expanded_region.indices):
        grouped += expanded_povm.elements[j].matrix
    base_sum = np.zeros_like(grouped)
    for m in sorted(base_region.indices):
        base_sum += povm.elements[m].matrix
    grouping_residual = float(np.max(np.abs(grouped - base_sum)))
    deviation = verify_equivalence(
        (povm, base_region), (expanded_povm, expanded_region), rho0, rho1
    )
    residuals = {
        "resolution": expansion.resolution_residuals(),
        "coefficient": expansion.coefficient_residuals(),
        "pooled_parseval": expansion.pooled_parseval_residual(),
        "grouping": grouping_residual,
        "equivalence_deviation": deviation,
    }
    payload = {
        "schema": 1,
        "dimension": povm.dim,
        "counts": counts,
        "seed_basis": args.seed_basis,
        "rng_seed": args.rng_seed,
        "frames": [[_vector_out(v) for v in frame] for frame in expansion.frames],
        "a_matrices": [_matrix_out(a) for a in expansion.a_matrices],
        "residuals": residuals,
        "regions": {
            "source": sorted(base_region.indices),
            "expanded": sorted(expanded_region.indices),
        },
    }
    _write_json(args.out, payload)
    worst = max(
        max(residuals["resolution"]),
        max(residuals["coefficient"]),
        residuals["pooled_parseval"],
        grouping_residual,
        deviation,
    )
    if worst > _FRAME_RESIDUAL_LIMIT:
        print(
            f"residual {worst:.3e} exceeds {_FRAME_RESIDUAL_LIMIT:.0e}", file=sys.stderr
        )
        return EXIT_RESIDUAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdet",
        description="Quantum binary hypothesis testing: optimal measurements, "
        "operating characteristics, and frame-based measurement synthesis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("helstrom", help="minimum-error measurement for a problem file")
    p.add_argument("problem")
    p.add_argument("--emit-operators", metavar="PATH", help="write the projectors as JSON")
    p.set_defaults(func=cmd_helstrom)

    p = sub.add_parser("qdoc", help="decision operating characteristic as CSV")
    p.add_argument("problem")
    p.add_argument("--rule", choices=["svt", "lrt"], required=True)
    p.add_argument(
        "--povm",
        default="canonical",
        help="'helstrom', 'canonical', or a path to a POVM JSON file",
    )
    p.add_argument("--out", required=True, metavar="CSV")
    p.set_defaults(func=cmd_qdoc)

    p = sub.add_parser("qmoc", help="measurement operating characteristic as CSV")
    p.add_argument("problem")
    p.add_argument("--samples", type=int, default=720)
    p.add_argument("--out", required=True, metavar="CSV")
    p.add_argument("--ellipse-out", metavar="JSON")
    p.set_defaults(func=cmd_qmoc)

    p = sub.add_parser("sweep-priors", help="optimal operating points over a prior grid")
    p.add_argument("problem")
    p.add_argument("--grid", type=int, default=101, help="number of grid points in [0, 1]")
    p.add_argument("--out", required=True, metavar="CSV")
    p.set_defaults(func=cmd_sweep_priors)

    p = sub.add_parser("frames", help="expand a POVM into rank-one Parseval frames")
    p.add_argument("input", help="problem JSON (expands the optimal projectors) or POVM JSON")
    p.add_argument(
        "--k",
        default="rank",
        help="per-element vector counts: comma list of INT, 'rank', or 'rank+INT'",
    )
    p.add_argument("--seed-basis", choices=["canonical", "dft", "haar"], default="canonical")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="JSON")
    p.set_defaults(func=cmd_frames)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except json.JSONDecodeError as exc:
        print(f"schema error: invalid JSON (line {exc.lineno}): {exc.msg}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValueError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

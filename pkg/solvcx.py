"""
solvcx command line.

    python solvcx.py catalog
    python solvcx.py integrable data/j0.json
    python solvcx.py lattice data/example3.json --pretty
    python solvcx.py h1 data/example2.json
    python solvcx.py pseudokahler data/example3.json
    python solvcx.py lemma2 --random 500 --seed 7

Reports go to stdout as sorted-key JSON, logs go to stderr.
Exit codes: 0 pass, 1 checked failure, 2 input error.
"""

import argparse
import hashlib
import json
import os
import sys

from typing import Optional, Union

import numpy as np

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from complex_structures import (
    StructureFile,
    h_from_j,
    is_subalgebra,
    j_from_subspace,
    nijenhuis_witness,
)
from config import DATA_DIR, DEFAULT_SEED, DEFAULT_TOL, LOG_LEVEL
from errors import NotSubalgebraError, SolvcxError, SpecError
from invariant_frames import FrameInput, FramePair, lemma2_verify, random_frame_pair
from lattices import classify, parse_spec, verify_spec
from lie_core import (
    AlgebraFile,
    ComplexifiedAlgebra,
    catalog,
    derived_and_central_series,
    is_unimodular,
    jacobi_check,
    load_algebra,
)
from pseudokahler import pk_exists, pk_summary
from winkelmann import h1, h1_lie

INPUT_ERRORS = (SolvcxError, ValidationError, json.JSONDecodeError, OSError)


class RunReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    command: str
    inputs_digest: str
    results: dict
    passed: bool = Field(alias="pass")

    def to_json(self, pretty: bool = False) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True, indent=2 if pretty else None)


def inputs_digest(command: str, inputs) -> str:
    canonical = json.dumps({"command": command, "inputs": inputs}, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


def _vector_json(vec) -> list:
    if isinstance(vec, tuple):
        return [str(c) for c in vec]
    return [float(c) for c in np.real_if_close(np.asarray(vec))]


def run_catalog(tol: float = DEFAULT_TOL) -> RunReport:
    entries = []
    for kind, entry in catalog().items():
        g = entry.complex_algebra
        series = derived_and_central_series(g)
        entries.append(
            {
                **entry.describe(),
                "jacobi": jacobi_check(g) and jacobi_check(entry.real_form),
                "unimodular": is_unimodular(g),
                "derived_series": list(series.derived),
                "lower_central_series": list(series.lower_central),
                "h1_lie": h1_lie(g),
            }
        )
    passed = all(e["jacobi"] and e["unimodular"] for e in entries)
    return RunReport(command="catalog", inputs_digest=inputs_digest("catalog", {"tol": tol}), results={"entries": entries}, passed=passed)


def run_integrable(structure: dict, algebra: Union[str, dict, None] = None, tol: float = DEFAULT_TOL) -> RunReport:
    sf = StructureFile.model_validate(structure)
    source = algebra if algebra is not None else sf.algebra
    if isinstance(source, str) and not source.startswith("catalog:"):
        source = _resolve(source)
    g = AlgebraFile.model_validate(source).to_algebra() if isinstance(source, dict) else load_algebra(source)
    J = sf.to_structure()

    witness = nijenhuis_witness(g, J, tol)
    h = h_from_j(g, J, tol)
    subalgebra = is_subalgebra(ComplexifiedAlgebra(g), h, tol)
    results = {
        "integrable": witness is None,
        "subalgebra": subalgebra,
        "equivalence_holds": (witness is None) == subalgebra,
        "h_basis": h.to_pairs(),
        "witness": None,
    }
    if witness is not None:
        i, j, value = witness
        results["witness"] = {"pair": [g.basis_labels[i], g.basis_labels[j]], "value": _vector_json(value)}
    else:
        results["roundtrip"] = j_from_subspace(h, g.dim, tol) == J

    passed = results["integrable"] and results["equivalence_holds"] and results.get("roundtrip", False)
    inputs = {"structure": structure, "algebra": source, "tol": tol}
    return RunReport(command="integrable", inputs_digest=inputs_digest("integrable", inputs), results=results, passed=passed)


def run_lattice(spec_data: dict, tol: float = DEFAULT_TOL) -> RunReport:
    spec = parse_spec(spec_data)
    report = verify_spec(spec, tol)
    results = {"report": report.model_dump(mode="json"), "classification": None}
    if report.valid:
        kind = classify(spec, tol)
        results["classification"] = kind.value
        results["h1"] = h1(spec, tol).model_dump(mode="json")
        results["pk_exists"] = pk_exists(kind)
    inputs = {"spec": spec_data, "tol": tol}
    return RunReport(command="lattice", inputs_digest=inputs_digest("lattice", inputs), results=results, passed=report.valid)


def run_h1(spec_data: dict, tol: float = DEFAULT_TOL) -> RunReport:
    report = h1(parse_spec(spec_data), tol)
    inputs = {"spec": spec_data, "tol": tol}
    return RunReport(command="h1", inputs_digest=inputs_digest("h1", inputs), results=report.model_dump(mode="json"), passed=True)


def run_pseudokahler(spec_data: dict, tol: float = DEFAULT_TOL) -> RunReport:
    summary = pk_summary(parse_spec(spec_data), tol)
    passed = summary["compatible"] and summary.get("omega_invariant", summary["pk_exists"]) == summary["pk_exists"]
    inputs = {"spec": spec_data, "tol": tol}
    return RunReport(command="pseudokahler", inputs_digest=inputs_digest("pseudokahler", inputs), results=summary, passed=passed)


def run_lemma2(
    frame: Optional[dict] = None,
    random: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> RunReport:
    if random is not None:
        if random < 1:
            raise SpecError("--random needs a positive sample count")
        rng = np.random.default_rng(seed)
        frames = [random_frame_pair(rng) for _ in range(random)]
    elif frame is not None:
        frames = [FrameInput.model_validate(frame).to_frame()]
    else:
        frames = [FramePair([[1, 0], [0, 1]], [[int(i == j) for j in range(4)] for i in range(4)])]

    samples = []
    for fp in frames:
        try:
            report = lemma2_verify(fp, tol)
        except NotSubalgebraError as e:
            samples.append({"frame": fp.to_json(), "closure": False, "valid": False, "error": str(e)})
            continue
        samples.append({"frame": fp.to_json(), "closure": True, **report.model_dump(mode="json")})
    passed_count = sum(s["valid"] for s in samples)
    logger.info(f"lemma2: {passed_count}/{len(samples)} frames pass")

    results = {"samples": samples, "passed": passed_count, "total": len(samples)}
    inputs = {"frame": frame, "random": random, "seed": seed, "tol": tol}
    return RunReport(command="lemma2", inputs_digest=inputs_digest("lemma2", inputs), results=results, passed=passed_count == len(samples))


def _resolve(path: str) -> str:
    if not os.path.exists(path) and os.path.exists(os.path.join(DATA_DIR, path)):
        return os.path.join(DATA_DIR, path)
    return path


def _read_json(path: str) -> dict:
    with open(_resolve(path)) as f:
        return json.load(f)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numeric tolerance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized commands")
    common.add_argument("--json", dest="json_path", help="also write the report to this path")
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")

    parser = argparse.ArgumentParser(prog="solvcx", description="Three-dimensional complex solvmanifolds")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", parents=[common], help="list the algebra types")

    p = sub.add_parser("integrable", parents=[common], help="integrability of an almost complex structure")
    p.add_argument("structure", help="JSON almost complex structure")
    p.add_argument("--algebra", help="JSON algebra file or catalog:<kind>[:real]")

    for name, text in (
        ("lattice", "verify and classify a lattice spec"),
        ("h1", "dim H^1(M, O) of a lattice spec"),
        ("pseudokahler", "pseudo-Kahler existence for a lattice spec"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("spec", help="JSON lattice spec")

    p = sub.add_parser("lemma2", parents=[common], help="frame conjugacy check")
    p.add_argument("frame", nargs="?", help="JSON frame pair {Q, P}; Q = P = I when omitted")
    p.add_argument("--random", type=int, help="check this many random valid frames instead")
    return parser


def dispatch(args) -> RunReport:
    if args.command == "catalog":
        return run_catalog(args.tol)
    if args.command == "integrable":
        return run_integrable(_read_json(args.structure), args.algebra, args.tol)
    if args.command == "lattice":
        return run_lattice(_read_json(args.spec), args.tol)
    if args.command == "h1":
        return run_h1(_read_json(args.spec), args.tol)
    if args.command == "pseudokahler":
        return run_pseudokahler(_read_json(args.spec), args.tol)
    frame = _read_json(args.frame) if args.frame else None
    return run_lemma2(frame, args.random, args.seed, args.tol)


def main(argv=None) -> int:
    logger.remove()
    logger.add(sys.stderr, level=LOG_LEVEL)

    args = build_parser().parse_args(argv)
    try:
        report = dispatch(args)
    except INPUT_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return 2

    text = report.to_json(args.pretty)
    print(text)
    if args.json_path:
        with open(args.json_path, "w") as f:
            f.write(text + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

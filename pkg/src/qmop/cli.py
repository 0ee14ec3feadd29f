"""Command-line entry point.

Every command prints one canonical JSON document. Exit codes: 0 when a
question was decided (or a report produced), 2 when a bounded search found
nothing and so says nothing, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from . import io as qio
from .exact import DimensionError, Matrix
from .measurement import (
    AllOccur,
    ImpossibleOutcomeError,
    State,
    decide_cmop,
    find_empty_ports,
    find_unobservable_mps,
    mps_amplitude,
    sequence_probability,
)
from .mortality import (
    DEFAULT_MAX_CLOSURE,
    Inconclusive,
    Mortal,
    ResourceLimitError,
    bounded_mortality_search,
    decide_nonneg_mortality,
)
from .pcp import check_encoding_correspondence, encode_pcp, solve_pcp_bounded
from .reduction import build_kraus_from_mmp, compute_probability_gap, validate_device

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class CommandResult:
    status: str  # decided | inconclusive | error
    payload: dict

    @property
    def exit_code(self) -> int:
        return {"decided": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE}.get(self.status, EXIT_ERROR)


def _load(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError("io_error", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("malformed_json", f"{path}: {exc}") from None


def _write(path: str, doc: Any) -> None:
    try:
        Path(path).write_text(qio.dumps(doc) + "\n", encoding="utf-8")
    except OSError as exc:
        raise CliError("io_error", f"cannot write {path}: {exc.strerror}") from None


def _parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError("invalid_word", f"word must be comma-separated integers, got {text!r}") from None


def _check_word(word: Sequence[int], k: int) -> None:
    bad = [j for j in word if not 1 <= j <= k]
    if bad:
        raise CliError("index_out_of_range", f"outcome indices {bad} outside 1..{k}")


def _words_json(words) -> list[list[int]]:
    return [list(w) for w in words]


def cmd_mortal(args) -> CommandResult:
    inst = qio.mmp_from_json(_load(args.input))
    if args.nonneg:
        if not inst.is_nonnegative():
            raise CliError("negative_entry", "--nonneg needs entrywise non-negative generators")
        verdict = decide_nonneg_mortality(inst, max_elements=args.max_elements)
    else:
        verdict = bounded_mortality_search(inst, args.max_depth)
    if isinstance(verdict, Mortal):
        return CommandResult("decided", {"verdict": "mortal", "witness": list(verdict.witness)})
    if isinstance(verdict, Inconclusive):
        return CommandResult("inconclusive", {"verdict": "inconclusive", "depth": verdict.depth_searched})
    return CommandResult("decided", {"verdict": "immortal"})


def cmd_reduce(args) -> CommandResult:
    inst = qio.mmp_from_json(_load(args.input))
    try:
        cert = build_kraus_from_mmp(inst)
    except ValueError as exc:
        raise CliError("schema_violation", str(exc)) from None
    device_doc = qio.device_to_json(cert.device)
    if args.certificate:
        _write(args.certificate, qio.certificate_to_json(cert))
    if args.output:
        _write(args.output, device_doc)
        delta, n = compute_probability_gap(cert.device)
        return CommandResult("decided", {
            "c": cert.c,
            "delta": qio.scalar_to_json(delta),
            "dim": cert.device.dim,
            "k": cert.device.k,
            "valid": bool(validate_device(cert.device)),
        })
    return CommandResult("decided", device_doc)


def _load_state(spec: str, dim: int) -> State | None:
    if spec == "mixed":
        return None
    if spec.startswith("factor:"):
        g = qio.matrix_from_json(_load(spec[len("factor:"):]))
        if g.cols != dim:
            raise CliError("dimension_mismatch", f"factor has {g.cols} columns, device dimension is {dim}")
        return State.from_factor(g)
    raise CliError("invalid_state", "state must be 'mixed' or 'factor:<matrix.json>'")


def cmd_simulate_prob(args) -> CommandResult:
    dev = qio.device_from_json(_load(args.device))
    word = _parse_word(args.word)
    _check_word(word, dev.k)
    state = _load_state(args.state, dev.dim)
    p = sequence_probability(dev, word, state)
    return CommandResult("decided", {"probability": qio.scalar_to_json(p), "word": list(word)})


def cmd_simulate_empty_ports(args) -> CommandResult:
    dev = qio.device_from_json(_load(args.device))
    report = find_empty_ports(dev, args.max_depth, max_words=args.max_words)
    payload = {"exhausted": report.exhausted, "max_depth": report.max_depth, "words": _words_json(report.words)}
    status = "decided" if report.words or report.exhausted else "inconclusive"
    return CommandResult(status, payload)


def cmd_simulate_validate(args) -> CommandResult:
    dev = qio.device_from_json(_load(args.device))
    report = validate_device(dev)
    payload: dict = {"ok": report.ok}
    if not report.ok:
        payload["difference"] = qio.matrix_to_json(report.difference)
    delta, n = compute_probability_gap(dev)
    payload.update({"delta": qio.scalar_to_json(delta), "N": n})
    return CommandResult("decided", payload)


def cmd_cmop_decide(args) -> CommandResult:
    cdev = qio.cdev_from_json(_load(args.input))
    verdict = decide_cmop(cdev, max_elements=args.max_elements)
    if isinstance(verdict, AllOccur):
        return CommandResult("decided", {"verdict": "all_occur"})
    return CommandResult("decided", {"verdict": "exists_empty_port", "witness": list(verdict.witness)})


def cmd_mps_search(args) -> CommandResult:
    fam = qio.mps_from_json(_load(args.input))
    result = find_unobservable_mps(fam, args.max_depth, max_words=args.max_words)
    payload = {"max_depth": result.max_depth, "words": _words_json(result.words)}
    return CommandResult("decided" if result.words else "inconclusive", payload)


def cmd_mps_amplitude(args) -> CommandResult:
    fam = qio.mps_from_json(_load(args.input))
    word = _parse_word(args.word)
    _check_word(word, fam.k)
    return CommandResult("decided", {"amplitude": qio.scalar_to_json(mps_amplitude(fam, word)), "word": list(word)})


def cmd_pcp_encode(args) -> CommandResult:
    inst = qio.pcp_from_json(_load(args.input))
    doc = qio.mmp_to_json(encode_pcp(inst))
    if args.output:
        _write(args.output, doc)
        return CommandResult("decided", {"generators": len(doc["matrices"]), "order": "X letters, Y letters, B"})
    return CommandResult("decided", doc)


def cmd_pcp_check(args) -> CommandResult:
    inst = qio.pcp_from_json(_load(args.input))
    report = check_encoding_correspondence(inst, args.max_len)
    return CommandResult("decided", {
        "checked": report.checked,
        "max_len": report.max_len,
        "mismatches": ["".join(w) for w in report.mismatches],
        "ok": report.ok,
        "solutions": ["".join(w) for w in report.solutions],
    })


def cmd_pcp_solve(args) -> CommandResult:
    inst = qio.pcp_from_json(_load(args.input))
    sol = solve_pcp_bounded(inst, args.max_len)
    if sol is None:
        return CommandResult("inconclusive", {"max_len": args.max_len, "solution": None})
    return CommandResult("decided", {"solution": list(sol)})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmop", description="Matrix mortality and measurement occurrence tools.")
    parser.add_argument("--version", action="version", version=f"qmop {__version__}")
    parser.add_argument("--schema", choices=sorted(qio.SCHEMAS), help="print a JSON schema and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("mortal", help="search or decide mortality of a matrix semigroup")
    p.add_argument("--input", required=True)
    p.add_argument("--nonneg", action="store_true", help="complete decision for non-negative generators")
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_CLOSURE)
    p.set_defaults(func=cmd_mortal)

    p = sub.add_parser("reduce", help="build the 9-outcome measurement device from 8 3x3 matrices")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--certificate")
    p.set_defaults(func=cmd_reduce)

    sim = sub.add_parser("simulate", help="sequential quantum measurements").add_subparsers(dest="action")
    p = sim.add_parser("prob")
    p.add_argument("--device", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--state", default="mixed")
    p.set_defaults(func=cmd_simulate_prob)
    p = sim.add_parser("empty-ports")
    p.add_argument("--device", required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--max-words", type=int, default=2 ** 20)
    p.set_defaults(func=cmd_simulate_empty_ports)
    p = sim.add_parser("validate")
    p.add_argument("--device", required=True)
    p.set_defaults(func=cmd_simulate_validate)

    cm = sub.add_parser("cmop", help="classical measurement occurrence").add_subparsers(dest="action")
    p = cm.add_parser("decide")
    p.add_argument("--input", required=True)
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_CLOSURE)
    p.set_defaults(func=cmd_cmop_decide)

    mps = sub.add_parser("mps", help="matrix-product-state outcome search").add_subparsers(dest="action")
    p = mps.add_parser("search")
    p.add_argument("--input", required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--max-words", type=int, default=2 ** 20)
    p.set_defaults(func=cmd_mps_search)
    p = mps.add_parser("amplitude")
    p.add_argument("--input", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_mps_amplitude)

    pc = sub.add_parser("pcp", help="Post correspondence encoding").add_subparsers(dest="action")
    p = pc.add_parser("encode")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_pcp_encode)
    for name, func in (("check", cmd_pcp_check), ("solve", cmd_pcp_solve)):
        p = pc.add_parser(name)
        p.add_argument("--input", required=True)
        p.add_argument("--max-len", type=int, required=True)
        p.set_defaults(func=func)
    return parser


def run(argv: Sequence[str] | None = None) -> CommandResult:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        return CommandResult("decided", qio.SCHEMAS[args.schema])
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return CommandResult("error", {"error": {"code": "usage", "message": "missing command"}})
    for flag in ("max_depth", "max_len"):
        if getattr(args, flag, 1) < 1:
            return CommandResult("error", {"error": {"code": "invalid_argument", "message": f"--{flag.replace('_', '-')} must be >= 1"}})
    try:
        return args.func(args)
    except CliError as exc:
        code, message = exc.code, str(exc)
    except qio.SchemaError as exc:
        code, message = "schema_violation", str(exc)
    except ResourceLimitError as exc:
        code, message = "resource_limit", str(exc)
    except (ImpossibleOutcomeError, DimensionError, ValueError, TypeError, IndexError) as exc:
        code, message = "invalid_input", str(exc)
    return CommandResult("error", {"error": {"code": code, "message": message}})


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    print(qio.dumps(result.payload))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

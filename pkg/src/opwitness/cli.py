"""Command-line front end.

Exit codes: 0 success, 1 usage/format error or failed reproduction,
2 channel not detectable, 3 threshold could not be computed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import config
from .channels import (
    GATES,
    ChannelError,
    depolarize_mix,
    describe,
    gate_channel,
    load_channel,
    matrix_to_json,
)
from .choi import ORDERING, SIDE_A, choi_state
from .linalg import DimensionError, partial_transpose
from .noise import ThresholdError, npt_threshold, resource_free_threshold, witness_threshold
from .reference import SLOT_ORDERS, compare_mu_pattern, expected_mu_pattern
from .reproduce import Reproduction, format_report
from .witness import (
    NotDetectableError,
    Witness,
    build_witness,
    estimate_witness,
    evaluate,
    mu_decompose,
    parse_selector,
    pauli_decompose,
    validate_on_separable,
)

EXIT_OK, EXIT_USAGE, EXIT_NOT_DETECTABLE, EXIT_THRESHOLD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def matrix_document(m: np.ndarray, dims, ordering: str = ORDERING, **extra) -> dict:
    doc = {"dims": list(dims), "ordering": ordering, "matrix": matrix_to_json(m)}
    doc.update(extra)
    return doc


def witness_document(w: Witness) -> dict:
    return matrix_document(
        w.matrix,
        w.dims,
        eigenvalue=w.eigenvalue,
        bipartition=[list(w.bipartition[0]), list(w.bipartition[1])],
        provenance=w.provenance,
    )


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=1) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _channel(args):
    if args.gate:
        return gate_channel(args.gate)
    return load_channel(args.channel)


def _partition(text: str) -> tuple[int, ...]:
    return tuple(int(k) for k in text.split(","))


def _witness(args):
    ch = _channel(args)
    rho = choi_state(ch)
    return ch, rho, build_witness(rho, _partition(args.partition), parse_selector(args.selector))


def cmd_gates(args) -> int:
    for name in GATES:
        print(name)
    return EXIT_OK


def cmd_choi(args) -> int:
    rho = choi_state(_channel(args))
    m = rho.matrix
    if args.pt:
        m = partial_transpose(m, rho.dims, SIDE_A)
    _emit(matrix_document(args.scale * m, rho.dims, source=rho.source, scale=args.scale,
                          partial_transpose=[list(SIDE_A)] if args.pt else []), args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    ch, rho, w = _witness(args)
    print(f"channel: {describe(ch)}")
    print(f"eigenvalue: {w.eigenvalue:.15g} (multiplicity {w.provenance['multiplicity']})")
    print(f"Tr(W rho): {evaluate(w, rho.matrix):.15g}")
    print(f"Tr(W): {np.trace(w.matrix).real:.15g}")
    if args.out:
        _emit(witness_document(w), args.out)
    return EXIT_OK


def cmd_threshold(args) -> int:
    ch = _channel(args)
    if args.mode == "choi":
        rho = choi_state(ch)
        w = build_witness(rho, SIDE_A, parse_selector(args.selector))
        report = witness_threshold(ch, w)
    elif args.mode == "npt":
        report = npt_threshold(ch, SIDE_A, tol=args.bisect_tol)
    else:
        if not args.input:
            raise ValueError("--mode resource-free needs --input (e.g. +0, 01, 00)")
        report = resource_free_threshold(ch, args.input)
    doc = report.to_dict()
    doc["affine"] = {"value_at_p1": report.witness_value_at_p1, "value_at_p0": report.witness_value_at_p0}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    ch, rho, w = _witness(args)
    lines = []
    if args.basis == "pauli":
        dec = pauli_decompose(w)
        terms = dec.nonzero(1e-12)
        err = float(np.linalg.norm(dec.reconstruct() - w.matrix))
        lines.append(f"pauli terms: {len(terms)}")
        lines.append(f"reconstruction error: {err:.3e}")
        doc = {"basis": "pauli", "reconstruction_error": err,
               "coefficients": {s: c for s, c in sorted(terms.items())}}
    else:
        slots = SLOT_ORDERS[args.slots]
        dec = mu_decompose(w, slots)
        err = float(np.linalg.norm(dec.reconstruct() - w.matrix))
        coeffs = {t: c for t, c in sorted(dec.coefficients.items()) if abs(c) > 1e-12}
        lines.append(f"mu terms: {len(coeffs)} (slots {args.slots})")
        lines.append(f"reconstruction error: {err:.3e}")
        for t, c in coeffs.items():
            lines.append(f"  ({','.join(map(str, t))})  {c.real:+.6g}{c.imag:+.6g}i")
        doc = {"basis": "mu", "slots": args.slots, "reconstruction_error": err,
               "coefficients": [{"tuple": list(t), "value": [c.real, c.imag]} for t, c in coeffs.items()]}
        if args.gate in ("cnot", "sqrt_swap", "bell"):
            cmp = compare_mu_pattern(args.gate, w, args.slots)
            pos_ref, neg_ref, _ = expected_mu_pattern(args.gate)
            lines.append(f"listed pattern: +{len(pos_ref)} / -{len(neg_ref)}; "
                         f"matched +{cmp.matched_positive} / -{cmp.matched_negative}; "
                         f"{'MATCH' if cmp.match else 'MISMATCH'}")
            for t in sorted(pos_ref | neg_ref):
                ok = t not in cmp.missing_positive and t not in cmp.missing_negative
                lines.append(f"  listed {t}: {'match' if ok else 'mismatch'}")
            lines.extend(f"  {line}" for line in cmp.mismatch_lines() if "not listed" in line or "non-real" in line)
            doc["comparison"] = {"match": cmp.match, "discrepancies": cmp.mismatch_lines()}
    print("\n".join(lines))
    if args.out:
        _emit(doc, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    _, _, w = _witness(args)
    res = validate_on_separable(w, args.samples, args.seed, workers=args.workers)
    print(f"samples: {res.samples}")
    print(f"min Tr(W sigma): {res.min_value:.12e}")
    doc = {"samples": res.samples, "seed": args.seed, "min_value": res.min_value,
           "state_a": [[z.real, z.imag] for z in res.state_a],
           "state_b": [[z.real, z.imag] for z in res.state_b]}
    if args.out:
        _emit(doc, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    ch, rho, w = _witness(args)
    target = rho.matrix if args.p is None else choi_state(depolarize_mix(ch, args.p)).matrix
    est = estimate_witness(w, target, args.shots, args.seed)
    exact = evaluate(w, target)
    print(f"estimate: {est.value:.9f} +- {est.stderr:.3e} ({est.settings} settings)")
    print(f"exact: {exact:.9f}")
    if args.out:
        _emit({"estimate": est.value, "stderr": est.stderr, "settings": est.settings, "exact": exact,
               "shots_per_setting": args.shots, "seed": args.seed, "p": args.p}, args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    checks = Reproduction(samples=args.samples, shots=args.shots, seed=args.seed).run()
    text = format_report(checks)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_USAGE if any(c.failed for c in checks) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opwitness", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", default="", help="tolerance overrides, e.g. herm_tol=1e-9,eig_resid=1e-8")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def channel_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--gate", choices=sorted(GATES))
        src.add_argument("--channel", help="channel JSON file")
        p.add_argument("--out", help="output file (JSON)")
        p.set_defaults(func=func)
        return p

    def witness_opts(p):
        p.add_argument("--selector", default="most_negative",
                       help="most_negative | K | eigenspace | eigenspace:K")
        p.add_argument("--partition", default="0,2", help="transposed subsystems in A,B,A~,B~ order")

    sub.add_parser("gates", help="list registry gates").set_defaults(func=cmd_gates)

    p = channel_cmd("choi", cmd_choi, "write the trace-1 Choi matrix")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--pt", action="store_true", help="partially transpose over A A~ before writing")

    witness_opts(channel_cmd("witness", cmd_witness, "build a witness from a negative PT eigenvector"))

    p = channel_cmd("threshold", cmd_threshold, "depolarizing-noise detection threshold")
    p.add_argument("--mode", choices=["choi", "resource-free", "npt"], default="choi")
    p.add_argument("--input", help="product input for resource-free mode, e.g. +0")
    p.add_argument("--tol", dest="bisect_tol", type=float, default=1e-9)
    p.add_argument("--selector", default="most_negative")

    p = channel_cmd("decompose", cmd_decompose, "decompose the witness into local operators")
    p.add_argument("--basis", choices=["pauli", "mu"], required=True)
    p.add_argument("--slots", choices=list(SLOT_ORDERS), default="A,B,A~,B~")
    witness_opts(p)

    p = channel_cmd("validate", cmd_validate, "minimum witness value over random product states")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    witness_opts(p)

    p = channel_cmd("estimate", cmd_estimate, "shot-based witness estimate")
    p.add_argument("--shots", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p", type=float, default=None, help="mix with depolarizing noise at this p")
    witness_opts(p)

    p = sub.add_parser("reproduce", help="run every reproduction check")
    p.add_argument("--out")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--shots", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    previous = config.get_tolerances()
    try:
        if args.tol:
            config.set_tolerances(**config.parse_overrides(args.tol))
        return args.func(args)
    except NotDetectableError as exc:
        print(f"not detectable: {exc}", file=sys.stderr)
        return EXIT_NOT_DETECTABLE
    except ThresholdError as exc:
        print(f"threshold error: {exc}", file=sys.stderr)
        return EXIT_THRESHOLD
    except (ChannelError, DimensionError, ValueError, OSError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        config.reset_tolerances(previous)


if __name__ == "__main__":
    sys.exit(main())

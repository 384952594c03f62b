"""Command-line front end.

    boolpattern basis I 2 --index 3
    boolpattern product 0101 0001
    boolpattern ket 1000
    boolpattern classify --class F --pattern 1000100010000111
    boolpattern classify --class left:1,1 --g-index 3 --f-index 3
    boolpattern game --bob-class right:1,1 --bob-indices 3,3 --seed 7
    boolpattern verify --max-rank 3

Exit codes: 0 success (or a conclusive verdict), 1 bad input or a failed
self-check, 2 an inconclusive classification.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .classifier import (
    Balanced,
    LeftCluster,
    OracleSpec,
    Promised,
    RightCluster,
    balanced_function,
    classify,
    left_cluster_function,
    parse_class_tag,
    play_game,
    promised_function,
    right_cluster_function,
    run_circuit,
)
from .knowledge import derive_knowledge, enumerate_completions
from .limits import MAX_ENUMERATION_RANK
from .patterns import basis_B, basis_I, extended_product, parse, product
from .statevector import bitstring, pattern_ket, sample
from .verify import run_all

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for "inconclusive".
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(obj, fmt: str) -> None:
    if fmt == "jsonl":
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(json.dumps(obj, indent=2))


def cmd_basis(args) -> int:
    family = basis_I if args.family == "I" else basis_B
    basis = family(args.half_rank)
    indices = [args.index] if args.index is not None else range(len(basis))
    rows = [(i, basis.member(i)) for i in indices]
    if args.format == "text":
        for _, p in rows:
            print(p.format())
    elif args.format == "jsonl":
        for i, p in rows:
            _emit({"index": i, **p.to_json()}, "jsonl")
    elif args.index is not None:
        _emit({"index": args.index, **rows[0][1].to_json()}, "json")
    else:
        _emit(
            {
                "family": args.family,
                "half_rank": args.half_rank,
                "members": [p.format() for _, p in rows],
            },
            "json",
        )
    return EXIT_OK


def cmd_product(args) -> int:
    p, q = parse(args.left), parse(args.right)
    r = product(p, q) if args.kind == "odot" else extended_product(p, q)
    if args.format == "text":
        print(r.format())
    else:
        _emit(r.to_json(), args.format)
    return EXIT_OK


def cmd_ket(args) -> int:
    s = pattern_ket(parse(args.pattern))
    if args.format == "csv":
        print("bitstring,amplitude")
        for i, a in enumerate(s.amplitudes):
            print(f"{bitstring(i, s.num_qubits)},{float(a)!r}")
    elif args.format == "text":
        for i, a in enumerate(s.amplitudes):
            print(f"|{bitstring(i, s.num_qubits)}> {float(a):+.6f}")
    else:
        _emit(s.to_json(), args.format)
    return EXIT_OK


def _oracle_from_selectors(tag, f_index, g_index):
    def need(value, flag):
        if value is None:
            raise ValueError(f"class {tag} needs {flag}")
        return value

    if isinstance(tag, Promised):
        return promised_function(tag.n, need(f_index, "--f-index"))
    if isinstance(tag, Balanced):
        return balanced_function(tag.m, need(g_index, "--g-index"))
    if isinstance(tag, LeftCluster):
        return left_cluster_function(tag.m, tag.n, need(g_index, "--g-index"), need(f_index, "--f-index"))
    return right_cluster_function(tag.n, tag.m, need(f_index, "--f-index"), need(g_index, "--g-index"))


def _classify_one(pattern_text: str | None, args) -> tuple[dict, str, int]:
    if pattern_text is not None:
        if args.f_index is not None or args.g_index is not None:
            raise ValueError("--pattern cannot be combined with --f-index/--g-index")
        pattern = parse(pattern_text)
        tag = parse_class_tag(args.cls, pattern.arity)
    else:
        tag = parse_class_tag(args.cls)
        pattern = _oracle_from_selectors(tag, args.f_index, args.g_index)
    spec = OracleSpec(pattern, tag)
    result = classify(run_circuit(spec), tag)
    report = {"pattern": pattern.format(), **result.to_json()}
    if args.shots is not None:
        report["counts"] = sample(result.distribution, args.shots, args.seed)
    if args.knowledge and result.verdict.kind in ("partial_left", "partial_right"):
        k = derive_knowledge(result)
        completions = enumerate_completions(k) if k.rank <= MAX_ENUMERATION_RANK else None
        report["knowledge"] = k.to_json(completions)
    code = EXIT_OK if result.verdict.conclusive else EXIT_INCONCLUSIVE
    return report, result.distribution.to_csv(), code


def cmd_classify(args) -> int:
    if args.shots is not None and args.shots < 1:
        raise ValueError("--shots must be >= 1")
    if args.patterns_from:
        if args.pattern is not None:
            raise ValueError("--pattern and --patterns-from are mutually exclusive")
        with open(args.patterns_from, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        worst = EXIT_OK
        for line in lines:
            report, _, code = _classify_one(line, args)
            _emit(report, "jsonl")
            worst = max(worst, code)
        return worst
    if args.pattern is None and args.f_index is None and args.g_index is None:
        raise ValueError("give --pattern or index selectors")
    report, table, code = _classify_one(args.pattern, args)
    if args.format == "csv":
        print(f"# verdict={report['verdict']} f_index={report['f_index']} winner={report['winner']}")
        sys.stdout.write(table)
    else:
        _emit(report, args.format)
    return code


def _parse_indices(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"bad index list {text!r}") from None


def cmd_game(args) -> int:
    tag = parse_class_tag(args.bob_class)
    if args.bob_indices is not None and args.bob_index is not None:
        raise ValueError("--bob-index and --bob-indices are mutually exclusive")
    if isinstance(tag, (Promised, Balanced)):
        if args.bob_index is None:
            raise ValueError(f"class {tag} needs --bob-index")
        bob = OracleSpec.promised(tag.n, args.bob_index) if isinstance(tag, Promised) else OracleSpec.balanced(tag.m, args.bob_index)
    else:
        if args.bob_indices is None:
            raise ValueError(f"class {tag} needs --bob-indices")
        first, second = _parse_indices(args.bob_indices)
        if isinstance(tag, LeftCluster):
            bob = OracleSpec.left(tag.m, tag.n, first, second)
        else:
            bob = OracleSpec.right(tag.n, tag.m, first, second)
    result = play_game(bob, args.seed)
    transcript = {
        "announcement": str(tag),
        "queries": 1,
        "shot": result.shot,
        "verdict": result.verdict.kind,
        "f_index": result.verdict.f_index,
        "random_part": result.verdict.random_part,
        "winner": result.winner,
    }
    if args.format == "text":
        print(f"Bob announces {tag}")
        print(f"Alice queries the oracle once and measures {result.shot}")
        print(f"Verdict: {result.verdict}")
        print(f"Winner: {result.winner.capitalize()}")
    else:
        _emit(transcript, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.max_rank < 1:
        raise ValueError("--max-rank must be >= 1")
    results = run_all(args.max_rank)
    for r in results:
        _emit(r.to_json(), "jsonl")
    failed = [r.name for r in results if not r.passed]
    _emit({"summary": True, "max_rank": args.max_rank, "passed": not failed, "failed": failed}, "jsonl")
    return EXIT_ERROR if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boolpattern", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", help="print an imbalanced (I) or balanced (B) pattern basis")
    p.add_argument("family", choices=["I", "B"])
    p.add_argument("half_rank", type=int)
    p.add_argument("--index", type=int)
    p.add_argument("--format", choices=["text", "json", "jsonl"], default="text")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("product", help="block product of two patterns")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--kind", choices=["odot", "star"], default="odot",
                   help="odot: block construction; star: truth-table construction")
    p.add_argument("--format", choices=["text", "json", "jsonl"], default="text")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("ket", help="amplitudes of a pattern ket")
    p.add_argument("pattern")
    p.add_argument("--format", choices=["text", "json", "jsonl", "csv"], default="json")
    p.set_defaults(func=cmd_ket)

    p = sub.add_parser("classify", help="run the classifier circuit on one oracle")
    p.add_argument("--class", dest="cls", required=True,
                   help="F[:n], G[:m], left:m,n or right:n,m")
    p.add_argument("--pattern")
    p.add_argument("--patterns-from", help="file with one pattern per line; emits JSON lines")
    p.add_argument("--f-index", type=int)
    p.add_argument("--g-index", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--knowledge", action="store_true", help="add what a cluster verdict reveals")
    p.add_argument("--format", choices=["json", "jsonl", "csv"], default="json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("game", help="play one round of the classification game")
    p.add_argument("--bob-class", required=True)
    p.add_argument("--bob-index", type=int, help="index within F or G")
    p.add_argument("--bob-indices", help="j,i for left:m,n (g_j * f_i); i,j for right:n,m (f_i * g_j)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "jsonl", "text"], default="json")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("verify", help="run the invariant self-check suite")
    p.add_argument("--max-rank", type=int, default=2, help="largest half rank to sweep")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, IndexError, OSError) as exc:
        print(f"boolpattern: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

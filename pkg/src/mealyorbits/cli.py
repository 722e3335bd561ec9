"""Command-line front end.

Subcommands::

    analyze       full report: structure checks, post-critical data, verdicts
    finite        is the generated group finite?
    transitive    does the group act transitively on every tree level?
    orbit         is the orbit of an eventually periodic infinite word finite?
    postcritical  are orbit sizes along a post-critical sequence bounded?
    export        print one of the two machines as DOT or JSON
    oracle        cross-validate the machines against brute-force enumeration

Automaton arguments are file paths or names of bundled examples
(``mealyorbits analyze seven_states``).  Exit codes: 0 success, 2 unreadable
or malformed input, 3 automaton outside the supported class, 4 the oracle
found a mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .automaton import MealyAutomaton, automaton_from_json, parse_automaton
from .errors import (
    AutomatonFormatError,
    CapExceededError,
    EmptyPostCriticalSetError,
    NotBoundedError,
    NotInvertibleError,
    UnsupportedAutomatonError,
)
from .oracle import cross_check
from .recognizer import (
    analyze,
    classify_omega_orbit,
    classify_postcritical,
    decide_finite,
    decide_level_transitive,
    export_machine,
)
from .structure import is_bounded
from .words import EvPeriodicWord, OmegaWord

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_MISMATCH = 4

# cmd_oracle's check groups, mapped to the fine-grained oracle check names.
ORACLE_CHECKS = {
    "all": ("parts", "labels", "edges", "chain", "eclasses"),
    "partitions": ("chain",),
    "eorbits": ("parts", "edges"),
    "orbits": ("labels", "eclasses"),
}


# -- input plumbing --------------------------------------------------------------


def _read_source(spec: str) -> str:
    """Text of an automaton file; bare names fall back to bundled fixtures."""
    if spec == "-":
        return sys.stdin.read()
    path = Path(spec)
    if path.exists():
        return path.read_text(encoding="utf-8")
    if "/" not in spec and spec in fixtures.names():
        return fixtures.source(spec)
    raise AutomatonFormatError(f"no such file or bundled automaton: {spec}")


def _load_automaton(spec: str) -> MealyAutomaton:
    text = _read_source(spec)
    if text.lstrip().startswith("{"):
        return automaton_from_json(text)
    return parse_automaton(text)


def _load_alias(args, spec: str | None) -> dict[str, str] | None:
    """The rendered-word -> display-name table for this invocation, if any."""
    if getattr(args, "alias", None):
        return json.loads(Path(args.alias).read_text(encoding="utf-8"))
    if spec and "/" not in spec and not Path(spec).exists():
        return fixtures.load_alias(spec)
    return None


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif human:
        print(human)


def _witness_dict(a: MealyAutomaton, lasso) -> dict:
    fmt = a.alphabet.format_word
    return {"preperiod": fmt(lasso.stem), "period": fmt(lasso.cycle)}


def _witness_text(a: MealyAutomaton, lasso) -> str:
    return OmegaWord(lasso.stem, lasso.cycle).render(a.alphabet)


# -- analyze ---------------------------------------------------------------------


def _analysis_report(a: MealyAutomaton, alias) -> tuple[dict, int]:
    """The full report dict, stopping early when a precondition fails."""
    report: dict = {
        "states": list(a.states),
        "alphabet": list(a.alphabet.letters),
        "invertible": a.is_invertible(),
    }
    if not report["invertible"]:
        return report, EXIT_UNSUPPORTED
    report["minimal"] = a.is_minimized()
    m = a.minimize().ensure_trivial_state()
    report["bounded"] = is_bounded(m)
    if not report["bounded"]:
        return report, EXIT_UNSUPPORTED

    ana = analyze(a)
    report["circuit_states"] = list(ana.circuit.states)
    report["is_circuit"] = ana.is_circuit

    if ana.pcs is None:
        report["post_critical"] = {"size": 0, "sequences": []}
        report["group_finite"] = True
        report["level_transitive"] = (
            decide_level_transitive(ana)
            if ana.is_circuit
            else "unsupported: automaton differs from its circuit part"
        )
        return report, EXIT_OK

    rendered = [ana.pcs.render(i) for i in range(len(ana.pcs))]
    pc: dict = {"size": len(rendered), "sequences": rendered}
    if alias:
        pc["names"] = [alias.get(w) for w in rendered]
    report["post_critical"] = pc
    report["identified_extensions"] = len(ana.pcs.ee_pairs)
    report["identified_sequences"] = len(ana.pcs.e_pairs)
    report["chain_depth"] = ana.chain.depth

    fin = decide_finite(ana)
    report["group_finite"] = fin.finite
    if fin.witness is not None:
        report["growth_witness"] = _witness_dict(ana.normalized, fin.witness)
    report["level_transitive"] = (
        decide_level_transitive(ana)
        if ana.is_circuit
        else "unsupported: automaton differs from its circuit part"
    )
    report["machines"] = {
        "Re": {"states": len(ana.re_machine.reachable()), "sha256": ana.re_machine.digest()},
        "R": {"states": len(ana.r_machine.reachable()), "sha256": ana.r_machine.digest()},
    }
    return report, EXIT_OK


def _yesno(flag) -> str:
    if isinstance(flag, bool):
        return "yes" if flag else "no"
    return str(flag)


def _human_report(name: str, rep: dict, a: MealyAutomaton, quiet: bool) -> str:
    if quiet:
        bits = [f"{len(rep['states'])} states"]
        for key in ("invertible", "minimal", "bounded"):
            if rep.get(key) is False:
                bits.append(f"not {key}")
        if "post_critical" in rep:
            bits.append(f"{rep['post_critical']['size']} post-critical")
        if "chain_depth" in rep:
            bits.append(f"depth {rep['chain_depth']}")
        if "group_finite" in rep:
            bits.append("finite group" if rep["group_finite"] else "infinite group")
        if isinstance(rep.get("level_transitive"), bool):
            bits.append(
                "level-transitive" if rep["level_transitive"] else "not level-transitive"
            )
        return f"{name}: " + ", ".join(bits)

    lines = [name]
    lines.append(f"  states:      {len(rep['states'])} ({', '.join(rep['states'])})")
    lines.append(f"  alphabet:    {{{', '.join(rep['alphabet'])}}}")
    lines.append(f"  invertible:  {_yesno(rep['invertible'])}")
    if "minimal" in rep:
        lines.append(f"  minimal:     {_yesno(rep['minimal'])}")
    if "bounded" in rep:
        lines.append(f"  bounded:     {_yesno(rep['bounded'])}")
    if "circuit_states" in rep:
        tail = "whole automaton" if rep["is_circuit"] else ", ".join(rep["circuit_states"])
        lines.append(f"  circuit part: {len(rep['circuit_states'])} states ({tail})")
    if "post_critical" in rep:
        pc = rep["post_critical"]
        lines.append(f"  post-critical sequences: {pc['size']}")
        names = pc.get("names")
        for i, word in enumerate(pc["sequences"]):
            tag = names[i] if names and names[i] else str(i)
            lines.append(f"    #{tag:<3} {word}")
    if "identified_extensions" in rep:
        lines.append(f"  identified extensions: {rep['identified_extensions']} pairs")
        lines.append(f"  identified sequences:  {rep['identified_sequences']} pairs")
        lines.append(f"  partition chain depth: {rep['chain_depth']}")
    if "group_finite" in rep:
        lines.append(f"  group finite: {_yesno(rep['group_finite'])}")
        if "growth_witness" in rep:
            w = rep["growth_witness"]
            word = OmegaWord(tuple(a.alphabet.word(w["preperiod"])),
                             tuple(a.alphabet.word(w["period"]))).render(a.alphabet)
            lines.append(f"    the orbit of {word} grows without bound")
    if "level_transitive" in rep:
        lines.append(f"  level-transitive: {_yesno(rep['level_transitive'])}")
    if "machines" in rep:
        for key in ("Re", "R"):
            mrep = rep["machines"][key]
            lines.append(
                f"  machine {key}: {mrep['states']} states, sha256 {mrep['sha256'][:16]}"
            )
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    worst = EXIT_OK
    reports = []
    for spec in args.automata:
        try:
            a = _load_automaton(spec)
            rep, code = _analysis_report(a, _load_alias(args, spec))
        except (AutomatonFormatError, OSError) as exc:
            print(f"error: {spec}: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_INPUT)
            continue
        except (NotInvertibleError, NotBoundedError) as exc:
            print(f"error: {spec}: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_UNSUPPORTED)
            continue
        worst = max(worst, code)
        if args.json:
            reports.append({"automaton": spec, **rep})
        else:
            print(_human_report(spec, rep, a, args.quiet))
        if code == EXIT_UNSUPPORTED and not args.json:
            print(f"error: {spec}: automaton outside the supported class", file=sys.stderr)
    if args.json and reports:
        doc = reports[0] if len(args.automata) == 1 else reports
        print(json.dumps(doc, indent=2, sort_keys=True))
    return worst


# -- single-verdict commands -------------------------------------------------------


def cmd_finite(args) -> int:
    a = _load_automaton(args.automaton)
    res = decide_finite(a)
    payload: dict = {"finite": res.finite}
    human = "finite" if res.finite else "infinite"
    if res.witness is not None:
        payload["witness"] = _witness_dict(res.analysis.normalized, res.witness)
        if not args.quiet:
            human += ("\n  the orbit of "
                      f"{_witness_text(res.analysis.normalized, res.witness)} "
                      "grows without bound")
    _emit(args, payload, human)
    return EXIT_OK


def cmd_transitive(args) -> int:
    a = _load_automaton(args.automaton)
    verdict = decide_level_transitive(a)
    human = ("yes" if verdict else "no") if args.quiet else (
        "level-transitive" if verdict else "not level-transitive"
    )
    _emit(args, {"level_transitive": verdict}, human)
    return EXIT_OK


def cmd_orbit(args) -> int:
    a = _load_automaton(args.automaton)
    preperiod = a.alphabet.word(args.preperiod)
    period = a.alphabet.word(args.period)
    if not period:
        print("error: --period must be a non-empty word", file=sys.stderr)
        return EXIT_INPUT
    w = OmegaWord(preperiod, period)
    verdict = classify_omega_orbit(a, w)
    payload: dict = {"word": w.render(a.alphabet), "finite": verdict.finite}
    if verdict.finite:
        payload["last_growth_step"] = verdict.last_growth_step
        human = "finite"
        if not args.quiet:
            human += ("\n  orbit sizes stay bounded; the machine run crosses "
                      f"its last growth edge at step {verdict.last_growth_step}"
                      if verdict.last_growth_step else
                      "\n  orbit sizes stay bounded; the machine run never "
                      "crosses a growth edge")
    else:
        payload["witness"] = _witness_dict(a, verdict.witness)
        human = "infinite"
        if not args.quiet:
            human += ("\n  orbit sizes grow without bound; the run enters a "
                      f"growth cycle after {len(verdict.witness.stem)} letters")
    _emit(args, payload, human)
    return EXIT_OK


def cmd_postcritical(args) -> int:
    a = _load_automaton(args.automaton)
    alias = _load_alias(args, args.automaton)
    text = args.word
    if alias:
        backward = {name: word for word, name in alias.items()}
        text = backward.get(text, text)
    p = EvPeriodicWord.parse(text, a.alphabet)
    verdict = classify_postcritical(a, p)
    _emit(args, {"word": p.render(a.alphabet), "growth": verdict}, verdict)
    return EXIT_OK


# -- export and oracle --------------------------------------------------------------


def cmd_export(args) -> int:
    a = _load_automaton(args.automaton)
    ana = analyze(a)
    machine = ana.re_machine if args.machine == "re" else ana.r_machine
    if machine is None:
        raise EmptyPostCriticalSetError(
            "the post-critical set is empty; there is no machine to export"
        )
    print(export_machine(machine, args.format, include_sink=not args.no_sink))
    return EXIT_OK


def cmd_oracle(args) -> int:
    a = _load_automaton(args.automaton)
    level = args.level if args.level is not None else args.max_level
    report = cross_check(a, max_level=level, checks=ORACLE_CHECKS[args.check])
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    elif not args.quiet or not report.ok:
        print(report.summary())
    return EXIT_OK if report.ok else EXIT_MISMATCH


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="verdict only")
    common.add_argument("--alias", metavar="FILE",
                        help="JSON table renaming post-critical sequences in output")
    common.add_argument("--max-level", metavar="N", type=int, default=None,
                        help="cap for brute-force levels (oracle)")

    parser = argparse.ArgumentParser(
        prog="mealyorbits",
        description="Finiteness and orbit growth for bounded invertible Mealy automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("analyze", parents=[common],
                       help="full structure and verdict report")
    p.add_argument("automata", nargs="+", metavar="AUTOMATON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("finite", parents=[common],
                       help="decide finiteness of the generated group")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("transitive", parents=[common],
                       help="decide transitivity on every tree level")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("orbit", parents=[common],
                       help="classify the orbit of an eventually periodic word")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.add_argument("--preperiod", default="", metavar="U",
                   help="finite prefix before the loop (default empty)")
    p.add_argument("--period", required=True, metavar="V",
                   help="letters repeated forever after the prefix")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("postcritical", parents=[common],
                       help="bounded/unbounded growth along a post-critical sequence")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.add_argument("word", metavar="WORD",
                   help='rendered sequence like "(a)^-w ba", or an alias name')
    p.set_defaults(func=cmd_postcritical)

    p = sub.add_parser("export", parents=[common],
                       help="print a machine as DOT or JSON")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.add_argument("--machine", choices=("re", "r"), default="re",
                   help="re: single-trivial-move orbits; r: full orbits")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("--no-sink", action="store_true",
                   help="omit the absorbing dead state")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("oracle", parents=[common],
                       help="cross-validate machines against brute force")
    p.add_argument("automaton", metavar="AUTOMATON")
    p.add_argument("--level", type=int, default=None, metavar="N",
                   help="deepest tree level to enumerate")
    p.add_argument("--check", choices=sorted(ORACLE_CHECKS), default="all")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AutomatonFormatError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotInvertibleError, NotBoundedError, UnsupportedAutomatonError,
            EmptyPostCriticalSetError, CapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


def console_main() -> None:
    sys.exit(main())

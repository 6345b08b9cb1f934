"""Command-line interface.

Exit codes: 0 when the command's primary verdict holds (model valid, checks
pass, problem solvable, oracle agreement clean), 1 when the verdict is
negative, 2 on file or schema errors -- so CI scripts can tell model defects
from negative verdicts.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import dot as dotmod
from .automata import accessible, validate_timed_assumptions
from .comm import build_comm_automaton, render_event
from .errors import ModelError
from .modelio import (
    automaton_to_dict,
    dump_json,
    load_model,
    model_to_dict,
)
from .oracle import brute_check, brute_closed_loop, enumerate_language
from .randgen import random_instance
from .simulation import render_trace, simulate
from .synthesis import (
    SolveReport,
    closed_loop,
    solve_control_problem,
    synthesize_supervisor,
)
from .verification import (
    Condition,
    Verdict,
    check_lm_closure,
    check_network_controllability,
    check_network_joint_observability,
)

SPEC_VERSION = 1


def _write(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _witness_dict(verdict: Verdict) -> Optional[dict]:
    w = verdict.witness
    if w is None:
        return None
    out: dict = {"mu": [render_event(e) for e in w.mu]}
    if w.nu is not None:
        out["nu"] = [render_event(e) for e in w.nu]
    if w.sigma is not None:
        out["sigma"] = w.sigma
    if w.supervisor is not None:
        out["supervisor"] = w.supervisor + 1
    return out


def _verdict_dict(verdict: Verdict) -> dict:
    return {
        "condition": verdict.condition.value,
        "holds": verdict.holds,
        "witness": _witness_dict(verdict),
    }


def _verdict_text(name: str, verdict: Verdict) -> str:
    if verdict.holds:
        return f"{name}: holds"
    lines = [f"{name}: FAILS ({verdict.condition.value})"]
    if verdict.detail:
        lines.append(f"  {verdict.detail}")
    w = verdict.witness
    if w is not None:
        lines.append("  mu = " + " ".join(render_event(e) for e in w.mu))
        if w.sigma is not None:
            lines.append(f"  sigma = {w.sigma}")
        if w.nu is not None:
            lines.append("  nu = " + " ".join(render_event(e) for e in w.nu))
        if w.supervisor is not None:
            lines.append(f"  supervisor = {w.supervisor + 1}")
    return "\n".join(lines)


def _supervisor_dict(sup) -> dict:
    return {
        "supervisor": sup.supervisor + 1,
        "obs_alphabet": list(sup.observer.obs_alphabet),
        "states": list(range(sup.observer.num_states)),
        "initial": sup.observer.initial,
        "transitions": [
            {"from": t, "obs": symbol, "to": target}
            for t in range(sup.observer.num_states)
            for symbol, target in sorted(sup.observer.transitions[t].items())
        ],
        "enable": {
            str(t): sorted(sup.enable[t]) for t in range(sup.observer.num_states)
        },
    }


def _report_dict(report: SolveReport) -> dict:
    out = {
        "spec_version": SPEC_VERSION,
        "solvable": report.solvable,
        "checks": [
            _verdict_dict(report.controllability),
            _verdict_dict(report.observability),
            _verdict_dict(report.closure),
        ],
        "sizes": report.sizes,
        "diagnostic": report.diagnostic,
    }
    if report.supervisors is not None:
        out["admissibility"] = _verdict_dict(report.admissibility)
        out["language_equal"] = {
            "generated": report.language.generated_equal,
            "marked": report.language.marked_equal,
        }
        if report.language.diff_generated is not None:
            out["language_equal"]["distinguishing_generated"] = [
                render_event(e) for e in report.language.diff_generated
            ]
        if report.language.diff_marked is not None:
            out["language_equal"]["distinguishing_marked"] = [
                render_event(e) for e in report.language.diff_marked
            ]
        out["spec_nonblocking"] = report.nonblocking
        out["supervisors"] = [_supervisor_dict(s) for s in report.supervisors]
    return out


def cmd_validate(args) -> int:
    model = load_model(args.model)
    verdict = validate_timed_assumptions(accessible(model.plant), model.network)
    if args.format == "json":
        payload = {
            "spec_version": SPEC_VERSION,
            "valid": verdict.ok,
            "condition": verdict.condition,
            "message": verdict.message,
        }
        _write(dump_json(payload), args.output)
    else:
        text = "model valid\n" if verdict.ok else f"model invalid: {verdict.message}\n"
        _write(text, args.output)
    return 0 if verdict.ok else 1


def cmd_compose(args) -> int:
    model = load_model(args.model)
    payload = {
        "spec_version": SPEC_VERSION,
        "states": len(model.plant.states),
        "marked": len(model.plant.marked),
        "alphabet": sorted(model.plant.alphabet),
        "automaton": automaton_to_dict(model.plant),
    }
    _write(dump_json(payload), args.output)
    return 0


def cmd_build_comm(args) -> int:
    model = load_model(args.model)
    comm = build_comm_automaton(model.plant, model.spec, model.network)
    payload = {
        "spec_version": SPEC_VERSION,
        "states": comm.num_states,
        "spec_states": sum(comm.spec_reachable),
        "marked_states": sum(comm.marked),
        "initial": comm.render_state(comm.initial),
    }
    if args.dot:
        _write(dotmod.comm_automaton_dot(comm), args.dot)
    _write(dump_json(payload), args.output)
    return 0


def cmd_check(args) -> int:
    model = load_model(args.model)
    comm = build_comm_automaton(model.plant, model.spec, model.network)
    verdicts = [
        ("network controllability", check_network_controllability(comm)),
        ("network joint observability", check_network_joint_observability(comm)),
        ("marked-language closure", check_lm_closure(comm)),
    ]
    all_hold = all(v.holds for _, v in verdicts)
    if args.format == "json":
        payload = {
            "spec_version": SPEC_VERSION,
            "all_hold": all_hold,
            "checks": [_verdict_dict(v) for _, v in verdicts],
        }
        _write(dump_json(payload), args.output)
    else:
        _write("\n".join(_verdict_text(n, v) for n, v in verdicts) + "\n", args.output)
    return 0 if all_hold else 1


def cmd_synthesize(args) -> int:
    model = load_model(args.model)
    comm = build_comm_automaton(model.plant, model.spec, model.network)
    sups = [synthesize_supervisor(comm, i) for i in range(model.network.n)]
    payload = {
        "spec_version": SPEC_VERSION,
        "supervisors": [_supervisor_dict(s) for s in sups],
    }
    _write(dump_json(payload), args.output)
    return 0


def cmd_solve(args) -> int:
    model = load_model(args.model)
    report = solve_control_problem(
        model.plant, model.spec, model.network, diagnostic=args.diagnostic
    )
    if args.format == "json":
        _write(dump_json(_report_dict(report)), args.output)
    else:
        lines = [
            _verdict_text("network controllability", report.controllability),
            _verdict_text("network joint observability", report.observability),
            _verdict_text("marked-language closure", report.closure),
            f"solvable: {'yes' if report.solvable else 'no'}",
        ]
        if report.supervisors is not None:
            lines.append(f"admissible: {'yes' if report.admissibility.holds else 'no'}")
            lines.append(
                "closed loop equals specification: "
                + ("yes" if report.language.equal else "no")
            )
            lines.append(f"specification nonblocking: {'yes' if report.nonblocking else 'no'}")
        lines.append("sizes: " + ", ".join(f"{k}={v}" for k, v in report.sizes.items()))
        _write("\n".join(lines) + "\n", args.output)
    return 0 if report.solvable else 1


def cmd_simulate(args) -> int:
    model = load_model(args.model)
    report = solve_control_problem(
        model.plant, model.spec, model.network, diagnostic=args.diagnostic
    )
    if not report.solvable and not args.diagnostic:
        raise ModelError("problem unsolvable; pass --diagnostic to simulate anyway")
    trace = simulate(report.comm, report.supervisors, args.seed, args.steps, loop=report.loop)
    _write(render_trace(trace, report.comm) + "\n", args.output)
    return 0


def cmd_export_dot(args) -> int:
    model = load_model(args.model)
    target = args.target
    if target == "plant":
        text = dotmod.timed_automaton_dot(model.plant)
    elif target == "spec":
        text = dotmod.timed_automaton_dot(model.spec)
    elif target == "comm":
        comm = build_comm_automaton(model.plant, model.spec, model.network)
        text = dotmod.comm_automaton_dot(comm)
    elif target.startswith("observer:"):
        i = int(target.split(":", 1)[1]) - 1
        comm = build_comm_automaton(model.plant, model.spec, model.network)
        sup = synthesize_supervisor(comm, i)
        text = dotmod.observer_dot(sup.observer, comm)
    elif target == "closed-loop":
        comm = build_comm_automaton(model.plant, model.spec, model.network)
        sups = [synthesize_supervisor(comm, i) for i in range(model.network.n)]
        text = dotmod.closed_loop_dot(closed_loop(comm, sups))
    else:
        raise ModelError(f"unknown export target {target!r}")
    _write(text, args.output)
    return 0


def _agreement_for_seed(payload: tuple[int, int]) -> dict:
    """Compare engine verdicts and closed-loop language against the brute
    oracle for one seeded instance."""
    seed, bound = payload
    inst = random_instance(seed)
    comm = inst.comm
    oracle_ctrl = (
        brute_check(Condition.NET_CTRL_1, comm, bound).holds
        and brute_check(Condition.NET_CTRL_2, comm, bound).holds
    )
    engine = [
        ("NetworkControllability", check_network_controllability(comm).holds, oracle_ctrl),
        (
            "NetworkJointObservability",
            check_network_joint_observability(comm).holds,
            brute_check(Condition.NET_JOINT_OBS, comm, bound).holds,
        ),
        (
            "LmClosure",
            check_lm_closure(comm).holds,
            brute_check(Condition.LM_CLOSURE, comm, bound).holds,
        ),
    ]
    disagreements = [name for name, engine_holds, oracle_holds in engine
                     if engine_holds != oracle_holds]
    sups = [synthesize_supervisor(comm, i) for i in range(inst.net.n)]
    loop_language = enumerate_language(closed_loop(comm, sups), bound)
    brute_language = brute_closed_loop(comm, sups, bound)
    if (
        loop_language.strings != brute_language.strings
        or loop_language.marked != brute_language.marked
    ):
        disagreements.append("ClosedLoopLanguage")
    return {"seed": seed, "disagreements": disagreements, "comm_states": comm.num_states}


def cmd_oracle(args) -> int:
    seeds = [(args.seed + k, args.bound) for k in range(args.instances)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_agreement_for_seed, seeds))
    else:
        results = [_agreement_for_seed(s) for s in seeds]
    failures = [r for r in results if r["disagreements"]]
    for failure in failures:
        inst = random_instance(failure["seed"])
        artifact = Path(args.artifacts) / f"disagreement-{failure['seed']}.json"
        artifact.parent.mkdir(parents=True, exist_ok=True)
        artifact.write_text(
            dump_json(model_to_dict(inst.plant, inst.spec, inst.net)), encoding="utf-8"
        )
    payload = {
        "spec_version": SPEC_VERSION,
        "instances": args.instances,
        "bound": args.bound,
        "agreements": len(results) - len(failures),
        "disagreements": failures,
    }
    _write(dump_json(payload), args.output)
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsup",
        description="supervisor synthesis for timed systems with delayed, lossy"
        " communication between supervisors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
        return p

    p = add("validate", cmd_validate, "check the timed-model assumptions")
    p.add_argument("model")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("compose", cmd_compose, "resolve the plant expression and report the result")
    p.add_argument("model")

    p = add("build-comm", cmd_build_comm, "build the channel-augmented automaton")
    p.add_argument("model")
    p.add_argument("--dot", default=None, help="also write a DOT rendering here")

    p = add("check", cmd_check, "decide the three existence conditions")
    p.add_argument("model")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("synthesize", cmd_synthesize, "emit the supervisor set as JSON")
    p.add_argument("model")

    p = add("solve", cmd_solve, "full pipeline: checks, synthesis, verification")
    p.add_argument("model")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--diagnostic", action="store_true",
                   help="synthesize even when a condition fails")

    p = add("simulate", cmd_simulate, "random closed-loop run")
    p.add_argument("model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--diagnostic", action="store_true")

    p = add("export-dot", cmd_export_dot, "DOT rendering of a structure")
    p.add_argument("model")
    p.add_argument("--target", default="comm",
                   help="plant | spec | comm | observer:<i> | closed-loop")

    p = add("oracle", cmd_oracle, "engine-versus-oracle agreement on random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--artifacts", default="oracle-failures",
                   help="directory for disagreement model dumps")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

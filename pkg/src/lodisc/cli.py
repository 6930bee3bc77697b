"""Command-line interface.

Reports go to stdout as JSON (sorted keys, deterministic for identical
inputs and seed); a short human summary goes to stderr.

Exit codes: 0 pass/success, 1 negative verdict, 2 input error,
3 precondition violation (non-orthogonal input).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from . import __version__
from .criteria import NonOrthogonalError, fixed_array_check
from .documents import (
    DocumentError,
    StateSet,
    digest,
    dumps,
    parse_state_document,
    parse_unitary_document,
    read_json,
    serialize_state_set,
    serialize_unitary,
    write_atomic,
)
from .estimation import dephase, min_error_probability, optimize_min_error
from .feasibility import (
    augment_with_ancilla,
    conditional_search,
    find_tower_mode,
)
from .fock import FockError, basis_state
from .optics import beam_splitter_network
from . import states as catalogue

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3

DATA_DIR = Path(__file__).parent / "data"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _occ(o) -> str:
    return "".join(str(n) for n in o) if max(o, default=0) < 10 else ",".join(map(str, o))


def _load_states(path) -> tuple[StateSet, str]:
    doc, raw = read_json(path)
    return parse_state_document(doc), digest(raw)


def _load_unitary(path):
    doc, raw = read_json(path)
    return parse_unitary_document(doc), digest(raw)


def _serialize_tree(node) -> dict:
    if node.is_leaf:
        return {"candidates": node.candidates, "identified": node.identified}
    return {
        "candidates": node.candidates,
        "mode_vector": node.mode_vector,
        "outcomes": {
            str(m): {
                "probabilities": node.probabilities[m],
                "child": _serialize_tree(node.children[m]),
            }
            for m in sorted(node.children)
        },
    }


def _distribution_json(dist) -> dict:
    return {
        str(lab): {_occ(o): p for o, p in sorted(d.items())}
        for lab, d in dist.per_state.items()
    }


def cmd_check_fixed(args) -> tuple[dict, int, str]:
    ss, h1 = _load_states(args.statefile)
    U, h2 = _load_unitary(args.unitaryfile)
    if U.dim != ss.modes:
        raise DocumentError(f"unitary acts on {U.dim} modes, states have {ss.modes}")
    verdict = fixed_array_check(ss.states, U, args.tol)
    result = {
        "verdict": "pass" if verdict.passed else "fail",
        "conditions_checked": verdict.checked,
        "max_violation": verdict.max_violation,
        "tol": args.tol,
    }
    if verdict.witness is not None:
        w = verdict.witness
        result["witness"] = {
            "pair": [ss.labels[w.pair[0]], ss.labels[w.pair[1]]],
            "output_modes": list(w.indices),
            "order": w.order,
            "value": w.value,
        }
    summary = f"fixed array: {result['verdict']}"
    if verdict.witness is not None:
        summary += f" (pair {result['witness']['pair']}, modes {list(w.indices)}, |value|={abs(w.value):.3g})"
    return {"inputs": {"states": h1, "unitary": h2}, "result": result}, (
        EXIT_OK if verdict.passed else EXIT_NEGATIVE), summary


def _with_aux(ss: StateSet, aux_arg):
    if aux_arg is None:
        return ss.states, None, None
    if aux_arg is True:
        if ss.aux is None:
            raise DocumentError("--aux given but the state file has no 'aux' block")
        aux, h = ss.aux, None
    else:
        doc, raw = read_json(aux_arg)
        aux = parse_state_document(doc).states[0] if "states" in doc else None
        if aux is None:
            raise DocumentError("aux file must be a state document")
        h = digest(raw)
    return augment_with_ancilla(ss.states, aux), list(range(ss.modes)), h


def cmd_search(args) -> tuple[dict, int, str]:
    ss, h = _load_states(args.statefile)
    states, signal, aux_digest = _with_aux(ss, args.aux)
    inputs = {"states": h}
    if args.aux is not None:
        inputs["aux"] = aux_digest or "embedded"
    restarts = args.restarts if args.restarts is not None else (100 if args.mode == "tower" else 20)
    if args.mode == "tower":
        v = find_tower_mode(states, restarts=restarts, seed=args.seed, signal_modes=signal)
        result = {
            "mode": "tower",
            "status": v.status,
            "residual": v.residual,
            "starts": v.restarts,
            "threshold": v.threshold,
            "witness": v.witness,
            "gradient_norm": v.gradient_norm,
        }
        code = EXIT_OK if v.found else EXIT_NEGATIVE
        summary = f"tower mode: {v.status} (min residual {v.residual:.3g} over {v.restarts} starts)"
    else:
        if signal is not None:
            raise DocumentError("--aux is only supported with --mode tower")
        res = conditional_search(states, restarts=restarts, seed=args.seed, labels=ss.labels)
        result = {
            "mode": "conditional",
            "status": "success" if res.success else "failure",
            "tree": _serialize_tree(res.tree) if res.success else None,
            "trace": res.trace,
        }
        code = EXIT_OK if res.success else EXIT_NEGATIVE
        summary = f"conditional search: {result['status']}"
        if res.success:
            summary += f" (depth {res.tree.depth()})"
        elif res.trace:
            summary += f" ({res.trace[-1]['reason']})"
    result["restarts"] = restarts
    return {"inputs": inputs, "result": result}, code, summary


def cmd_min_error(args) -> tuple[dict, int, str]:
    ss, h = _load_states(args.statefile)
    res = optimize_min_error(ss.states, restarts=args.restarts, seed=args.seed)
    result = {
        "min_error": res.error,
        "best_random_start": res.best_random,
        "unitary": serialize_unitary(res.unitary)["matrix"],
        "restarts": args.restarts,
        "trace": res.trace,
    }
    return {"inputs": {"states": h}, "result": result}, EXIT_OK, (
        f"minimum error probability {res.error:.6f} over {len(res.trace)} starts")


def cmd_dephase(args) -> tuple[dict, int, str]:
    ss, h1 = _load_states(args.statefile)
    U, h2 = _load_unitary(args.unitaryfile)
    if U.dim != ss.modes:
        raise DocumentError(f"unitary acts on {U.dim} modes, states have {ss.modes}")
    dist = dephase(ss.states, U, ss.labels)
    perr = min_error_probability(dist)
    result = {"distributions": _distribution_json(dist), "min_error": perr}
    return {"inputs": {"states": h1, "unitary": h2}, "result": result}, EXIT_OK, (
        f"minimum error probability {perr:.6f}")


def family_document(alpha, beta, gamma, delta) -> dict:
    st = catalogue.family_states(alpha, beta, gamma, delta)
    ss = StateSet(4, list(st), list(st.values()), meta={
        "comment": (
            "Four orthogonal two-qubit states: alpha|1001>+beta|0110>, "
            "beta*|1001>-alpha*|0110>, and the same with gamma, delta on |1010>, |0101>; "
            f"alpha={alpha}, beta={beta}, gamma={gamma}, delta={delta}"
        )
    })
    return serialize_state_set(ss)


def cmd_make_family(args) -> tuple[dict, int, str]:
    doc = family_document(args.alpha, args.beta, args.gamma, args.delta)
    return doc, EXIT_OK, "generated four-state family document"


def _fixture_docs() -> dict[str, dict]:
    def doc(states, comment, expected, aux=None):
        ss = StateSet(next(iter(states.values())).modes, list(states), list(states.values()), aux,
                      {"comment": comment, "expected": expected})
        return serialize_state_set(ss)

    q = catalogue.qutrit_states()
    tower_no = {"args": ["search", "@state", "--mode", "tower", "--restarts", "20"], "exit": EXIT_NEGATIVE}
    tower_yes = dict(tower_no, exit=EXIT_OK)
    docs = {
        "bell4.json": doc(
            catalogue.bell_states(),
            "Polarization Bell states of two photons; modes 1,2 = H,V of photon A, modes 3,4 = H,V of photon B.",
            [tower_no,
             {"args": ["check-fixed", "@state", "@bs5050.json"], "exit": EXIT_NEGATIVE},
             {"args": ["dephase", "@state", "@bs5050.json"], "exit": EXIT_OK}],
        ),
        "qutrit9.json": doc(q, "Nine two-qutrit product states, one photon per qutrit in three modes.", [tower_no]),
        "qutrit8_no_s8.json": doc(
            {k: v for k, v in q.items() if k != "s8"},
            "Qutrit product states without s8; detecting mode 1 first enables discrimination.",
            [tower_yes,
             {"args": ["search", "@state", "--mode", "conditional", "--restarts", "5"], "exit": EXIT_OK}],
        ),
        "qutrit8_no_s9.json": doc(
            {k: v for k, v in q.items() if k != "s9"},
            "Qutrit product states without s9; still not discriminable.", [tower_no]),
        "pair2011.json": doc(
            catalogue.pair_states(),
            "Two-photon pair (|20> + |11>)/sqrt2 and (|20> - |11>)/sqrt2; aux block is the number state |2>.",
            [tower_no,
             {"args": ["search", "@state", "--mode", "tower", "--restarts", "20", "--aux"], "exit": EXIT_NEGATIVE}],
            aux=basis_state([2]),
        ),
    }
    r = 1 / math.sqrt(2)
    fam = family_document(r, r, 0.0, 1.0)
    fam["comment"] = ("Four-state family with alpha=beta=1/sqrt2, gamma=0, delta=1: "
                      "two maximally entangled states plus two product states.")
    fam["expected"] = [{"args": ["check-fixed", "@state", "@bs5050.json"], "exit": EXIT_OK}]
    docs["family4.json"] = fam
    bs = serialize_unitary(
        beam_splitter_network(4, [(0, 2), (1, 3)]),
        "Balanced beam splitter mixing modes 1-3 and 2-4 (same polarization of the two photons).",
    )
    docs["bs5050.json"] = bs
    return docs


def cmd_make_fixtures(args) -> tuple[dict, int, str]:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    docs = _fixture_docs()
    for name, doc in docs.items():
        write_atomic(out / name, dumps(doc))
    return {"written": sorted(docs)}, EXIT_OK, f"wrote {len(docs)} fixtures to {out}"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lodisc", description="Linear-optics discrimination criteria.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=True):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o", help="write the report to this file instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")

    sp = sub.add_parser("check-fixed", help="test a fixed interferometer")
    sp.add_argument("statefile")
    sp.add_argument("unitaryfile")
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_check_fixed)

    sp = sub.add_parser("search", help="search for a tower mode or a conditional protocol")
    sp.add_argument("statefile")
    sp.add_argument("--mode", choices=["tower", "conditional"], default="tower")
    sp.add_argument("--restarts", type=_positive_int)
    sp.add_argument("--aux", nargs="?", const=True, default=None,
                    help="append an ancilla: the file's aux block, or a state file given here")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("min-error", help="optimize the interferometer for minimum error")
    sp.add_argument("statefile")
    sp.add_argument("--restarts", type=_positive_int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_min_error)

    sp = sub.add_parser("dephase", help="detection-pattern distributions for a fixed interferometer")
    sp.add_argument("statefile")
    sp.add_argument("unitaryfile")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_dephase)

    sp = sub.add_parser("make-family", help="emit a four-state family document")
    for name, default in (("alpha", 1 / math.sqrt(2)), ("beta", 1 / math.sqrt(2)), ("gamma", 0.0), ("delta", 1.0)):
        sp.add_argument(f"--{name}", type=float, default=default)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_make_family, raw=True)

    sp = sub.add_parser("make-fixtures", help="write the shipped example files")
    sp.add_argument("outdir")
    sp.set_defaults(func=cmd_make_fixtures, output=None, timing=False)
    return p


def _echo(args) -> list[str]:
    skip = {"func", "raw", "output", "timing", "command"}
    echo = [args.command]
    for key, value in sorted(vars(args).items()):
        if key not in skip and value is not None:
            echo.append(f"{key}={value}")
    return echo


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        payload, code, summary = args.func(args)
    except (DocumentError, FockError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonOrthogonalError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    elapsed = time.perf_counter() - t0
    if getattr(args, "raw", False) or args.command == "make-fixtures":
        report = payload
    else:
        report = {"command": _echo(args), "version": __version__, **payload}
        if hasattr(args, "seed"):
            report["seed"] = args.seed
        if args.timing:
            report["runtime_seconds"] = round(elapsed, 3)
    text = dumps(report)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    print(f"{summary} [{elapsed:.2f}s]", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

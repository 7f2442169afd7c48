"""Command-line interface: ``intersub <command> ...`` writes a JSON report to stdout.

Exit codes: 0 when the computation finished (whatever the boolean answer),
2 for invalid input, 3 when a size guard is exceeded or a model is
infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import catalog, cones, metrics, quantum
from . import fileio as io
from .constructions import Classical, cis_outcome_bound, many_outcome_witness, three_outcome_witness
from .generators import random_measurement, random_model
from .model import GuardError, Measurement
from .optimizer import InfeasibleError
from .rational import fmt
from .tasks import (
    discriminate,
    is_tomographically_complete,
    perfectly_distinguishing_states,
    sharp_two_outcome_set,
)

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 2, 3

_COMMON_DEFAULTS = {"quiet": False, "seed": 0, "max_outcomes": metrics.MAX_OUTCOMES, "tol": None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _guards() -> dict:
    return {
        "max_outcomes": metrics.MAX_OUTCOMES,
        "max_vertices": cones.MAX_VERTICES,
        "max_affine_dim": cones.MAX_AFFINE_DIM,
    }


# -- input helpers -----------------------------------------------------------------


def _model(args):
    if getattr(args, "catalog", None):
        entry = catalog.load_example(args.catalog)
        if entry.model is None:
            raise io.InputError(f"{args.catalog!r} is a quantum entry")
        return entry.model
    if not args.model:
        raise io.InputError("give --model or --catalog")
    return io.resolve_model(args.model)


def _measurement(args) -> Measurement:
    if getattr(args, "catalog", None):
        entry = catalog.load_example(args.catalog)
        key = getattr(args, "which", None) or "A"
        if entry.model is None or key not in entry.measurements:
            raise io.InputError(f"{args.catalog!r} has no GPT measurement {key!r}")
        A = entry.measurements[key]
    else:
        if not args.measurement:
            raise io.InputError("give --measurement or --catalog")
        model = io.resolve_model(args.model) if args.model else None
        A = io.load_measurement(args.measurement, model)
    if len(A) > args.max_outcomes:
        raise GuardError(f"{len(A)} outcomes exceed --max-outcomes {args.max_outcomes}")
    return A


def _povm(args) -> quantum.Povm:
    if getattr(args, "catalog", None):
        entry = catalog.load_example(args.catalog)
        if entry.quantum_dim is None:
            raise io.InputError(f"{args.catalog!r} is not a quantum entry")
        return entry.measurement
    if not args.povm:
        raise io.InputError("give --povm or --catalog")
    return io.load_povm(args.povm)


# -- commands ------------------------------------------------------------------------


def cmd_degree(args):
    A = _measurement(args)
    fn = {
        "degree": metrics.intersubjectivity_degree,
        "sharpness": metrics.sharpness_degree,
        "cis-degree": metrics.cis_degree,
    }[args.command]
    r = fn(A)
    return io.report(args.command, r.value, {"report": io.degree_report_to_dict(r, A)}, _guards())


def cmd_extremal(args):
    A = _measurement(args)
    D = metrics.perturbation(A)
    wit = {} if D is None else {
        "perturbation": {str(io.label_out(x)): [fmt(v) for v in d] for x, d in zip(A.labels, D)}
    }
    return io.report("extremal", D is None, wit)


def cmd_sharp_effect(args):
    doc = io.read_json(args.effect)
    S = io.resolve_model(args.model) if args.model else io.resolve_model(doc.get("model"), Path(args.effect).parent)
    a = io.effect_from_dict(doc, S)
    r = metrics.sharpness_degree(Measurement(S, ("a", "not-a"), (a, a.complement())))
    return io.report("sharp-effect", r.value == 1, {"sharpness": fmt(r.value)})


def cmd_classical_check(args):
    S = _model(args)
    return io.report(
        "classical-check",
        cones.is_classical(S),
        {"rays": len(cones.nonneg_cone_rays(S)), "linear_dim": S.linear_dim, "is_simplex": cones.is_simplex(S)},
        _guards(),
    )


def cmd_rays(args):
    S = _model(args)
    basis = cones.nonneg_cone_rays(S)
    return io.report(
        "rays", len(basis), {"rays": [io.effect_to_dict(r) for r in basis]}, _guards()
    )


def cmd_construct(args):
    S = _model(args)
    build = three_outcome_witness if args.kind == "three-outcome" else many_outcome_witness
    w = build(S)
    name = f"construct {args.kind}"
    bound = {"cis_outcome_bound": cis_outcome_bound(S), "linear_dim": S.linear_dim}
    if isinstance(w, Classical):
        return io.report(name, "classical", {"reason": w.reason, **bound})
    A = w.measurement
    return io.report(
        name,
        True,
        {
            "measurement": io.measurement_to_dict(A, inline_model=False),
            "degree": io.degree_report_to_dict(w.degree, A),
            "cis_degree": io.degree_report_to_dict(w.cis, A),
            "rays": list(w.rays),
            **bound,
        },
        _guards(),
    )


def cmd_discriminate(args):
    model = io.resolve_model(args.model) if args.model else None
    E = io.load_ensemble(args.ensemble, model)
    d = discriminate(E)
    return io.report(
        "discriminate", d.success, {"measurement": io.measurement_to_dict(d.measurement, inline_model=False)}
    )


def cmd_distinguish(args):
    A = _measurement(args)
    states = perfectly_distinguishing_states(A)
    if not states:
        return io.report("distinguish", False, {"failing_outcome": io.label_out(states.outcome)})
    return io.report(
        "distinguish",
        True,
        {"states": {str(io.label_out(x)): [fmt(c) for c in s] for x, s in zip(A.labels, states)}},
    )


def cmd_tomo_check(args):
    S = _model(args)
    Ms = [io.load_measurement(p, S) for p in args.measurement or []]
    if args.sharp_set:
        Ms += sharp_two_outcome_set(S)
    return io.report("tomo-check", is_tomographically_complete(S, Ms), {"measurements": len(Ms)})


def cmd_coin_toss(args):
    w = [io.rat(x) for x in args.weights]
    return io.report("coin-toss", metrics.coin_toss_degree(w))


def cmd_classical_degree(args):
    A = _measurement(args)
    return io.report("classical-degree", metrics.classical_degree(A.space, A))


def cmd_quantum(args):
    name = f"quantum {args.qcommand}"
    if args.qcommand == "qubit-degree":
        try:
            lam = [io.rat(x) for x in args.lam]
        except io.InputError:
            lam = [float(x) for x in args.lam]
        return io.report(name, quantum.unbiased_qubit_degree(lam))
    A = _povm(args)
    tol = args.tol
    if args.qcommand == "is-pvm":
        value = quantum.is_pvm(A, tol if tol is not None else quantum.IDEMPOTENT_TOL)
        return io.report(name, value, {"idempotence_error": quantum.idempotence_error(A)})
    tol = tol if tol is not None else quantum.RANK_TOL
    if args.qcommand == "intersubjective":
        chk = quantum.is_intersubjective_povm(A, tol)
        pairs = [[io.label_out(x) for x in p] for p in chk.overlapping]
        return io.report(name, chk.intersubjective, {"overlapping_pairs": pairs})
    return io.report(name, quantum.is_extremal_povm(A, tol), {"margins": quantum.decision_margins(A)})


def _entry_dict(entry: catalog.CatalogEntry) -> dict:
    out = {"name": entry.name, "description": entry.description}
    if entry.model is not None:
        out["model"] = io.model_to_dict(entry.model)
        out["measurements"] = {
            k: io.measurement_to_dict(M, inline_model=False) for k, M in entry.measurements.items()
        }
    else:
        out["quantum_dim"] = entry.quantum_dim
        out["measurements"] = {k: io.povm_to_dict(M) for k, M in entry.measurements.items()}
    out["expected"] = [
        {
            "property": e.prop,
            "value": io.partition_to_list(e.value)
            if isinstance(e.value, catalog.OutcomePartition)
            else io.value_out(e.value),
            "source": e.source,
        }
        for e in entry.expected
    ]
    return out


def cmd_catalog(args):
    if args.ccommand == "list":
        return io.report("catalog list", len(catalog.names()), {"entries": catalog.names()})
    entry = catalog.load_example(args.name)
    if args.ccommand == "show":
        return io.report("catalog show", entry.name, {"entry": _entry_dict(entry)})
    files = {}
    out = Path(args.out) if args.out else None
    if entry.model is not None:
        docs = {"model.json": io.model_to_dict(entry.model)}
        for k, M in entry.measurements.items():
            d = io.measurement_to_dict(M, inline_model=False)
            d["model"] = "model.json"
            docs[f"measurement-{k}.json"] = d
    else:
        docs = {f"povm-{k}.json": io.povm_to_dict(M) for k, M in entry.measurements.items()}
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for fname, doc in docs.items():
            (out / fname).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            files[fname] = str(out / fname)
        return io.report("catalog export", entry.name, {"files": files})
    return io.report("catalog export", entry.name, {"documents": docs})


def cmd_random(args):
    if args.rcommand == "model":
        S = random_model(args.seed, args.dim, args.vertices)
        return io.report("random model", len(S.vertices), {"model": io.model_to_dict(S)})
    S = _model(args)
    A = random_measurement(S, args.outcomes, args.seed, mixed=args.mixed)
    return io.report(
        "random measurement", len(A), {"measurement": io.measurement_to_dict(A, inline_model=True)}
    )


def cmd_selftest(args):
    from .acceptance import run_all

    echo = None if args.quiet else (lambda line: print(line, file=sys.stderr))
    results = run_all(echo)
    return io.report(
        "selftest",
        all(r.passed for r in results),
        {f"criterion_{r.number}": {"passed": r.passed, "title": r.title, "details": r.details} for r in results},
    )


# -- parser ----------------------------------------------------------------------------


def _add_measurement_opts(p):
    p.add_argument("--model", help="model file or catalog entry name")
    p.add_argument("--measurement", help="measurement file")
    p.add_argument("--catalog", help="take the measurement from this catalog entry")
    p.add_argument("--which", help="measurement key inside the catalog entry (default A)")


def _add_model_opts(p):
    p.add_argument("--model", help="model file or catalog entry name")
    p.add_argument("--catalog", help="take the model from this catalog entry")


def build_parser() -> argparse.ArgumentParser:
    # defaults are filled in after parsing so a flag may appear at any level
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", help="print only the value")
    common.add_argument("--seed", type=int, help="seed for generators (default 0)")
    common.add_argument("--max-outcomes", type=int, help="reject larger measurements")
    common.add_argument("--tol", type=float, help="rank/idempotence threshold (quantum only)")

    parser = _Parser(prog="intersub", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=fn)
        return p

    for name, help_ in (
        ("degree", "intersubjectivity degree"),
        ("sharpness", "sharpness degree"),
        ("cis-degree", "complete-intersubjectivity degree"),
    ):
        _add_measurement_opts(add(name, cmd_degree, help_))
    _add_measurement_opts(add("extremal", cmd_extremal, "is the measurement extremal"))
    p = add("sharp-effect", cmd_sharp_effect, "is an effect sharp")
    p.add_argument("--model")
    p.add_argument("--effect", required=True, help="effect file with linear and constant")
    _add_model_opts(add("classical-check", cmd_classical_check, "is the state space a simplex"))
    _add_model_opts(add("rays", cmd_rays, "indecomposable effects of unit norm"))
    p = add("construct", cmd_construct, "witness measurements for non-classical systems")
    p.add_argument("kind", choices=("three-outcome", "many-outcome"))
    _add_model_opts(p)
    p = add("discriminate", cmd_discriminate, "minimum-error discrimination")
    p.add_argument("--model")
    p.add_argument("--ensemble", required=True)
    _add_measurement_opts(add("distinguish", cmd_distinguish, "perfectly distinguished states"))
    p = add("tomo-check", cmd_tomo_check, "do the measurements separate all states")
    _add_model_opts(p)
    p.add_argument("--measurement", action="append", help="measurement file (repeatable)")
    p.add_argument("--sharp-set", action="store_true", help="include all sharp two-outcome measurements")
    p = add("coin-toss", cmd_coin_toss, "closed-form degree of a coin toss")
    p.add_argument("weights", nargs="+")
    _add_measurement_opts(add("classical-degree", cmd_classical_degree, "closed form on a simplex"))

    p = add("quantum", cmd_quantum, "quantum checks")
    qsub = p.add_subparsers(dest="qcommand", parser_class=_Parser)
    qsub.required = True
    for name in ("is-pvm", "intersubjective", "extremal"):
        q = qsub.add_parser(name, parents=[common])
        q.add_argument("--povm")
        q.add_argument("--catalog")
    q = qsub.add_parser("qubit-degree", parents=[common])
    q.add_argument("lam", nargs=3, metavar="L")

    p = add("catalog", cmd_catalog, "built-in examples")
    csub = p.add_subparsers(dest="ccommand", parser_class=_Parser)
    csub.required = True
    csub.add_parser("list", parents=[common])
    csub.add_parser("show", parents=[common]).add_argument("name")
    q = csub.add_parser("export", parents=[common])
    q.add_argument("name")
    q.add_argument("--out", help="directory for the exported files")

    p = add("random", cmd_random, "seeded random models and measurements")
    rsub = p.add_subparsers(dest="rcommand", parser_class=_Parser)
    rsub.required = True
    q = rsub.add_parser("model", parents=[common])
    q.add_argument("--dim", type=int, default=2)
    q.add_argument("--vertices", type=int, default=6)
    q = rsub.add_parser("measurement", parents=[common])
    _add_model_opts(q)
    q.add_argument("--outcomes", type=int, default=3)
    q.add_argument("--mixed", action="store_true")

    add("selftest", cmd_selftest, "run the acceptance suite")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _COMMON_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        doc = args.func(args)
    except (GuardError, InfeasibleError) as e:
        print(f"intersub: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, KeyError, TypeError) as e:
        print(f"intersub: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.quiet:
        print(json.dumps(doc["value"]))
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

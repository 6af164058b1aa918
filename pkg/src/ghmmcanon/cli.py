"""Command-line front end.

Models are given as JSON file paths or as ``zoo:<name>``. Output is JSON by
default. Exit codes: 0 success / equal, 2 input error, 3 not_equal,
4 numerical-integrity failure, 5 resource cap exceeded.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import io, zoo
from .canonical import dimension_bound, entropy_dimension_witness, standard_ghmm
from .equivalence import ENUMERATION_CAP, PROB_TOL, equivalent
from .errors import GhmmCanonError, ModelError, ResourceCapError
from .ghmm import conditional_probability, hmm_flags, sample_hmm, steady_state, validate, word_probability
from .linalg import RANK_RTOL
from .qhmm import QHMM, conditional_probability_q, diagnostics, sample_qhmm, word_probability_q
from .vectorize import as_ghmm, qhmm_to_ghmm_bloch, qhmm_to_ghmm_liouville, to_all_ones_gauge
from .wordlist import (
    check_wordlist_bounds,
    minimal_wordlists,
    sufficient_future_wordlist,
    sufficient_history_wordlist,
)
from .words import format_word, parse_word

EXIT_NOT_EQUAL = 3
TOL_ENV = "GHMM_CANON_TOL"


@dataclass
class CliConfig:
    tol: float = PROB_TOL
    rank_tol: float = RANK_RTOL
    max_len: int = None
    cap: int = ENUMERATION_CAP
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not (self.tol > 0 and self.rank_tol > 0):
            raise ModelError("tolerances must be positive")
        if self.cap < 1:
            raise ModelError("enumeration cap must be at least 1")
        if self.max_len is not None and self.max_len < 0:
            raise ModelError("max_len must be nonnegative")
        if self.format not in ("json", "table"):
            raise ModelError(f"unknown output format {self.format!r}")


def build_config(args):
    """Defaults < config file < environment < explicit flags."""
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelError(f"cannot read config {args.config}: {exc}") from None
    if os.environ.get(TOL_ENV):
        try:
            values["tol"] = float(os.environ[TOL_ENV])
        except ValueError:
            raise ModelError(f"{TOL_ENV} must be a number") from None
    for key in ("tol", "rank_tol", "max_len", "cap", "format", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    unknown = set(values) - set(CliConfig.__dataclass_fields__)
    if unknown:
        raise ModelError(f"unknown config keys: {sorted(unknown)}")
    return CliConfig(**values)


def load_model(ref):
    if ref.startswith("zoo:"):
        return zoo.load(ref[4:]).model
    try:
        return io.load(ref)
    except FileNotFoundError:
        raise ModelError(f"no such model file: {ref}") from None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def emit(payload, cfg, out):
    payload = _jsonable(payload)
    if cfg.format == "json":
        out.write(json.dumps(payload, sort_keys=False) + "\n")
    else:
        for key, value in payload.items():
            out.write(f"{key}\t{value if not isinstance(value, (dict, list)) else json.dumps(value)}\n")


def _words(ws):
    return [list(w) for w in ws]


def _default_max_len(model, cfg):
    D = as_ghmm(model).dim
    k = len(model.alphabet)
    by_cap = int(math.floor(math.log(cfg.cap) / math.log(k))) if k > 1 else 2 * D * D - 1
    return min(2 * D * D - 1, by_cap)


def cmd_validate(args, cfg, out):
    model = load_model(args.model)
    g = as_ghmm(model)
    max_len = cfg.max_len if cfg.max_len is not None else _default_max_len(model, cfg)
    k = len(g.alphabet)
    if k**max_len > cfg.cap:
        raise ResourceCapError(f"{k}^{max_len} words exceeds the enumeration cap {cfg.cap}")
    report = validate(g, max_len).to_dict()
    if isinstance(model, QHMM):
        report["qhmm"] = diagnostics(model)
    else:
        report["flags"] = asdict(hmm_flags(g))
    emit(report, cfg, out)
    return 0 if report["ok"] else 4


def _prob(model, w):
    return word_probability_q(model, w) if isinstance(model, QHMM) else word_probability(as_ghmm(model), w)


def cmd_prob(args, cfg, out):
    model = load_model(args.model)
    w = () if args.empty or args.word is None else parse_word(args.word, model.alphabet, args.sep)
    emit({"word": list(w), "probability": _prob(model, w)}, cfg, out)
    return 0


def cmd_cond(args, cfg, out):
    model = load_model(args.model)
    hist = parse_word(args.hist, model.alphabet, args.sep)
    fut = parse_word(args.fut, model.alphabet, args.sep)
    if isinstance(model, QHMM):
        p = conditional_probability_q(model, fut, hist)
    else:
        p = conditional_probability(as_ghmm(model), fut, hist)
    emit({"history": list(hist), "future": list(fut), "probability": p}, cfg, out)
    return 0


def cmd_steady(args, cfg, out):
    model = load_model(args.model)
    pi = steady_state(as_ghmm(model)).pi
    emit({"steady_state": pi}, cfg, out)
    return 0


def cmd_sample(args, cfg, out):
    model = load_model(args.model)
    if isinstance(model, QHMM):
        word = sample_qhmm(model, args.n, cfg.seed)
    else:
        word = sample_hmm(as_ghmm(model), args.n, cfg.seed, start=args.start)
    emit({"seed": cfg.seed, "length": args.n, "word": format_word(word, args.sep or "")}, cfg, out)
    return 0


def cmd_convert(args, cfg, out):
    model = load_model(args.model)
    if not isinstance(model, QHMM):
        raise ModelError("convert expects a QHMM")
    g = qhmm_to_ghmm_bloch(model) if args.method == "bloch" else qhmm_to_ghmm_liouville(model)
    if args.all_ones:
        g = to_all_ones_gauge(g)
    return _write_model(g, args, cfg, out)


def _write_model(model, args, cfg, out):
    if getattr(args, "output", None):
        io.save(model, args.output)
        emit({"written": args.output}, cfg, out)
    else:
        out.write(io.dumps(model) + "\n")
    return 0


def cmd_wordlist(args, cfg, out):
    model = load_model(args.model)
    H = sufficient_history_wordlist(model, rtol=cfg.rank_tol)
    F = sufficient_future_wordlist(model, rtol=cfg.rank_tol)
    lists = minimal_wordlists(model, H, F, rtol=cfg.rank_tol)
    emit(
        {
            "sufficient_history": _words(H.words),
            "sufficient_future": _words(F.words),
            "minimal_history": _words(lists.history),
            "minimal_future": _words(lists.future),
            "ell_min": lists.ell_min,
            "zero_probability_directions": _words(H.dropped),
            "bounds": check_wordlist_bounds(model, lists),
        },
        cfg,
        out,
    )
    return 0


def cmd_canonical(args, cfg, out):
    model = load_model(args.model)
    return _write_model(standard_ghmm(model, rtol=cfg.rank_tol), args, cfg, out)


def cmd_bound(args, cfg, out):
    model = load_model(args.model)
    std = standard_ghmm(model, rtol=cfg.rank_tol)
    payload = dimension_bound(std.dim).to_dict()
    if args.entropy:
        payload["entropy"] = entropy_dimension_witness(as_ghmm(model)).to_dict()
    emit(payload, cfg, out)
    return 0


def cmd_equiv(args, cfg, out):
    a, b = load_model(args.a), load_model(args.b)
    kwargs = {"tol": cfg.tol}
    if args.method == "length":
        kwargs["cap"] = cfg.cap
    else:
        kwargs["rtol"] = cfg.rank_tol
    report = equivalent(a, b, args.method, **kwargs)
    emit(report.to_dict(), cfg, out)
    return 0 if report.equal else EXIT_NOT_EQUAL


def cmd_zoo(args, cfg, out):
    if args.action == "list":
        entries = [zoo.load(n, verify=False) for n in zoo.names()]
        emit({e.name: e.description for e in entries}, cfg, out)
        return 0
    if not args.name:
        raise ModelError("zoo export needs a name")
    return _write_model(zoo.load(args.name).model, args, cfg, out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="probability comparison tolerance")
    common.add_argument("--rank-tol", dest="rank_tol", type=float, help="relative rank threshold")
    common.add_argument("--max-len", dest="max_len", type=int, help="validation word length")
    common.add_argument("--cap", type=int, help="maximum number of words to enumerate")
    common.add_argument("--format", choices=["json", "table"])
    common.add_argument("-s", "--seed", type=int)
    common.add_argument("--config", help="JSON file with any of the options above")
    common.add_argument("--sep", help="symbol separator for multi-character alphabets")

    parser = argparse.ArgumentParser(prog="ghmmcanon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="bounded validity check")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("prob", parents=[common], help="word probability")
    p.add_argument("model")
    p.add_argument("word", nargs="?")
    p.add_argument("--empty", action="store_true", help="use the empty word")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("cond", parents=[common], help="P(future | history)")
    p.add_argument("model")
    p.add_argument("hist")
    p.add_argument("fut")
    p.set_defaults(func=cmd_cond)

    p = sub.add_parser("steady", parents=[common], help="steady state of the net operator")
    p.add_argument("model")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sample", parents=[common], help="sample a word")
    p.add_argument("model")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--start", default="eta0", help="HMM start: eta0 or steady")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("convert", parents=[common], help="QHMM -> GHMM")
    p.add_argument("model")
    p.add_argument("--method", choices=["bloch", "liouville"], default="bloch")
    p.add_argument("--all-ones", action="store_true", help="transform to the all-ones gauge")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("wordlist", parents=[common], help="sufficient and minimal wordlists")
    p.add_argument("model")
    p.set_defaults(func=cmd_wordlist)

    p = sub.add_parser("canonical", parents=[common], help="standard GHMM")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("bound", parents=[common], help="quantum memory lower bound")
    p.add_argument("model")
    p.add_argument("--entropy", action="store_true", help="add the entropy witness (unifilar HMMs)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("equiv", parents=[common], help="process equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--method", choices=["thm1", "length", "canonical"], default="canonical")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("zoo", parents=[common], help="built-in example models")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_zoo)
    return parser


def run(argv=None, out=None, err=None):
    """Execute one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        return args.func(args, cfg, out)
    except GhmmCanonError as exc:
        err.write(f"error: {exc}\n")
        return exc.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

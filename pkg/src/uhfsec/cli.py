"""Command-line front end: ``uhfsec <command> [<action>] [options]``.

Every command writes one JSON report (stdout or ``--out``) and a short human
summary to stderr. The exit status is 0 iff every check in the report
passes, 1 if a check fails, 2 on usage or config errors and 3 when an
enumeration budget is exceeded.
"""

import argparse
from contextlib import contextmanager
import math
import os
import sys
import time
import warnings
from fractions import Fraction

import numpy as np

from uhfsec import __version__
from uhfsec.bits import format_bits, parse_bitstring, to_hex
from uhfsec.bounds import awgn_imax_bound, channel_lhl_bound, lhl_bound_kl, lhl_bound_tv
from uhfsec.channels import augment_with_encoder, capacity, parse_channel, product_channel
from uhfsec.codes import LinearCode, parse_code
from uhfsec.config import coerce, load_config
from uhfsec.errors import BUDGET_ENV, BudgetExceededError, ConfigError
from uhfsec.gf2 import find_valid_lengths, is_valid_length
from uhfsec.leakage import channel_leakage_reports, exact_extraction_leakage
from uhfsec.measures import max_information, min_entropy, smooth_max_information, smooth_min_entropy
from uhfsec.report import Report
from uhfsec.rng import make_rng
from uhfsec.ska import SkaConfig, ska_exact_security_eval, ska_simulate
from uhfsec.uhf import make_family, verify_balanced, verify_uhf_property
from uhfsec.wiretap import (
    WiretapConfig,
    multi_block_leakage,
    seed_recycling_run,
    wiretap_exact_leakage,
    wiretap_simulate,
)

REQUIRED = object()
GLOBAL_KEYS = ("master_seed", "out", "timing", "budget")


def _int(text):
    return int(text, 0)


def _hex(text):
    return int(str(text), 16)


def _floats(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


# (flag, type, default, help); type names double as config coercions
CODE_OPTS = [
    ("--code", str, "hamming74", "code name (hamming74, golay24, repetition:N, bitrep:KxR, identity:N)"),
    ("--generator", str, None, "generator matrix file (overrides --code)"),
    ("--parity-check", str, None, "parity-check matrix file"),
]

COMMANDS = {
    ("fields", None): [("--max-l", int, 100, "largest length to list")],
    ("uhf", "eval"): [
        ("--kind", str, "field", "field, toeplitz or modified-toeplitz"),
        ("--l", int, REQUIRED, "input bits"), ("--k", int, REQUIRED, "output bits"),
        ("--seed-hex", "hex", REQUIRED, "seed"), ("--input-hex", "hex", REQUIRED, "input"),
    ],
    ("uhf", "invert"): [
        ("--kind", str, "field", "field or modified-toeplitz"),
        ("--l", int, REQUIRED, "input bits"), ("--k", int, REQUIRED, "output bits"),
        ("--seed-hex", "hex", REQUIRED, "seed"), ("--m-hex", "hex", REQUIRED, "output value"),
        ("--r-hex", "hex", 0, "l-k free bits selecting the preimage"),
    ],
    ("uhf", "verify"): [
        ("--kind", str, "field", "family kind"),
        ("--l", int, REQUIRED, "input bits"), ("--k", int, REQUIRED, "output bits"),
        ("--expect-balanced", bool, False, "also require the family to be balanced"),
    ],
    ("ecc", "encode"): CODE_OPTS + [("--bits", str, REQUIRED, "message bits, MSB first")],
    ("ecc", "decode"): CODE_OPTS + [("--bits", str, REQUIRED, "received word")],
    ("ecc", "leader"): CODE_OPTS + [("--bits", str, REQUIRED, "word")],
    ("channel", "info"): [("--channel", str, REQUIRED, "channel spec, e.g. bsc:0.1")],
    ("channel", "capacity"): [("--channel", str, REQUIRED, "channel spec")],
    ("channel", "maxinfo"): CODE_OPTS[1:] + [
        ("--channel", str, REQUIRED, "base channel spec"),
        ("--code", str, None, "augment W^n with this code's encoder"),
        ("--eps", "floats", [0.0], "smoothing parameters"),
    ],
    ("measure", "hmin"): [
        ("--probs", "floats", REQUIRED, "probabilities"),
        ("--eps", float, 0.0, "smoothing parameter"),
    ],
    ("measure", "extraction"): [
        ("--kind", str, "field", "family kind"),
        ("--l", int, 4, "input bits"), ("--k", "floats", [1, 2, 3], "output bits (list)"),
        ("--nz", "floats", [1, 4], "side-information alphabet sizes (list)"),
        ("--instances", int, 100, "random joints per (k, |Z|)"),
        ("--joint", str, None, "text file with a 2^l x |Z| joint instead of random ones"),
    ],
    ("measure", "channel"): [
        ("--kind", str, "field", "family kind"),
        ("--l", int, 4, "input bits"), ("--k", int, REQUIRED, "output bits"),
        ("--channel", str, REQUIRED, "per-bit channel; V = channel^l"),
        ("--eps", "floats", [0.0], "smoothing parameters"),
        ("--messages", str, "all", "'all' or 'nonzero'"),
    ],
    ("bounds", "lhl"): [
        ("--k", float, REQUIRED, "key bits"), ("--h", float, REQUIRED, "conditional min-entropy"),
        ("--eps", float, 0.0, "smoothing"), ("--z2", int, 1, "|Z2|"),
    ],
    ("bounds", "channel"): [
        ("--b", float, REQUIRED, "balance parameter"), ("--imax", float, REQUIRED, "I_max^eps"),
        ("--eps", float, 0.0, "smoothing"), ("--k", float, REQUIRED, "message bits"),
    ],
    ("bounds", "awgn"): [
        ("--n", int, REQUIRED, "block length"), ("--delta", float, REQUIRED, "delta in (0, 1/2)"),
        ("--power", float, REQUIRED, "input power P"), ("--sigma2", float, REQUIRED, "noise variance"),
    ],
    ("ska", "simulate"): CODE_OPTS + [
        ("--eps-src", float, REQUIRED, "source crossover"), ("--delta", float, 0.25, "target TV"),
        ("--trials", int, 10000, "Monte Carlo trials"), ("--k", int, None, "override key length"),
        ("--kind", str, "field", "family kind"),
    ],
    ("ska", "eval"): CODE_OPTS + [
        ("--eps-src", float, REQUIRED, "source crossover"), ("--delta", float, 0.25, "target TV"),
        ("--k", int, None, "key length (default: selection rule)"),
        ("--eve-q", float, None, "eavesdropper sees X^n through BSC(q)"),
        ("--entropy-mode", str, "exact", "'exact' or 'order2'"),
        ("--kind", str, "field", "family kind"),
    ],
    ("wiretap", "simulate"): CODE_OPTS + [
        ("--k", int, REQUIRED, "message bits"), ("--T", str, "noiseless", "legitimate channel"),
        ("--W", str, None, "eavesdropper channel"), ("--V", str, None, "degrading channel (W = V o T)"),
        ("--trials", int, 10000, "Monte Carlo trials"), ("--messages", str, "nonzero", "message set"),
    ],
    ("wiretap", "eval"): CODE_OPTS + [
        ("--k", int, REQUIRED, "message bits"), ("--T", str, "noiseless", "legitimate channel"),
        ("--W", str, None, "eavesdropper channel"), ("--V", str, None, "degrading channel"),
        ("--eps", "floats", [0.0], "smoothing parameters"), ("--messages", str, "nonzero", "message set"),
    ],
    ("wiretap", "recycle"): CODE_OPTS + [
        ("--k", int, REQUIRED, "message bits"), ("--T", str, "noiseless", "legitimate channel"),
        ("--W", str, None, "eavesdropper channel"), ("--V", str, None, "degrading channel"),
        ("--t", int, 2, "blocks sharing one seed"), ("--c", int, None, "seed transport blocks"),
        ("--messages", str, "nonzero", "message set"), ("--l", int, None, "field length"),
    ],
    ("bench", None): [
        ("--kind", str, "field", "field or toeplitz"), ("--l", int, 60, "input bits"),
        ("--k", int, None, "output bits (default l/2)"), ("--mb", float, 1.0, "input megabytes"),
    ],
}

HELP = {
    "fields": "list valid field lengths", "uhf": "evaluate, invert or verify a hash family",
    "ecc": "linear code operations", "channel": "channel properties",
    "measure": "information measures and exact leakage", "bounds": "closed-form bounds",
    "ska": "secret key agreement", "wiretap": "seeded wiretap coding", "bench": "hashing throughput",
}


def _dest(flag):
    return flag.lstrip("-").replace("-", "_")


def _argtype(kind):
    if kind is int:
        return _int
    if kind == "floats":
        return _floats
    if kind == "hex":
        return _hex
    return kind


def _global_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=_int, default=argparse.SUPPRESS, help="64-bit master seed")
    p.add_argument("--out", default=argparse.SUPPRESS, help="write the JSON report here")
    p.add_argument("--config", default=argparse.SUPPRESS, help="YAML experiment config")
    p.add_argument("--budget", type=_int, default=argparse.SUPPRESS,
                   help=f"enumeration budget for this run (default ${BUDGET_ENV} or 2^24)")
    p.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                   help="include wall time in the report (breaks byte reproducibility)")
    return p


def build_parser():
    parent = _global_parent()
    parser = argparse.ArgumentParser(prog="uhfsec", parents=[parent], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"uhfsec {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    groups = {}
    for (cmd, action), opts in COMMANDS.items():
        if action is None:
            target = sub.add_parser(cmd, parents=[parent], help=HELP[cmd])
        else:
            if cmd not in groups:
                gp = sub.add_parser(cmd, parents=[parent], help=HELP[cmd])
                groups[cmd] = gp.add_subparsers(dest="action", metavar="action")
            target = groups[cmd].add_parser(action, parents=[parent])
        for flag, kind, _default, text in opts:
            if kind is bool:
                target.add_argument(flag, action="store_const", const=True, default=None, help=text)
            else:
                target.add_argument(flag, type=_argtype(kind), default=None, help=text)
        target.set_defaults(_key=(cmd, action))
    return parser


def _resolve(args, parser, config_options):
    """Fill options from the config, then from defaults; report missing ones."""
    key = args._key
    opts = COMMANDS[key]
    by_dest = {_dest(flag): (kind, default) for flag, kind, default, _ in opts}
    for name, (value, line, field) in config_options.items():
        if name in GLOBAL_KEYS:
            continue
        dest = name.replace("-", "_")
        if dest not in by_dest:
            raise ConfigError(f"'{name}' is not an option of '{' '.join(k for k in key if k)}'",
                              field=field, line=line)
        kind, _ = by_dest[dest]
        if getattr(args, dest) is None:
            setattr(args, dest, coerce(value, kind, field, line))
    missing = []
    for dest, (kind, default) in by_dest.items():
        if getattr(args, dest) is None:
            if default is REQUIRED:
                missing.append("--" + dest.replace("_", "-"))
            else:
                setattr(args, dest, default)
    if missing:
        parser.error(f"missing required option(s): {', '.join(missing)}")
    return {dest: getattr(args, dest) for dest in by_dest}


# --- handlers -------------------------------------------------------------


def _code(opts):
    if opts.get("generator"):
        return LinearCode.from_files(opts["generator"], opts.get("parity_check"))
    return parse_code(opts["code"])


def run_fields(o, rep, seed):
    lengths = find_valid_lengths(o["max_l"])
    rep.results["valid_lengths"] = lengths
    rep.check("listed lengths are valid", len(lengths), None, all(is_valid_length(l) for l in lengths))


def run_uhf_eval(o, rep, seed):
    fam = make_family(o["kind"], o["l"], o["k"])
    fam.check_seed(o["seed_hex"])
    y = fam.eval(o["seed_hex"], o["input_hex"])
    rep.results.update({"output": y, "output_hex": to_hex(y, max(fam.k, 1)),
                        "output_bits": format(y, f"0{fam.k}b") if fam.k else "",
                        "family": fam.descriptor()})


def run_uhf_invert(o, rep, seed):
    fam = make_family(o["kind"], o["l"], o["k"])
    if not hasattr(fam, "invert"):
        raise ValueError(f"kind {o['kind']!r} has no inverse map")
    s, m = o["seed_hex"], o["m_hex"]
    u = fam.invert(s, m, o["r_hex"])
    rep.results.update({"preimage": u, "preimage_hex": to_hex(u, fam.l),
                        "preimage_bits": format(u, f"0{fam.l}b"), "family": fam.descriptor()})
    rep.check("f_s(u) = m", fam.eval(s, u), m, fam.eval(s, u) == m)


def run_uhf_verify(o, rep, seed):
    fam = make_family(o["kind"], o["l"], o["k"])
    frac = verify_uhf_property(fam)
    bound = Fraction(1, 1 << fam.k)
    rep.check("collision fraction <= 2^-k", frac, bound, frac <= bound)
    bal = verify_balanced(fam)
    rep.results.update({"family": fam.descriptor(), "balanced": bal.as_dict()})
    if o["expect_balanced"]:
        rep.check("balanced", bal.b, fam.l - fam.k, bal.balanced)


def run_ecc(action):
    def handler(o, rep, seed):
        code = _code(o)
        bits = parse_bitstring(o["bits"])
        rep.results["code"] = code.describe()
        if action == "encode":
            rep.results["codeword"] = format_bits(code.encode(bits))
        elif action == "decode":
            c = code.decode_nearest(bits)
            rep.results.update({"codeword": format_bits(c), "message": format_bits(code.message_of(c)),
                                "syndrome": format_bits(code.syndrome(bits))})
        else:
            rep.results.update({"leader": format_bits(code.coset_leader(bits)),
                                "syndrome": format_bits(code.syndrome(bits))})
    return handler


def run_channel_info(o, rep, seed):
    ch = parse_channel(o["channel"])
    rep.results.update({"channel": ch.describe(), "matrix": ch.matrix})


def run_channel_capacity(o, rep, seed):
    ch = parse_channel(o["channel"])
    rep.results.update({"channel": ch.describe(), "capacity": capacity(ch)})


def run_channel_maxinfo(o, rep, seed):
    base = parse_channel(o["channel"])
    ch = base
    if o["code"] or o["generator"]:
        code = _code(o)
        ch = augment_with_encoder(base, code.n, code)
        n_cw = code.n * capacity(base)
        rep.results["n_capacity"] = n_cw
        rep.results["augmented"] = {"code": code.describe()}
    rep.results["channel"] = base.describe()
    rep.results["imax"] = max_information(ch)
    rep.results["smooth"] = [{"eps": e, "imax_eps": smooth_max_information(ch, e).bits,
                              "residual": smooth_max_information(ch, e).residual} for e in o["eps"]]
    if "n_capacity" in rep.results:
        rep.results["slack"] = rep.results["imax"] - rep.results["n_capacity"]


def run_measure_hmin(o, rep, seed):
    p = np.asarray(o["probs"])
    rep.results.update({"hmin": min_entropy(p), "eps": o["eps"],
                        "smooth_hmin": smooth_min_entropy(p, o["eps"]),
                        "smooth_hmin_normalized": smooth_min_entropy(p, o["eps"], normalized=True)})


def run_measure_extraction(o, rep, seed):
    ks = [int(k) for k in o["k"]]
    rows = []
    if o["joint"]:
        P = np.loadtxt(o["joint"], ndmin=2)
        cases = [(k, P) for k in ks]
    else:
        cases = []
        for k in ks:
            for nz in (int(v) for v in o["nz"]):
                for i in range(o["instances"]):
                    rng = make_rng(seed, k, nz, i)
                    cases.append((k, rng.dirichlet(np.ones((1 << o["l"]) * nz)).reshape(-1, nz)))
    worst = {"tv": -math.inf, "kl": -math.inf, "pinsker": -math.inf}
    ok = {"tv": True, "kl": True, "pinsker": True}
    for k, P in cases:
        r = exact_extraction_leakage(make_family(o["kind"], o["l"], k), P)
        ok["tv"] &= r["tv"] <= r["tv_bound"] + 1e-12
        ok["kl"] &= r["kl"] <= r["kl_bound"] + 1e-12
        ok["pinsker"] &= r["tv"] <= r["pinsker_tv_bound"] + 1e-12
        worst["tv"] = max(worst["tv"], r["tv"] - r["tv_bound"])
        worst["kl"] = max(worst["kl"], r["kl"] - r["kl_bound"])
        worst["pinsker"] = max(worst["pinsker"], r["tv"] - r["pinsker_tv_bound"])
        rows.append({"k": k, "nz": P.shape[1], "tv": r["tv"], "tv_bound": r["tv_bound"],
                     "kl": r["kl"], "kl_bound": r["kl_bound"]})
    rep.results.update({"instances": len(rows), "worst_margin": worst,
                        "first": rows[:5]})
    rep.check("tv <= lhl_bound_tv on every instance", worst["tv"], 0.0, ok["tv"])
    rep.check("kl <= lhl_bound_kl on every instance", worst["kl"], 0.0, ok["kl"])
    rep.check("pinsker tv <= sqrt(kl ln2 / 2) on every instance", worst["pinsker"], 0.0, ok["pinsker"])


def run_measure_channel(o, rep, seed):
    fam = make_family(o["kind"], o["l"], o["k"])
    V = product_channel(parse_channel(o["channel"]), o["l"])
    reports = channel_leakage_reports(fam, V, o["eps"], o["messages"])
    rep.results["reports"] = [r.as_dict() for r in reports]
    for r in reports:
        rep.check(f"I(M;Z,S) <= channel bound at eps={r.eps:g}", r.exact, r.bound, r.passed)


def run_bounds_lhl(o, rep, seed):
    rep.results.update({
        "tv_bound": lhl_bound_tv(o["k"], o["h"], o["eps"], o["z2"]),
        "kl_bound": lhl_bound_kl(o["k"], o["h"]),
    })


def run_bounds_channel(o, rep, seed):
    rep.results["bound"] = channel_lhl_bound(o["b"], o["imax"], o["eps"], o["k"])


def run_bounds_awgn(o, rep, seed):
    res = awgn_imax_bound(o["n"], o["delta"], o["power"], o["sigma2"])
    rep.results.update(res)
    total = sum(res["terms"].values())
    rep.check("value = sum of terms", res["value"], total, math.isclose(res["value"], total, rel_tol=1e-12))


def _ska_config(o):
    return SkaConfig(_code(o), o["eps_src"], o["delta"], uhf_kind=o["kind"], k=o["k"],
                     **{key: o[key] for key in ("eve_q", "entropy_mode") if key in o})


def run_ska_simulate(o, rep, seed):
    cfg = _ska_config(o)
    res = ska_simulate(cfg, o["trials"], seed)
    rep.results.update({"ska": cfg.describe(), **res})
    rep.check("reconciliation rate within 3 sigma of analytic", res["reconciliation_rate"],
              res["analytic_reconciliation"], res["within_3sigma"])


def run_ska_eval(o, rep, seed):
    cfg = _ska_config(o)
    report = ska_exact_security_eval(cfg)
    rep.results.update({"ska": cfg.describe(), "report": report.as_dict()})
    rep.check("TV(K,Pi,Z,S) <= delta", report.exact, report.bound, report.passed)


def _wiretap_config(o, caught):
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        cfg = WiretapConfig(
            _code(o), o["k"], T=parse_channel(o["T"]),
            W=parse_channel(o["W"]) if o["W"] else None,
            V=parse_channel(o["V"]) if o["V"] else None,
            l=o.get("l"), messages=o["messages"],
        )
    caught.extend(str(x.message) for x in w)
    return cfg


def run_wiretap_simulate(o, rep, seed):
    caught = []
    cfg = _wiretap_config(o, caught)
    res = wiretap_simulate(cfg, o["trials"], seed)
    rep.results.update({"wiretap": cfg.describe(), "warnings": caught, **res})
    rep.check("block error within 3 sigma of analytic", res["block_error_rate"],
              res["analytic_block_error"], res["within_3sigma"])


def run_wiretap_eval(o, rep, seed):
    caught = []
    cfg = _wiretap_config(o, caught)
    reports = wiretap_exact_leakage(cfg, o["eps"])
    rep.results.update({"wiretap": cfg.describe(), "warnings": caught,
                        "reports": [r.as_dict() for r in reports]})
    for r in reports:
        rep.check(f"I(M;Z,S) <= channel bound at eps={r.eps:g}", r.exact, r.bound, r.passed)


def run_wiretap_recycle(o, rep, seed):
    caught = []
    cfg = _wiretap_config(o, caught)
    run = seed_recycling_run(cfg, o["t"], make_rng(seed, 0), o["c"])
    rep.results.update({"wiretap": cfg.describe(), "warnings": caught, "run": run})
    try:
        multi = multi_block_leakage(cfg, o["t"])
    except BudgetExceededError as exc:
        rep.results["multi_block"] = {"skipped": str(exc)}
        return
    rep.results["multi_block"] = multi
    rep.check("multi-block leakage <= t x single-block", multi["with_seed"], run["leakage_bound"],
              multi["with_seed"] <= run["leakage_bound"] * (1 + 1e-9) + 1e-12)


def run_bench(o, rep, seed):
    from uhfsec.bench import bench_hash

    rep.results.update(bench_hash(o["l"], o["mb"], o["kind"], o["k"], seed))


HANDLERS = {
    ("fields", None): run_fields,
    ("uhf", "eval"): run_uhf_eval,
    ("uhf", "invert"): run_uhf_invert,
    ("uhf", "verify"): run_uhf_verify,
    ("ecc", "encode"): run_ecc("encode"),
    ("ecc", "decode"): run_ecc("decode"),
    ("ecc", "leader"): run_ecc("leader"),
    ("channel", "info"): run_channel_info,
    ("channel", "capacity"): run_channel_capacity,
    ("channel", "maxinfo"): run_channel_maxinfo,
    ("measure", "hmin"): run_measure_hmin,
    ("measure", "extraction"): run_measure_extraction,
    ("measure", "channel"): run_measure_channel,
    ("bounds", "lhl"): run_bounds_lhl,
    ("bounds", "channel"): run_bounds_channel,
    ("bounds", "awgn"): run_bounds_awgn,
    ("ska", "simulate"): run_ska_simulate,
    ("ska", "eval"): run_ska_eval,
    ("wiretap", "simulate"): run_wiretap_simulate,
    ("wiretap", "eval"): run_wiretap_eval,
    ("wiretap", "recycle"): run_wiretap_recycle,
    ("bench", None): run_bench,
}


@contextmanager
def _budget_env(budget):
    """Expose a per-run budget to every enumeration through the env override."""
    if budget is None:
        yield
        return
    saved = os.environ.get(BUDGET_ENV)
    os.environ[BUDGET_ENV] = str(budget)
    try:
        yield
    finally:
        if saved is None:
            del os.environ[BUDGET_ENV]
        else:
            os.environ[BUDGET_ENV] = saved


def _config_argv(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv, {}
    command, options = load_config(known.config)
    tokens = command.split()
    if tokens[0] not in HELP:
        raise ConfigError(f"unknown command {command!r}", field="command")
    head = argv[0] if argv and not argv[0].startswith("-") else None
    if head is None:
        argv = tokens + list(argv)
    elif argv[: len(tokens)] != tokens:
        raise ConfigError(f"command line names '{' '.join(argv[:2])}' but config says '{command}'",
                          field="command")
    return argv, options


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, cfg = _config_argv(argv)
    except ConfigError as exc:
        print(f"uhfsec: config error: {exc}", file=sys.stderr)
        return 2
    if not argv:
        parser.print_usage(sys.stderr)
        print("uhfsec: error: a command is required", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "_key", None) is None:
        parser.print_usage(sys.stderr)
        what = "an action" if args.command else "a command"
        print(f"uhfsec: error: {what} is required", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        opts = _resolve(args, parser, cfg)
        seed = getattr(args, "seed", None)
        if seed is None and "master_seed" in cfg:
            value, line, field = cfg["master_seed"]
            seed = coerce(value, int, field, line)
        seed = 0 if seed is None else seed
        if not 0 <= seed < 1 << 64:
            raise ConfigError("master seed must be a 64-bit unsigned integer", field="master_seed")
        out = getattr(args, "out", None) or (cfg["out"][0] if "out" in cfg else None)
        timing = getattr(args, "timing", False) or bool(cfg.get("timing", (False,))[0])
        budget = getattr(args, "budget", None)
        if budget is None and "budget" in cfg:
            value, line, field = cfg["budget"]
            budget = coerce(value, int, field, line)
        if budget is not None and budget <= 0:
            raise ConfigError("enumeration budget must be positive", field="budget")
        command = " ".join(k for k in args._key if k)
        rep = Report(command, opts, seed)
        with _budget_env(budget):
            HANDLERS[args._key](opts, rep, seed)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"uhfsec: config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"uhfsec: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"uhfsec: error: {exc}", file=sys.stderr)
        return 2
    if timing:
        rep.wall_time = time.perf_counter() - t0
    text = rep.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    rep.summary()
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())

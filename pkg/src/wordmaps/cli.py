"""Batch command-line front end.

Every operation of the library is exposed as a subcommand producing a
reproducible CSV, JSON or DOT artifact.  Artifacts are byte-stable for a
fixed input, seed and version: header comments echo the configuration
(excluding --workers and --out, which never affect the numbers), and all
exact values are printed as integer numerator/denominator pairs.

Exit codes: 0 success; 2 usage or word-syntax error; 3 hypothesis
violation (the named hypothesis is echoed); 4 budget exceeded;
5 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, extensions, measures, mobius, perm_powers, stallings
from .errors import (
    BudgetExceededError,
    HypothesisError,
    InternalInvariantError,
    WordSyntaxError,
)
from .extensions import INFINITE_RANK
from .measures import DEFAULT_BUDGET, FiniteGroupTable
from .words import Word, cyclic_reduce, maximal_root, parse, substitute


# ----------------------------------------------------------------------
# Argument helpers
# ----------------------------------------------------------------------


def parse_n_range(text: str) -> list[int]:
    """Inclusive "a..b", or a single integer."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        out = list(range(int(lo), int(hi) + 1))
    else:
        out = [int(text)]
    if not out:
        raise ValueError(f"empty N range {text!r}")
    if any(n < 1 for n in out):
        raise ValueError("N must be positive")
    return out


def parse_group(text: str):
    """"S<k>" for a symmetric group, or "cayley:<path>" for a JSON table."""
    if text.startswith("S") and text[1:].isdigit():
        return int(text[1:])
    if text.startswith("cayley:"):
        with open(text[len("cayley:") :]) as fh:
            return FiniteGroupTable.from_json_dict(json.load(fh))
    raise ValueError(f"unrecognized group specifier {text!r}")


def parse_words(text: str, rank: int | None) -> list[Word]:
    return [parse(part, rank) for part in text.split(",") if part.strip()]


def _dec(x: Fraction) -> str:
    return f"{float(x):.15g}"


def _frac_fields(x: Fraction) -> list:
    return [x.numerator, x.denominator, _dec(x)]


def _pi_json(value: float):
    return "infinity" if value == INFINITE_RANK else int(value)


# ----------------------------------------------------------------------
# Artifact emission
# ----------------------------------------------------------------------

_CONFIG_SKIP = {"out", "workers", "func", "command", "subcommand"}


def _config_echo(args: argparse.Namespace) -> str:
    items = sorted(
        (k, v) for k, v in vars(args).items() if k not in _CONFIG_SKIP and v is not None
    )
    return " ".join(f"{k}={v}" for k, v in items)


def _emit(args, text: str, summary: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
        print(summary)
        print(f"wrote {args.out}")
    else:
        print(summary)
        sys.stdout.write(text)


def emit_csv(args, columns: list[str], rows: list[list]):
    lines = [
        f"# version={__version__}",
        f"# command={args.command} {args.subcommand}",
        f"# config={_config_echo(args)}",
        f"# seed={getattr(args, 'seed', None)}",
        ",".join(columns),
    ]
    lines += [",".join(str(c) for c in row) for row in rows]
    text = "\n".join(lines) + "\n"
    _emit(args, text, f"{args.command} {args.subcommand}: {len(rows)} row(s)")


def emit_json(args, obj, summary: str | None = None):
    meta = {
        "version": __version__,
        "command": f"{args.command} {args.subcommand}",
        "config": _config_echo(args),
        "seed": getattr(args, "seed", None),
    }
    text = json.dumps({"meta": meta, "result": obj}, indent=2, sort_keys=True) + "\n"
    _emit(args, text, summary or f"{args.command} {args.subcommand}")


def emit_dot(args, text: str):
    _emit(args, text, f"{args.command} {args.subcommand}: DOT graph")


# ----------------------------------------------------------------------
# word subcommands
# ----------------------------------------------------------------------


def cmd_word_parse(args):
    w = parse(args.word, args.rank)
    emit_json(
        args,
        {"input": args.word, "word": str(w), "rank": w.ambient_rank, "length": len(w)},
        f"{w} (rank {w.ambient_rank}, length {len(w)})",
    )


def cmd_word_reduce(args):
    w = parse(args.word, args.rank)
    core, conj = cyclic_reduce(w)
    emit_json(
        args,
        {
            "reduced": str(w),
            "cyclic_core": str(core),
            "conjugator": str(conj),
        },
        f"reduced: {w}; cyclic core: {core}",
    )


def cmd_word_root(args):
    w = parse(args.word, args.rank)
    u, b = maximal_root(w)
    emit_json(args, {"root": str(u), "exponent": b}, f"{w} = ({u})^{b}")


def cmd_word_substitute(args):
    w = parse(args.word, args.rank)
    images = parse_words(args.images, args.image_rank)
    result = substitute(w, images)
    emit_json(args, {"result": str(result)}, f"image: {result}")


# ----------------------------------------------------------------------
# graph subcommands
# ----------------------------------------------------------------------


def _graph_from_args(args) -> stallings.CoreGraph:
    gens = parse_words(args.gens, args.rank)
    rank = args.rank or max(g.ambient_rank for g in gens)
    return stallings.from_generators([g.with_rank(rank) for g in gens], rank)


def cmd_graph_fold(args):
    g = _graph_from_args(args)
    if args.format == "dot":
        emit_dot(args, stallings.to_dot(g))
        return
    emit_json(
        args,
        {
            "vertices": g.num_vertices,
            "edges": sorted(g.edges),
            "rank": g.rank,
            "basis": [str(b) for b in stallings.basis(g)],
        },
        f"core graph: {g.num_vertices} vertices, {len(g.edges)} edges, rank {g.rank}",
    )


def cmd_graph_export(args):
    emit_dot(args, stallings.to_dot(_graph_from_args(args)))


# ----------------------------------------------------------------------
# ext subcommands
# ----------------------------------------------------------------------


def cmd_ext_ae(args):
    poset = extensions.algebraic_extensions(_graph_from_args(args))
    if args.format == "dot":
        emit_dot(args, poset.to_dot())
        return
    _emit(
        args,
        poset.to_json() + "\n",
        f"{len(poset.algebraic_indices())} algebraic extension(s) "
        f"among {len(poset.nodes)} quotient(s)",
    )


def cmd_ext_pi(args):
    w = parse(args.word, args.rank)
    H = stallings.from_generators([w], w.ambient_rank)
    value, count, winners = extensions.pi_details(H)
    emit_json(
        args,
        {
            "pi": _pi_json(value),
            "C": count,
            "extensions": [[str(b) for b in stallings.basis(g)] for g in winners],
        },
        f"pi = {_pi_json(value)}, C = {count}",
    )


def cmd_ext_pi_iota(args):
    gens = parse_words(args.gens, args.rank)
    images = parse_words(args.images, args.image_rank)
    value, count = extensions.pi_iota(gens, args.rank, images)
    emit_json(
        args,
        {"pi_iota": _pi_json(value), "C": count},
        f"pi_iota = {_pi_json(value)}, C = {count}",
    )


def cmd_ext_ff_closure(args):
    H = _graph_from_args(args)
    if args.in_gens:
        J_gens = parse_words(args.in_gens, H.ambient_rank)
        J = stallings.from_generators(J_gens, H.ambient_rank)
    else:
        J = stallings.rose(H.ambient_rank)
    A = extensions.ff_closure(H, J)
    basis = [str(b) for b in stallings.basis(A)]
    emit_json(
        args,
        {"rank": A.rank, "basis": basis},
        f"free-factor closure: <{', '.join(basis) or '1'}> (rank {A.rank})",
    )


# ----------------------------------------------------------------------
# measure subcommands
# ----------------------------------------------------------------------


def cmd_measure_trw(args):
    w = parse(args.word, args.rank)
    rows = []
    if args.mc:
        for N in args.n:
            mean, err = measures.trw_monte_carlo(
                w, N, args.samples, args.seed, workers=args.workers
            )
            rows.append([N, f"{mean:.15g}", f"{err:.15g}"])
        emit_csv(args, ["N", "estimate", "stderr"], rows)
        return
    for N in args.n:
        rows.append([N] + _frac_fields(measures.trw_exact(w, N, budget=args.budget, workers=args.workers)))
    emit_csv(args, ["N", "numerator", "denominator", "decimal"], rows)


def cmd_measure_phi(args):
    gens = parse_words(args.gens, args.rank)
    rows = [
        [N]
        + _frac_fields(
            measures.phi_exact(gens, args.rank, N, budget=args.budget, workers=args.workers)
        )
        for N in args.n
    ]
    emit_csv(args, ["N", "numerator", "denominator", "decimal"], rows)


def _class_label(key, group) -> str:
    if isinstance(key, tuple):
        return " ".join(str(t) for t in key)
    if isinstance(group, FiniteGroupTable):
        rep = group.conjugacy_classes[key][0]
        return group.name_of(rep)
    return str(key)


def cmd_measure_table(args):
    w = parse(args.word, args.rank)
    group = parse_group(args.group)
    table = measures.word_measure_exact(w, group, budget=args.budget)
    rows = [
        [f'"{_class_label(key, group)}"'] + _frac_fields(p)
        for key, p in table.support
    ]
    emit_csv(args, ["class", "numerator", "denominator", "decimal"], rows)


def cmd_measure_compare(args):
    w1 = parse(args.w1, args.rank)
    w2 = parse(args.w2, args.rank)
    group = parse_group(args.group)
    cmp = measures.compare_measures(w1, w2, group, budget=args.budget)
    obj = {"equal": cmp.equal}
    if not cmp.equal:
        obj |= {
            "witness_class": _class_label(cmp.witness_class, group),
            "prob1": str(cmp.prob1),
            "prob2": str(cmp.prob2),
        }
    emit_json(args, obj, "verdict: " + ("equal" if cmp.equal else "unequal"))


def cmd_measure_epiim(args):
    w = parse(args.word, args.rank)
    group = parse_group(args.group)
    if not isinstance(group, FiniteGroupTable):
        raise ValueError("epiim requires a cayley:<path> group")
    image = sorted(measures.epi_image(w, group, budget=args.budget))
    emit_json(
        args,
        {"image": [group.name_of(a) for a in image], "count": len(image)},
        f"image of the word under surjections: {len(image)} element(s)",
    )


# ----------------------------------------------------------------------
# mobius subcommands
# ----------------------------------------------------------------------


def cmd_mobius_derive(args):
    H = _graph_from_args(args)
    table = mobius.derive_R(H, args.n[0], budget=args.budget, workers=args.workers)
    rows = []
    for i in sorted(table.values):
        g = table.poset.nodes[i]
        basis = ".".join(str(b) for b in stallings.basis(g)) or "1"
        rows.append(
            [f'"{basis}"', g.rank]
            + _frac_fields(table.phi[i])
            + _frac_fields(table.values[i])
        )
    emit_csv(
        args,
        ["extension", "rank", "phi_num", "phi_den", "phi", "R_num", "R_den", "R"],
        rows,
    )


def cmd_mobius_via_expansion(args):
    H = _graph_from_args(args)
    rank = args.rank or H.ambient_rank
    rows = [
        [N]
        + _frac_fields(
            mobius.phi_via_expansion(H, rank, N, budget=args.budget, workers=args.workers)
        )
        for N in args.n
    ]
    emit_csv(args, ["N", "numerator", "denominator", "decimal"], rows)


def cmd_mobius_fit(args):
    w = parse(args.word, args.rank)
    fit = mobius.fit_expansion(w, args.n, budget=args.budget, workers=args.workers)
    emit_json(
        args,
        {
            "pi_estimate": _pi_json(fit.pi_estimate),
            "c_estimate": fit.c_estimate,
            "pi_combinatorial": _pi_json(fit.pi_combinatorial),
            "c_combinatorial": fit.c_combinatorial,
            "residuals": fit.residuals,
            "traces": [[N, str(t)] for N, t in fit.traces],
        },
        f"pi ~ {_pi_json(fit.pi_estimate)}, leading coefficient ~ {fit.c_estimate:.4g}",
    )


def cmd_mobius_inequality(args):
    w = parse(args.word, args.rank)
    images = parse_words(args.images, args.image_rank)
    report = mobius.check_substitution_inequality(
        w, images, args.n, budget=args.budget, workers=args.workers
    )
    if args.format == "json":
        emit_json(
            args,
            {
                "pi_iota": _pi_json(report.pi_iota),
                "C": report.count,
                "all_strict": report.all_strict,
                "rows": [
                    {"N": r.N, "lhs": str(r.lhs), "rhs": str(r.rhs), "strict": r.strict}
                    for r in report.rows
                ],
            },
            f"strict at every N: {report.all_strict}",
        )
        return
    rows = [
        [r.N, r.lhs.numerator, r.lhs.denominator, r.rhs.numerator, r.rhs.denominator,
         "strict" if r.strict else "NOT-STRICT"]
        for r in report.rows
    ]
    emit_csv(args, ["N", "lhs_num", "lhs_den", "rhs_num", "rhs_den", "verdict"], rows)


def cmd_mobius_power_gap(args):
    u = parse(args.word, args.rank)
    report = mobius.check_power_gap(
        u, args.d, args.n, budget=args.budget, workers=args.workers
    )
    rows = [
        [r.N, r.gap.numerator, r.gap.denominator, report.delta - 1,
         r.deviation.numerator, r.deviation.denominator]
        for r in report.rows
    ]
    emit_csv(
        args,
        ["N", "gap_num", "gap_den", "expected", "dev_num", "dev_den"],
        rows,
    )


# ----------------------------------------------------------------------
# perm subcommands
# ----------------------------------------------------------------------


def cmd_perm_cycle_type(args):
    p = perm_powers.parse_cycles(args.perm, args.degree)
    ct = perm_powers.cycle_type(p)
    emit_json(
        args,
        {"degree": ct.degree, "cycle_type": str(ct)},
        f"cycle type: {ct}",
    )


def cmd_perm_is_power(args):
    p = perm_powers.parse_cycles(args.perm, args.degree)
    ok = perm_powers.is_dth_power(p, args.d)
    emit_json(args, {"is_power": ok}, f"is a {args.d}th power: {ok}")


def cmd_perm_root(args):
    p = perm_powers.parse_cycles(args.perm, args.degree)
    root = perm_powers.dth_root(p, args.d)
    emit_json(
        args,
        {"root": perm_powers.format_cycles(root) if root is not None else None},
        "no root" if root is None else f"root: {perm_powers.format_cycles(root)}",
    )


def cmd_perm_moments(args):
    rows = []
    for N in args.n:
        first, second = perm_powers.moments_exact(args.b, args.t, N)
        rows.append([N] + _frac_fields(first) + _frac_fields(second))
    emit_csv(
        args,
        ["N", "first_num", "first_den", "first", "second_num", "second_den", "second"],
        rows,
    )


def cmd_perm_obstruction(args):
    w = parse(args.word, args.rank)
    verdict = perm_powers.word_power_obstruction(
        w, args.d, args.n, sample_budget=args.sample_budget, seed=args.seed
    )
    obj = {
        "word": verdict.word,
        "d": verdict.d,
        "witness_degree": verdict.witness_degree,
        "witness": [perm_powers.format_cycles(p) for p in verdict.witness_tuple]
        if verdict.witness_tuple
        else None,
        "is_power_in_free_group": verdict.is_power_in_free_group,
        "conclusive": verdict.conclusive,
    }
    summary = (
        f"witness at N = {verdict.witness_degree}"
        if verdict.conclusive
        else "no witness found (inconclusive)"
    )
    emit_json(args, obj, summary)


# ----------------------------------------------------------------------
# Parser construction
# ----------------------------------------------------------------------


def _add_common(p, out=True, fmt=None):
    if out:
        p.add_argument("--out", help="write the artifact to this file")
    if fmt:
        p.add_argument("--format", choices=fmt, default=fmt[0])


def _add_budget(p):
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="work-unit cap for exact enumeration")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel workers; never affects the numbers")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wordmaps",
        description="Exact word measures on symmetric and finite groups, "
        "algebraic-extension posets, and the d-th power calculus of permutations.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="command", required=True)

    # ---- word ----
    word = top.add_parser("word", help="parse and transform words").add_subparsers(
        dest="subcommand", required=True
    )
    p = word.add_parser("parse", help="parse a word literal and freely reduce it")
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_word_parse)

    p = word.add_parser("reduce", help="free and cyclic reduction")
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_word_reduce)

    p = word.add_parser("root", help="maximal root: write w = u^b with b maximal")
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_word_root)

    p = word.add_parser("substitute", help="apply x_i -> u_i to a word")
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--images", required=True, help="comma-separated image words")
    p.add_argument("--image-rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_word_substitute)

    # ---- graph ----
    graph = top.add_parser(
        "graph", help="folded core graphs of finitely generated subgroups"
    ).add_subparsers(dest="subcommand", required=True)
    p = graph.add_parser("fold", help="fold the wedge of generator loops")
    p.add_argument("--gens", required=True, help="comma-separated generator words")
    p.add_argument("--rank", type=int)
    _add_common(p, fmt=["json", "dot"])
    p.set_defaults(func=cmd_graph_fold)

    p = graph.add_parser("export", help="DOT rendering of the folded core graph")
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_graph_export)

    # ---- ext ----
    ext = top.add_parser(
        "ext", help="algebraic extensions and primitivity ranks"
    ).add_subparsers(dest="subcommand", required=True)
    p = ext.add_parser("ae", help="enumerate the algebraic extensions of a subgroup")
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p, fmt=["json", "dot"])
    p.set_defaults(func=cmd_ext_ae)

    p = ext.add_parser(
        "pi",
        help="smallest rank of a proper algebraic extension of <w> "
        "(infinite iff w is primitive), with the number C attaining it",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_ext_pi)

    p = ext.add_parser(
        "pi-iota",
        help="relative version under a substitution x_i -> u_i: smallest rank "
        "of an algebraic extension of the image escaping the image subgroup",
    )
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--image-rank", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_ext_pi_iota)

    p = ext.add_parser(
        "ff-closure",
        help="the smallest free factor of the ambient subgroup containing H",
    )
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--in-gens", help="generators of the ambient subgroup J (default: all of F_r)")
    _add_common(p)
    p.set_defaults(func=cmd_ext_ff_closure)

    # ---- measure ----
    measure = top.add_parser(
        "measure", help="exact and sampled word measures"
    ).add_subparsers(dest="subcommand", required=True)
    p = measure.add_parser(
        "trw",
        help="expected number of fixed points of the image of w under a "
        "uniform random homomorphism to S_N",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--n", required=True, type=parse_n_range, help='N or inclusive range "a..b"')
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--mc", action="store_true", default=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed")
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure_trw)

    p = measure.add_parser(
        "phi",
        help="expected number of common fixed points of the images of the "
        "generators of H under a uniform random homomorphism to S_N",
    )
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure_phi)

    p = measure.add_parser(
        "table", help="exact class-aggregated distribution of the image of w"
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--group", required=True, help='"S<k>" or "cayley:<path>"')
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure_table)

    p = measure.add_parser(
        "compare", help="exact equality test of two word measures, with witness"
    )
    p.add_argument("--w1", required=True)
    p.add_argument("--w2", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--group", required=True)
    p.add_argument("--exact", action="store_true", default=True,
                   help="exact enumeration (the only mode for comparison)")
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure_compare)

    p = measure.add_parser(
        "epiim", help="set of values of w over surjective homomorphisms only"
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--group", required=True)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure_epiim)

    # ---- mobius ----
    mob = top.add_parser(
        "mobius",
        help="derivation of the joint-fixed-point functional over the "
        "algebraic-extension poset",
    ).add_subparsers(dest="subcommand", required=True)
    p = mob.add_parser(
        "derive", help="R values of every algebraic extension of H at one N"
    )
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_mobius_derive)

    p = mob.add_parser(
        "via-expansion",
        help="reconstruct the ambient expected-fixed-point value as the sum "
        "of R over all algebraic extensions",
    )
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_mobius_via_expansion)

    p = mob.add_parser(
        "fit",
        help="fit the 1 + C N^(1-pi) expansion of the expected fixed points "
        "of w and compare with the combinatorial pi and C",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_mobius_fit)

    p = mob.add_parser(
        "inequality",
        help="strict increase of the expected fixed points under a "
        "substitution whose images do not generate a free factor; the "
        "hypothesis validator rejects words lying in a proper free factor",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--images", required=True)
    p.add_argument("--image-rank", type=int)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p, fmt=["csv", "json"])
    p.set_defaults(func=cmd_mobius_inequality)

    p = mob.add_parser(
        "power-gap",
        help="gap between the expected fixed points of u^d and of u, "
        "against the number of divisors of d minus one",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_budget(p)
    _add_common(p)
    p.set_defaults(func=cmd_mobius_power_gap)

    # ---- perm ----
    perm = top.add_parser(
        "perm", help="cycle statistics and d-th powers of permutations"
    ).add_subparsers(dest="subcommand", required=True)
    p = perm.add_parser("cycle-type", help="cycle type of a permutation")
    p.add_argument("--perm", required=True, help='cycle notation, e.g. "(1 2 3)(4 5)"')
    p.add_argument("--degree", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_perm_cycle_type)

    p = perm.add_parser(
        "is-power",
        help="d-th power test: for every cycle length t, the number of "
        "t-cycles must be divisible by the product over primes p | t of "
        "p^(v_p(d))",
    )
    p.add_argument("--perm", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_perm_is_power)

    p = perm.add_parser("root", help="construct a d-th root, or report none")
    p.add_argument("--perm", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_perm_root)

    p = perm.add_parser(
        "moments",
        help="exact first and second moments of the number of t-cycles of "
        "sigma^b for uniform sigma in S_N",
    )
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", required=True, type=parse_n_range)
    _add_common(p)
    p.set_defaults(func=cmd_perm_moments)

    p = perm.add_parser(
        "obstruction",
        help="search homomorphisms to S_N for an image of w that is not a "
        "d-th power; a witness proves w is not one",
    )
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", required=True, type=parse_n_range)
    p.add_argument("--sample-budget", type=int, default=10_000)
    p.add_argument("--seed", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_perm_obstruction)

    return ap


def _validate(args):
    if getattr(args, "mc", False):
        if args.samples is None or args.seed is None:
            raise ValueError("--mc requires both --samples and --seed")
    elif hasattr(args, "mc"):
        if args.samples is not None or args.seed is not None:
            raise ValueError("--samples/--seed are only valid with --mc")


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        try:
            args = ap.parse_args(argv)
        except SystemExit as e:  # argparse usage errors / --help
            return int(e.code or 0)
        _validate(args)
        args.func(args)
        return 0
    except WordSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except HypothesisError as e:
        print(f"hypothesis violated: {e.hypothesis} -- {e.detail}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 4
    except InternalInvariantError as e:
        print(f"internal invariant failure: {e}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())

"""Batch front end: parse a workspace, dispatch one subcommand, write
deterministic TSV reports.

Exit codes: 0 success, 1 error, 2 when any output contains UNKNOWN.  Output
files are written atomically (temp file + rename) and contain no timestamps,
so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import List, Optional

from .ahss import (SpectralSequence, abutment_filtration, convergence_check,
                   e2_identification_check, pro_ahss)
from .chain import derived_hom, homology, homology_support
from .errors import ProchainError
from .exactalg.groups import FgAbGroup, subquotient
from .pro import (Lim1Verdict, UnknownValue, colim, is_pro_isomorphism,
                  lim_lim1, pro_hom)
from .prohomotopy import (hom_from_constant, hom_to_constant,
                          is_hstar_fibrant, is_hstar_weak_equivalence,
                          postnikov_replacement)
from .tstruct import (classify_map, cohomology_with_coefficients, factor_n,
                      find_lift, is_co_n_fibration, is_n_cofibration,
                      truncate_above, truncate_below_free)
from .workspace import Workspace, parse_workspace, serialize_workspace

COMMANDS = ["homology", "truncate", "classify", "factor", "lift", "cohomology",
            "pro-iso", "limlim1", "prohom", "whitehead", "postnikov",
            "fibrant-check", "prohom-const", "derived-hom", "ahss", "pro-ahss",
            "selftest", "roundtrip"]


def fmt_group(g) -> str:
    if isinstance(g, UnknownValue):
        return f"UNKNOWN(budget={g.budget})"
    return str(g)


def fmt_class(v: float) -> str:
    if v == float("inf"):
        return "+inf"
    if v == float("-inf"):
        return "-inf"
    return str(int(v))


class Reporter:
    """Collects TSV tables and writes them atomically under the out dir."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.saw_unknown = False
        os.makedirs(out_dir, exist_ok=True)

    def note_unknown(self, *values):
        for v in values:
            if isinstance(v, UnknownValue):
                self.saw_unknown = True
            if isinstance(v, str) and "UNKNOWN" in v:
                self.saw_unknown = True

    def write(self, name: str, header: List[str], rows: List[List[str]]):
        for row in rows:
            self.note_unknown(*row)
        path = os.path.join(self.out_dir, name)
        body = "\t".join(header) + "\n"
        body += "".join("\t".join(str(c) for c in row) + "\n" for row in rows)
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(body)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        print(f"wrote {path}")


def _homology_rows(X):
    rows = []
    for n in range(X.lo - 1, X.hi + 2):
        rows.append([str(n), fmt_group(homology(X, n))])
    return rows


def cmd_homology(ws, rep, args):
    X = ws.complexes[args.object]
    rep.write(f"homology_{args.object}.tsv", ["degree", "group"],
              _homology_rows(X))


def cmd_derived_hom(ws, rep, args):
    X = ws.complexes[args.object]
    Y = ws.complexes[args.second]
    n = int(args.n)
    g = derived_hom(X, Y, n)
    rep.write(f"derived_hom_{args.object}_{args.second}_{n}.tsv",
              ["n", "group"], [[str(n), fmt_group(g)]])


def cmd_truncate(ws, rep, args):
    X = ws.complexes[args.object]
    n = int(args.n)
    if args.mode == "above":
        T, _ = truncate_above(X, n)
    else:
        T, _ = truncate_below_free(X, n)
    rows = [[str(m), str(T.rank(m)), fmt_group(homology(T, m))]
            for m in range(T.lo - 1, T.hi + 2)]
    rep.write(f"truncate_{args.mode}_{args.object}_{n}.tsv",
              ["degree", "rank", "homology"], rows)


def cmd_classify(ws, rep, args):
    f = ws.maps[args.object]
    c = classify_map(f)
    rep.write(f"classify_{args.object}.tsv",
              ["max_n_equivalence", "min_co_n_equivalence", "weak_equivalence"],
              [[fmt_class(c.max_n_equivalence), fmt_class(c.min_co_n_equivalence),
                str(c.is_weak_equivalence).lower()]])


def cmd_factor(ws, rep, args):
    f = ws.maps[args.object]
    n = int(args.n)
    i, p = factor_n(f, n)
    rows = [["i_is_n_cofibration", str(is_n_cofibration(i, n)).lower()],
            ["p_is_co_n_fibration", str(is_co_n_fibration(p, n)).lower()],
            ["composite_equals_f", str(p.compose(i).equal(f)).lower()],
            ["middle_total_rank", str(i.target.total_rank())]]
    rep.write(f"factor_{args.object}_{n}.tsv", ["check", "value"], rows)


def cmd_lift(ws, rep, args):
    i = ws.maps[args.object]
    p = ws.maps[args.second]
    top = ws.maps[args.third]
    bottom = ws.maps[args.fourth]
    n = int(args.n)
    h = find_lift(i, p, top, bottom, n)
    if h is None:
        rep.write(f"lift_{args.object}_{args.second}_{n}.tsv",
                  ["found"], [["false"]])
    else:
        rep.write(f"lift_{args.object}_{args.second}_{n}.tsv",
                  ["found", "upper_triangle", "lower_triangle"],
                  [["true", str(h.compose(i).equal(top)).lower(),
                    str(p.compose(h).equal(bottom)).lower()]])


def cmd_cohomology(ws, rep, args):
    X = ws.complexes[args.object]
    A = ws.groups[args.second]
    p = int(args.n)
    g = cohomology_with_coefficients(X, A, p)
    rep.write(f"cohomology_{args.object}_{args.second}_{p}.tsv",
              ["p", "group"], [[str(p), fmt_group(g)]])


def cmd_pro_iso(ws, rep, args):
    f = ws.group_promaps[args.object]
    v = is_pro_isomorphism(f, ws.config.budget_filler)
    rows = [["verdict", v.kind]]
    if v.kind == "true":
        rows.append(["witness_levels", ";".join(str(t) for t, _, _ in v.witness)])
    else:
        rows.append(["certificate_level", str(v.certificate_level)])
        if v.kind == "unknown":
            rows.append(["budget", str(v.budget)])
            rep.saw_unknown = True
    rep.write(f"pro_iso_{args.object}.tsv", ["field", "value"], rows)


def cmd_limlim1(ws, rep, args):
    T = ws.group_towers[args.object]
    r = lim_lim1(T, ws.config.lim_window)
    rows = [["lim", fmt_group(r.lim)], ["lim1", r.lim1.value],
            ["mittag_leffler", str(r.mittag_leffler).lower()]]
    if r.lim1 == Lim1Verdict.UNKNOWN or isinstance(r.lim, UnknownValue):
        rep.saw_unknown = True
    rep.write(f"limlim1_{args.object}.tsv", ["field", "value"], rows)


def cmd_prohom(ws, rep, args):
    X = ws.group_towers[args.object]
    Y = ws.group_towers[args.second]
    v = pro_hom(X, Y, ws.config.lim_window)
    rep.write(f"prohom_{args.object}_{args.second}.tsv",
              ["group"], [[fmt_group(v)]])


def cmd_whitehead(ws, rep, args):
    f = ws.promaps[args.object]
    v = is_hstar_weak_equivalence(f, ws.config.budget_filler)
    rows = [["verdict", v.verdict]]
    if v.reason:
        rows.append(["reason", v.reason])
    if v.m_witness is not None:
        rows.append(["m_witness", str(v.m_witness)])
    if v.verdict == "unknown":
        rep.saw_unknown = True
    rep.write(f"whitehead_{args.object}.tsv", ["field", "value"], rows)


def cmd_postnikov(ws, rep, args):
    Y = ws.towers[args.object]
    Z, canon = postnikov_replacement(Y)
    v = is_hstar_weak_equivalence(canon, ws.config.budget_filler)
    rows = [["entries", str(Z.tail.start + 1)],
            ["tail", "constant" if Z.tail.is_constant else "repeat"],
            ["canonical_map_verdict", v.verdict]]
    for k in range(Z.tail.start + 1):
        sup = homology_support(Z.entry(k))
        rows.append([f"entry_{k}_homology_window",
                     "empty" if sup is None else f"[{sup[0]},{sup[1]}]"])
    rep.write(f"postnikov_{args.object}.tsv", ["field", "value"], rows)


def cmd_fibrant_check(ws, rep, args):
    Y = ws.towers[args.object]
    rep.write(f"fibrant_{args.object}.tsv", ["fibrant"],
              [[str(is_hstar_fibrant(Y)).lower()]])


def cmd_prohom_const(ws, rep, args):
    n = int(args.n)
    if args.object in ws.towers and args.second in ws.complexes:
        X = ws.towers[args.object]
        Y = ws.complexes[args.second]
        v = hom_to_constant(X, Y, n, ws.config.lim_window)
        rep.write(f"prohom_const_{args.object}_{args.second}_{n}.tsv",
                  ["direction", "group"],
                  [["to_constant", fmt_group(v)]])
    elif args.object in ws.complexes and args.second in ws.towers:
        X = ws.complexes[args.object]
        Y = ws.towers[args.second]
        r = hom_from_constant(X, Y, n, ws.config.lim_window)
        rep.write(f"prohom_const_{args.object}_{args.second}_{n}.tsv",
                  ["direction", "value", "lim", "lim1"],
                  [["from_constant", fmt_group(r.value), fmt_group(r.lim),
                    r.lim1.value]])
    else:
        raise ProchainError("prohom-const needs one tower and one complex")


def cmd_ahss(ws, rep, args):
    X = ws.complexes[args.object]
    Y = ws.complexes[args.second]
    ss = SpectralSequence(X, Y)
    pages, stable = ss.run_to_stable()
    base = f"ahss_{args.object}_{args.second}"
    for page in pages:
        rows = []
        for (p, q), g in sorted(page.groups.items()):
            rows.append([str(p), str(q), ",".join(str(d) for d in g.invariant_factors),
                         str(g.free_rank)])
        rep.write(f"{base}_e{page.r}.tsv",
                  ["p", "q", "invariant_factors", "free_rank"], rows)
        drows = []
        for (p, q), d in sorted(page.differentials.items()):
            if d.is_zero:
                continue
            drows.append([str(p), str(q), str(d.matrix)])
        rep.write(f"{base}_d{page.r}.tsv", ["p", "q", "matrix"], drows)
    report = convergence_check(X, Y)
    rows = [["lim_ok", str(report.lim_ok).lower()],
            ["lim1_ok", str(report.lim1_ok).lower()],
            ["colim_ok", str(report.colim_ok).lower()],
            ["stable_page", str(report.stable_page)],
            ["graded_comparison_all_iso",
             str(all(report.graded_comparison.values())).lower()]]
    for (p, q), ok in sorted(report.graded_comparison.items()):
        if not ok:
            rows.append([f"mismatch_at_{p}_{q}", "true"])
    rep.write(f"{base}_report.tsv", ["field", "value"], rows)


def cmd_pro_ahss(ws, rep, args):
    X = ws.towers[args.object]
    Y = ws.complexes[args.second]
    window = None
    if args.n is not None and args.second_n is not None:
        window = (int(args.n), int(args.second_n))
    report = pro_ahss(X, Y, window, ws.config.lim_window)
    base = f"pro_ahss_{args.object}_{args.second}"
    rows = []
    for (p, q), g in sorted(report.e2.items()):
        rows.append([str(p), str(q), fmt_group(g)])
    rep.write(f"{base}_e2.tsv", ["p", "q", "group"], rows)
    rows = [[str(n), fmt_group(g)] for n, g in sorted(report.abutment.items())]
    rep.write(f"{base}_abutment.tsv", ["n", "group"], rows)
    rows = [["levelwise_all_iso", str(report.levelwise_all_iso).lower()],
            ["comparison_holds", str(report.comparison_holds).lower()]]
    for (p, q), verdict in sorted(report.slot_comparison.items()):
        if verdict != "iso":
            rows.append([f"slot_{p}_{q}", verdict])
            if verdict == "unknown":
                rep.saw_unknown = True
    for n, verdict in sorted(report.total_comparison.items()):
        if verdict != "iso":
            rows.append([f"total_{n}", verdict])
            if verdict == "unknown":
                rep.saw_unknown = True
    rep.write(f"{base}_report.tsv", ["field", "value"], rows)


def cmd_roundtrip(ws, rep, args):
    text = serialize_workspace(ws)
    path = os.path.join(rep.out_dir, "workspace_canonical.json")
    with open(path, "w") as f:
        f.write(text)
    print(f"wrote {path}")


def cmd_selftest(ws, rep, args):
    from . import selftest
    results = selftest.run(seed=args.seed, quick=True)
    rows = [[name, "pass" if ok else "FAIL"] for name, ok in results]
    rep.write("selftest.tsv", ["suite", "result"], rows)
    if not all(ok for _, ok in results):
        raise ProchainError("selftest failures")


DISPATCH = {
    "homology": (cmd_homology, 1, 0),
    "derived-hom": (cmd_derived_hom, 2, 1),
    "truncate": (cmd_truncate, 1, 1),
    "classify": (cmd_classify, 1, 0),
    "factor": (cmd_factor, 1, 1),
    "lift": (cmd_lift, 4, 1),
    "cohomology": (cmd_cohomology, 2, 1),
    "pro-iso": (cmd_pro_iso, 1, 0),
    "limlim1": (cmd_limlim1, 1, 0),
    "prohom": (cmd_prohom, 2, 0),
    "whitehead": (cmd_whitehead, 1, 0),
    "postnikov": (cmd_postnikov, 1, 0),
    "fibrant-check": (cmd_fibrant_check, 1, 0),
    "prohom-const": (cmd_prohom_const, 2, 1),
    "ahss": (cmd_ahss, 2, 0),
    "pro-ahss": (cmd_pro_ahss, 2, 0),
    "roundtrip": (cmd_roundtrip, 0, 0),
    "selftest": (cmd_selftest, 0, 0),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="prochain",
        description="exact truncation calculus and spectral sequences for "
                    "bounded chain complexes")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("names", nargs="*", help="object names and integer args")
    ap.add_argument("--workspace", default=None, help="workspace JSON path")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--budget-filler", type=int, default=None)
    ap.add_argument("--budget-reindex", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=["above", "below"], default="above",
                    help="truncation direction for the truncate command")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cmd = args.command
    fn, n_names, n_ints = DISPATCH[cmd]
    try:
        if cmd == "selftest":
            ws = None
        else:
            if not args.workspace:
                raise ProchainError("--workspace is required for this command")
            ws = parse_workspace(args.workspace)
            if args.budget_filler:
                ws.config.budget_filler = args.budget_filler
            if args.budget_reindex:
                ws.config.budget_reindex = args.budget_reindex
        rep = Reporter(args.out)
        # unpack positional names into fields the handlers expect
        names = list(args.names)
        want = n_names + n_ints
        if cmd == "pro-ahss":
            if len(names) not in (2, 4):
                raise ProchainError("pro-ahss takes X Y [n_lo n_hi]")
        elif len(names) != want:
            raise ProchainError(f"{cmd} takes {want} arguments, got {len(names)}")
        ns = argparse.Namespace(**vars(args))
        fields = ["object", "second", "third", "fourth"]
        for idx in range(n_names):
            setattr(ns, fields[idx], names[idx])
        if cmd == "pro-ahss":
            ns.n = names[2] if len(names) == 4 else None
            ns.second_n = names[3] if len(names) == 4 else None
        elif n_ints:
            ns.n = names[n_names]
        if cmd == "truncate":
            ns.mode = getattr(args, "mode", None) or "above"
        if ws is not None:
            # resolve references early for a clean unknown-name error
            for idx in range(n_names):
                ws.lookup(names[idx])
        fn(ws, rep, ns)
        return 2 if rep.saw_unknown else 0
    except ProchainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

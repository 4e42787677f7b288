"""Command-line front end.

Subcommands: dn, rn, fix, verify-tables, dump-poset, dump-matrix,
gen-fix.  Counts routinely exceed 64 bits, so every numeric field in
JSON output is a decimal string.

Exit codes: 0 success, 1 internal inconsistency or failed verification,
2 refusal of an out-of-scope or over-budget request, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .errors import InconsistencyError, OutOfScopeError, ResourceLimitError
from . import burnside as _burnside
from . import engines as _engines
from . import matrix as _matrix
from . import mbf as _mbf
from .perm import cycle_poset, parse_cycles

EX_OK = 0
EX_INCONSISTENT = 1
EX_REFUSED = 2
EX_USAGE = 64


@dataclass
class RunConfig:
    """One resolved invocation."""

    command: str
    n: Optional[int] = None
    perm_text: Optional[str] = None
    method: str = "auto"
    threads: int = 1
    fmt: str = "text"
    save_path: Optional[str] = None
    out_path: Optional[str] = None
    budget: Optional[int] = None
    power: int = 1
    n_min: int = 3
    n_max: int = 8
    slow: bool = False
    list_members: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _default_threads() -> int:
    env = os.environ.get("MBF_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="mbfix",
                  description="Fixes of permutations acting on monotone Boolean "
                              "functions: Dedekind numbers and class counts, exactly.")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, perm=False, need_n=True):
        if perm:
            p.add_argument("--perm", required=True, help='cycle notation, e.g. "(12)(34)"')
        p.add_argument("--n", type=int, required=need_n, help="number of variables")
        p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads (default MBF_THREADS or 1)")
        p.add_argument("--budget", type=int, default=None,
                       help="work-unit cap; over-budget requests are refused")

    p = sub.add_parser("dn", help="Dedekind number d_n")
    add_common(p)
    p.add_argument("--save", dest="save_path", help="write the family as an MBF1 file (n <= 6)")

    p = sub.add_parser("rn", help="number of equivalence classes r_n")
    add_common(p)

    p = sub.add_parser("fix", help="count fixes of one permutation")
    add_common(p, perm=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "bruteforce", "upsets", "generate",
                            "coprime", "extend", "downup", "dedekind"])

    p = sub.add_parser("verify-tables", help="recompute the published fix tables")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--slow", action="store_true",
                   help="raise the budget enough for the Down*Up row over D_6")

    p = sub.add_parser("dump-poset", help="cycle poset of a permutation as JSON")
    add_common(p, perm=True)
    p.add_argument("--out", dest="out_path", help="write to a file instead of stdout")

    p = sub.add_parser("dump-matrix", help="order matrix power as CSV")
    add_common(p, perm=True)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("gen-fix", help="generate the fix family of a permutation")
    add_common(p, perm=True)
    p.add_argument("--save", dest="save_path", help="write the family as an MBF1 file")
    p.add_argument("--list", dest="list_members", action="store_true",
                   help="print every member as a bit string")
    return top


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in ("n", "method", "threads", "fmt", "save_path", "out_path",
                 "budget", "power", "n_min", "n_max", "slow", "list_members"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "perm"):
        cfg.perm_text = ns.perm
    return cfg


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _cmd_dn(cfg: RunConfig) -> int:
    value = _mbf.dedekind(cfg.n)
    if cfg.save_path is not None:
        _mbf.generate_dn(cfg.n).save(cfg.save_path)
    if cfg.fmt == "json":
        print(_json_dumps({"n": cfg.n, "dn": str(value)}))
    else:
        print(value)
    return EX_OK


def _cmd_rn(cfg: RunConfig) -> int:
    ledger = _burnside.class_count(cfg.n, threads=cfg.threads, budget=cfg.budget)
    if cfg.fmt == "json":
        print(_json_dumps(ledger.to_json_dict()))
    else:
        for row in ledger.rows:
            print(f"{row.perm_text:<22} mu={row.mu:<8} fix={row.fix:<24} [{row.method}]")
        print(f"r_{cfg.n} = {ledger.r}  ({ledger.total} / {ledger.factorial})")
    return EX_OK


def _cmd_fix(cfg: RunConfig) -> int:
    perm = parse_cycles(cfg.perm_text, cfg.n)
    report = _engines.fix_count(perm, cfg.n, method=cfg.method,
                                threads=cfg.threads, budget=cfg.budget)
    if cfg.fmt == "json":
        payload = {
            "n": report.n,
            "perm": report.perm_text,
            "cycle_type": list(report.cycle_type),
            "mu": str(report.mu),
            "count": str(report.count),
            "method": report.method,
            "elapsed_ms": int(report.elapsed * 1000),
            "decomposition": report.decomposition,
        }
        print(_json_dumps(payload))
    else:
        print(f"Fix({report.perm_text}, D_{report.n}) = {report.count}  "
              f"[method={report.method}, mu={report.mu}]")
    return EX_OK


def _cmd_verify(cfg: RunConfig) -> int:
    budget = cfg.budget
    if cfg.slow and budget is None:
        budget = 10**11
    rows = _burnside.verify_paper_tables(cfg.n_min, cfg.n_max,
                                         budget=budget, threads=cfg.threads)
    if cfg.fmt == "json":
        payload = [
            {"n": r.n, "item": r.item, "status": r.status,
             "printed": None if r.printed is None else str(r.printed),
             "computed": None if r.computed is None else str(r.computed),
             "mu_printed": None if r.mu_printed is None else str(r.mu_printed),
             "mu_formula": None if r.mu_formula is None else str(r.mu_formula),
             "note": r.note}
            for r in rows
        ]
        print(_json_dumps(payload))
    else:
        print("n,item,status,printed,computed,mu_printed,mu_formula,note")
        for r in rows:
            fields = [str(r.n), r.item, r.status,
                      "" if r.printed is None else str(r.printed),
                      "" if r.computed is None else str(r.computed),
                      "" if r.mu_printed is None else str(r.mu_printed),
                      "" if r.mu_formula is None else str(r.mu_formula),
                      '"' + r.note.replace('"', "'") + '"' if r.note else ""]
            print(",".join(fields))
    return EX_INCONSISTENT if any(r.status == "FAIL" for r in rows) else EX_OK


def _cmd_dump_poset(cfg: RunConfig) -> int:
    perm = parse_cycles(cfg.perm_text, cfg.n)
    cp = cycle_poset(_engines.with_degree(perm, cfg.n))
    data = cp.poset.to_json_dict()
    data["labels"] = [[rep, length] for rep, length in cp.poset.labels]
    _emit(_json_dumps(data), cfg.out_path)
    return EX_OK


def _cmd_dump_matrix(cfg: RunConfig) -> int:
    perm = parse_cycles(cfg.perm_text, cfg.n)
    cp = cycle_poset(_engines.with_degree(perm, cfg.n))
    m = _matrix.count_matrix(cp.poset)
    if cfg.power > 1:
        m = _matrix.mat_power(m, cfg.power)
    _emit(m.to_csv(), cfg.out_path)
    return EX_OK


def _cmd_gen_fix(cfg: RunConfig) -> int:
    perm = parse_cycles(cfg.perm_text, cfg.n)
    fs = _engines.fix_generate(perm, cfg.n)
    if cfg.save_path is not None:
        fs.family.save(cfg.save_path)
    if cfg.fmt == "json":
        payload = {"n": fs.n, "perm": fs.perm.to_text(), "count": str(len(fs))}
        if cfg.list_members:
            payload["members"] = [f.to_string() for f in fs.family.functions()]
        print(_json_dumps(payload))
    else:
        print(f"|Fix({fs.perm.to_text()}, D_{fs.n})| = {len(fs)}")
        if cfg.list_members:
            for f in fs.family.functions():
                print(f.to_string())
    return EX_OK


_COMMANDS = {
    "dn": _cmd_dn,
    "rn": _cmd_rn,
    "fix": _cmd_fix,
    "verify-tables": _cmd_verify,
    "dump-poset": _cmd_dump_poset,
    "dump-matrix": _cmd_dump_matrix,
    "gen-fix": _cmd_gen_fix,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    cfg = _config(ns)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (OutOfScopeError, ResourceLimitError) as exc:
        print(f"mbfix: refused: {exc}", file=sys.stderr)
        return EX_REFUSED
    except InconsistencyError as exc:
        print(f"mbfix: inconsistency: {exc}", file=sys.stderr)
        return EX_INCONSISTENT
    except ValueError as exc:
        print(f"mbfix: usage error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())

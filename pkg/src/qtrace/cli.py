"""qtrace command-line driver.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage errors.
Records are JSON lines with sorted keys, so identical flags give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Iterable, Sequence

from . import exchange, hypergeom, macdonald, suites, trace
from .suites import Check, UsageError, parse_module, parse_modules

RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "CheckRecord",
    "version": 1,
    "type": "object",
    "required": ["check_id", "inputs", "verified_order", "verdict"],
    "properties": {
        "check_id": {"type": "string"},
        "inputs": {"type": "object"},
        "verified_order": {"oneOf": [{"type": "integer"}, {"const": "exact"}]},
        "verdict": {"enum": ["pass", "fail", "inconclusive"]},
        "residual": {"type": "string"},
        "details": {"type": "object"},
        "error": {"type": "string"},
        "wall_time": {"type": "number"},
    },
}

INCONCLUSIVE = ("InconclusiveAtOrder", "ReconstructionFailed", "IrregularSeriesError")


def _clean(x):
    """Make a result value JSON-serializable."""
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "to_text"):
        return x.to_text()
    return str(x)


def run_check(check: Check, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    rec = {"check_id": check.check_id, "inputs": _clean(check.inputs)}
    try:
        res = check.run()
    except Exception as exc:  # a crashing check is reported, not raised
        name = type(exc).__name__
        rec.update(verdict="inconclusive" if name in INCONCLUSIVE else "fail",
                   verified_order="exact" if check.exact else 0, error=f"{name}: {exc}")
    else:
        rec["verdict"] = "pass" if res.get("pass") else "fail"
        rec["verified_order"] = "exact" if check.exact else int(res.get("order", check.inputs.get("order", 0)))
        if res.get("residual") is not None:
            rec["residual"] = _clean(res["residual"])
        details = {k: _clean(res[k]) for k in check.detail_keys if k in res}
        if details:
            rec["details"] = details
    if timing:
        rec["wall_time"] = round(time.perf_counter() - t0, 3)
    return rec


def dumps(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def run_checks(checks: Iterable[Check], out, timing: bool = False) -> list[dict]:
    records = []
    for c in checks:
        rec = run_check(c, timing)
        records.append(rec)
        out.write(dumps(rec) + "\n")
        out.flush()
    return records


def _exit_for(records: Sequence[dict]) -> int:
    bad = [r for r in records if r["verdict"] != "pass"]
    if bad:
        print(f"FIRST FAILURE: {bad[0]['check_id']} ({bad[0]['verdict']})", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

COLUMNS = ("check_id", "verdict", "verified_order", "residual")


def render_report(records: Sequence[dict], fmt: str) -> str:
    rows = sorted(records, key=lambda r: r["check_id"])
    if fmt == "json":
        return json.dumps([{k: r[k] for k in COLUMNS if k in r} for r in rows], sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([r.get(k, "") for k in COLUMNS])
        return buf.getvalue()
    width = max([len("check_id")] + [len(r["check_id"]) for r in rows])
    lines = [f"{'check_id':<{width}}  verdict       order"]
    for r in rows:
        lines.append(f"{r['check_id']:<{width}}  {r['verdict']:<12}  {r['verified_order']}")
    if rows:
        n_pass = sum(r["verdict"] == "pass" for r in rows)
        lines.append(f"{n_pass}/{len(rows)} passed")
    return "\n".join(lines) + "\n"


def read_records(path: str) -> list[dict]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------


def _require(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _nonneg(value: int, flag: str) -> int:
    if value < 0:
        raise UsageError(f"{flag} must be >= 0")
    return value


def compute_object(obj: str, args) -> dict:
    D = args.order
    if D < 1:
        raise UsageError("--order must be >= 1")
    if obj in ("psi", "F"):
        mods = parse_modules(_require(args.modules, "--modules"))
        tf = (trace.psi_trace if obj == "psi" else trace.F_build)(mods, D)
        rec = {"object": obj, **tf.to_record()}
        if obj == "F" and len(mods) == 1 and mods[0].weights[0] % 2 == 0:
            rec["closed"] = trace.closed_F_sl2(mods[0].weights[0] // 2).to_text()
        return rec
    if obj == "u":
        m = _nonneg(_require(args.m, "--m"), "--m")
        return {"object": "u", "m": m, "value": trace.u_function(m).absorb_linear().to_text()}
    if obj == "u_m":
        m = _nonneg(_require(args.m, "--m"), "--m")
        return {"object": "u_m", "m": m, "value": hypergeom.u_m_assembled(m).absorb_linear().to_text()}
    if obj in ("J", "R"):
        mods = parse_modules(_require(args.modules, "--modules"))
        if len(mods) != 2:
            raise UsageError(f"{obj} needs exactly two modules")
        dm = exchange.fusion_J(*mods) if obj == "J" else exchange.RR(*mods)
        return {"object": obj, "modules": [m.name for m in mods], "var": dm.var,
                "matrix": [[x.to_text() for x in r] for r in dm.mat.rows]}
    if obj == "Q":
        V = parse_module(_require(args.module, "--module"))
        Q = exchange.Q_of(V).to_mu()
        return {"object": "Q", "module": V.name, "var": "y", "diagonal": Q.mat.is_diagonal(),
                "eigenvalues": [{"weight": w, "value": Q.mat.rows[i][i].to_text()}
                                for i, w in enumerate(V.weights)]}
    if obj == "macdonald-poly":
        return _macdonald_poly(args.n, args.m, args.mu)
    raise UsageError(f"unknown object {obj!r}")


def _macdonald_poly(n, m, mu) -> dict:
    n = _require(n, "--n")
    m = _nonneg(_require(m, "--m"), "--m")
    try:
        weight = [int(x) for x in _require(mu, "--mu").split(",")]
    except ValueError:
        raise UsageError("--mu must be a comma-separated list of integers") from None
    try:
        P = macdonald.macdonald_polynomial(n, m, weight)
    except macdonald.DomainError as exc:
        raise UsageError(str(exc)) from None
    return {"object": "macdonald-poly", **P.to_record(), "eigenvalue": P.eigenvalue().to_text()}


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _verify_flags(p):
    p.add_argument("--order", type=int, default=24, help="series order D (coefficients through xi^2D)")
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized pre-screening; verdicts are exact")
    p.add_argument("--no-cache", action="store_true", help="ignore $QTRACE_CACHE_DIR")
    p.add_argument("--timing", action="store_true", help="add wall_time to each record")
    p.add_argument("--out", help="write records here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qtrace", description="Exact verification of trace-function identities for U_q(sl2).")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="compute and serialize an object")
    c.add_argument("object", choices=["psi", "F", "u", "J", "R", "Q", "macdonald-poly", "u_m"])
    c.add_argument("--modules")
    c.add_argument("--module")
    c.add_argument("--order", type=int, default=24)
    c.add_argument("--m", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--mu")
    c.add_argument("--out")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(suites.SUITES) + ["all"])
    v.add_argument("--modules")
    v.add_argument("--W")
    _verify_flags(v)

    r = sub.add_parser("report", help="summarize a JSON-lines record file")
    r.add_argument("records", help="path, or - for stdin")
    r.add_argument("--format", choices=["text", "json", "csv"], default="text")

    sub.add_parser("schema", help="print the CheckRecord JSON schema")

    mac = sub.add_parser("macdonald", help="Macdonald operators and polynomials")
    msub = mac.add_subparsers(dest="mcmd", required=True, parser_class=_Parser)
    mp = msub.add_parser("poly")
    mp.add_argument("--n", type=int, required=True)
    mp.add_argument("--m", type=int, required=True)
    mp.add_argument("--mu", required=True)
    mp.add_argument("--out")
    mb = msub.add_parser("verify-bridge")
    mb.add_argument("--m", type=int, default=1)
    mb.add_argument("--K", type=int, default=10)
    _verify_flags(mb)

    hg = sub.add_parser("hypergeom", help="hypergeometric identity")
    hsub = hg.add_subparsers(dest="hcmd", required=True, parser_class=_Parser)
    hv = hsub.add_parser("verify")
    hv.add_argument("--m", type=int, default=2)
    _verify_flags(hv)

    lm = sub.add_parser("limits", help="classical and rational limits")
    lsub = lm.add_subparsers(dest="lcmd", required=True, parser_class=_Parser)
    _verify_flags(lsub.add_parser("verify"))
    return ap


def _setup_cache(args) -> None:
    path = os.environ.get("QTRACE_CACHE_DIR")
    exchange.set_disk_cache(None if args.no_cache or not path else path)


def _verify(checks: list[Check], args) -> int:
    _setup_cache(args)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            records = run_checks(checks, fh, args.timing)
    else:
        records = run_checks(checks, sys.stdout, args.timing)
    return _exit_for(records)


def _bridge_checks(m: int, K: int) -> list[Check]:
    return [Check(f"macdonald/bridge/m={m}/source={src}", {"m": m, "K": K, "source": src},
                  lambda src=src: macdonald.bridge_check(m, K, src) | {"order": K})
            for src in ("closed", "engine")] + [
        Check(f"macdonald/conjugation/m={m}", {"m": m}, lambda: macdonald.conjugation_check(m), exact=True)]


def _hypergeom_checks(m: int) -> list[Check]:
    out = [Check(f"hypergeom/tableau/m={m}", {"m": m}, lambda: hypergeom.tableau_check(m), exact=True),
           Check(f"hypergeom/identity/m={m}", {"m": m},
                 lambda: {k: v for k, v in hypergeom.identity_check(m).items() if k in ("pass", "constant")},
                 exact=True, detail_keys=("constant",))]
    if 1 <= m <= 3:
        out.append(Check(f"hypergeom/constant-term/m={m}", {"m": m, "t_deg": 12},
                         lambda: hypergeom.constant_term_check(m, 12) | {"order": 12}))
    return out


def dispatch(args) -> int:
    if args.cmd == "compute":
        _emit(compute_object(args.object, args), args.out)
        return 0
    if args.cmd == "schema":
        sys.stdout.write(json.dumps(RECORD_SCHEMA, sort_keys=True, indent=1) + "\n")
        return 0
    if args.cmd == "report":
        try:
            records = read_records(args.records)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read records: {exc}") from None
        sys.stdout.write(render_report(records, args.format))
        return 1 if any(r["verdict"] != "pass" for r in records) else 0
    if args.cmd == "macdonald" and args.mcmd == "poly":
        _emit(_macdonald_poly(args.n, args.m, args.mu), args.out)
        return 0
    if args.order < 1 or args.max_m < 0:
        raise UsageError("--order must be >= 1 and --max-m >= 0")
    if args.cmd == "verify":
        W = parse_module(args.W) if args.W else None
        Vs = parse_modules(args.modules) if args.modules else None
        return _verify(suites.build(args.suite, args.order, args.max_m, W, Vs), args)
    if args.cmd == "macdonald":
        if args.m < 0 or args.K < 0:
            raise UsageError("--m and --K must be >= 0")
        return _verify(_bridge_checks(args.m, args.K), args)
    if args.cmd == "hypergeom":
        return _verify(_hypergeom_checks(_nonneg(args.m, "--m")), args)
    if args.cmd == "limits":
        return _verify(suites.suite_limits(args.order, args.max_m), args)
    raise UsageError("unknown command")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return dispatch(args)
    except UsageError as exc:
        print(f"qtrace: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())

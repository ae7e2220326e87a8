"""The fourteen acceptance criteria, each checked exactly and reported as one PASS/FAIL line.

Three criteria compare against printed displays or a printed exit status that the
exact computation contradicts (4, 13 and 14).  Those report FAIL; the tests pin
that verdict and assert the consistent reading separately, so a change in either
direction is caught.
"""
import json
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from qtrace import diffops, exchange, hypergeom, limits, macdonald, trace
from qtrace.field import ONE, XI, Y, frac_eq, qpow, series_expand
from qtrace.linalg import Mat
from qtrace.suites import DOCUMENTED_DISCREPANCIES
from qtrace.uq import irrep

D = 24
q = qpow(1)

# criteria whose literal statement does not hold
EXPECTED_FAIL = {4, 13, 14}


def report(n: int, ok: bool, note: str = "") -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}" + (f"  ({note})" if note else "")
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok == (n not in EXPECTED_FAIL), line


def test_criterion_01_psi_oracle():
    t0 = time.perf_counter()
    L = XI ** 2
    ex1 = (ONE / (ONE - L)) * (ONE + (q ** 2 - q ** -2) * L / ((ONE - Y ** 2) * (ONE - L * q ** 2)))
    psi = trace.psi_trace([irrep(2)], D).scalar()
    ok = psi.c == 1 and psi.body == series_expand(ex1, psi.body.D)
    for m in range(4):
        p = trace.psi_trace([irrep(2 * m)], D).scalar()
        ok = ok and p.body.D >= 2 * D and p.body == series_expand(trace.closed_psi_sl2(m).body, p.body.D)
    elapsed = time.perf_counter() - t0
    report(1, ok and elapsed <= 60, f"{elapsed:.1f} s")


def test_criterion_02_F_oracle():
    L2, M2 = XI ** -2, Y ** 2
    ex2 = (L2 * M2 - L2 / q ** 2 - M2 / q ** 2 + ONE) / ((ONE - L2 / q ** 2) * (ONE - M2 / q ** 2))
    F = trace.F_build([irrep(2)], D).scalar().absorb_linear()
    ok = F.c == -1 and F.body == series_expand(ex2, F.body.D)
    ok = ok and all(trace.is_symmetric(trace.closed_F_sl2(m)) for m in range(4))
    report(2, ok)


def test_criterion_03_mr_operator():
    op = diffops.mr_operator(irrep(1), [irrep(2)])
    L = XI ** -2
    b = (ONE - L * q ** -4) * (ONE - L * q ** 2) / ((ONE - L * q ** -2) * (ONE - L))
    ok = sorted(op.terms) == [-1, 1] and op.terms[1].rows[0][0].is_one() and frac_eq(op.terms[-1].rows[0][0], b)
    for w in (1, 2):
        for v in (2, 4):
            ok = ok and diffops.mr_check(irrep(w), [irrep(v)], D)["pass"]
    report(3, ok)


def test_criterion_04_example4():
    R = diffops.example4_R_check()
    Z = diffops.example4_qkzb_check(D)
    ok = R["pass"] and Z["literal"]
    report(4, ok, "literal displays; consistent readings hold")
    assert R["literal_entries"] == [[False, True], [False, False]]
    assert R["overall_half_power_reading"] and Z["swapped_sides"]


def test_criterion_05_abrr():
    ok = all(exchange.abrr_cross_check(irrep(a), irrep(b))["pass"] for a in range(3) for b in range(3))
    ok = ok and all(r["pass"] for r in exchange.identity_checks())
    report(5, ok)


def test_criterion_06_Q_and_G():
    Q1 = exchange.Q_of(irrep(1))
    low, high = exchange.Q_closed_fundamental()
    ok = (Q1.mat.is_diagonal() and frac_eq(exchange.xi_to_y(Q1.mat.rows[0][0]), high)
          and frac_eq(exchange.xi_to_y(Q1.mat.rows[1][1]), low))
    for m in range(4):
        Qm = exchange.Q_of(irrep(2 * m))
        ok = ok and frac_eq(exchange.xi_to_y(Qm.mat.rows[m][m]), exchange.Q_closed_zero_weight(m))
    ok = ok and all(exchange.G_of(irrep(n)).equals(exchange.weyl_ratio(irrep(n))) for n in (1, 2))
    report(6, ok)


def test_criterion_07_dual_mr():
    ok = all(diffops.dual_mr_check(irrep(w), [irrep(2 * m)], D, exact=True)["pass"]
             for m in (1, 2) for w in (1, 2))
    res = diffops.dual_mr_check(irrep(1), [irrep(1), irrep(1)], D)
    report(7, ok and res["pass"])


def test_criterion_08_qkzb():
    ok = diffops.qkzb_check([irrep(2)], 1, D)["pass"] and diffops.dual_qkzb_check([irrep(2)], 1, D)["pass"]
    for j in (1, 2):
        ok = ok and diffops.qkzb_check([irrep(1), irrep(1)], j, D)["pass"]
        ok = ok and diffops.dual_qkzb_check([irrep(1), irrep(1)], j, D)["pass"]
    report(8, ok)


def test_criterion_09_symmetry():
    ok = all(diffops.symmetry_check([irrep(2 * m)], D)["pass"] for m in range(4))
    res = diffops.symmetry_check([irrep(1), irrep(1)], D)
    windows_ok = all(c[1] - c[0] >= f[1] - f[0] for f, c in res["windows"])
    report(9, ok and res["pass"] and res.get("exact", False) and windows_ok)


def test_criterion_10_q_inverse():
    ok = all(trace.q_inverse_symmetry_check(m)["pass"] for m in (1, 2))
    for m in range(4):
        u = trace.u_function(m).absorb_linear()
        ok = ok and u.c == -1 and trace.is_laurent_polynomial(u.body) and trace.is_symmetric(u)
    report(10, ok)


def test_criterion_11_hypergeometric():
    ok = all(hypergeom.identity_check(m)["pass"] for m in range(4))
    ok = ok and all(hypergeom.constant_term_check(m, 12)["pass"] for m in range(1, 4))
    report(11, ok)


def test_criterion_12_macdonald():
    ok = all(macdonald.bridge_check(m, 10)["pass"] for m in range(3))
    ok = ok and all(macdonald.conjugation_check(m)["pass"] for m in range(3))
    ok = ok and all(macdonald.commutativity_check(3, m, 4)["pass"] for m in (0, 1))
    ok = ok and all(macdonald.polynomial_check(n, m, 4)["pass"] for n in (2, 3) for m in range(3))
    report(12, ok)


def test_criterion_13_limits():
    ok = all(r["pass"] for r in limits.identity_checks())
    ok = ok and limits.classical_limit_consistency(1, 6)["pass"]
    n1 = limits.qkz_limit([irrep(2)])
    n2 = limits.qkz_limit([irrep(1), irrep(1)])
    report(13, ok and n1["pass"] and n2["pass"], "N=2 qKZ limit fails literally; holds with the limit factor")
    assert ok and n1["pass"] and n2["pass_with_limit_factor"]


def test_criterion_14_whole_suite(tmp_path):
    out = tmp_path / "all.jsonl"
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qtrace.cli", "verify", "all", "--max-m", "2", "--order", "20",
                           "--no-cache", "--out", str(out)], capture_output=True, text=True, timeout=900)
    elapsed = time.perf_counter() - t0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    failed = sorted(r["check_id"] for r in recs if r["verdict"] != "pass")
    report(14, proc.returncode == 0 and elapsed < 600,
           f"{elapsed:.0f} s, exit {proc.returncode}, {len(recs) - len(failed)}/{len(recs)} pass")
    assert elapsed < 600 and proc.returncode == 1
    assert failed == sorted(DOCUMENTED_DISCREPANCIES)

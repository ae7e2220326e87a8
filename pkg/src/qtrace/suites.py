"""Named verification suites: lists of checks shared by the CLI and the tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import diffops, exchange, hypergeom, limits, macdonald, trace
from .field import frac_eq, series_expand
from .uq import FdModule, irrep

SUITES = ("mr", "dual-mr", "qkzb", "dual-qkzb", "symmetry", "abrr", "identities",
          "q-inverse", "hypergeom", "macdonald", "limits")


class UsageError(ValueError):
    pass


def parse_module(name: str) -> FdModule:
    name = name.strip()
    if name.startswith("irrep") and name[5:].isdigit():
        return irrep(int(name[5:]))
    raise UsageError(f"unknown module {name!r} (expected irrepN)")


def parse_modules(text: str) -> list[FdModule]:
    return [parse_module(x) for x in text.split(",") if x.strip()]


@dataclass
class Check:
    check_id: str
    inputs: dict
    run: Callable[[], dict]
    exact: bool = False
    detail_keys: tuple = field(default=())


def _names(mods: Sequence[FdModule]) -> str:
    return ",".join(m.name for m in mods)


# ---------------------------------------------------------------------------
# small adapters returning {"pass": ..}
# ---------------------------------------------------------------------------


def psi_closed_check(m: int, D: int) -> dict:
    psi = trace.psi_trace([irrep(2 * m)], D).scalar()
    closed = series_expand(trace.closed_psi_sl2(m).body, 2 * D, "xi")
    return {"pass": psi.body == closed and psi.c == 1, "order": 2 * D}


def psi_example1_check(D: int) -> dict:
    psi = trace.psi_trace([irrep(2)], D).scalar()
    ex = series_expand(trace.example1_psi().body, 2 * D, "xi")
    return {"pass": psi.body == ex and psi.c == 1, "order": 2 * D}


def F_example2_check(D: int) -> dict:
    F = trace.F_build([irrep(2)], D).scalar().absorb_linear()
    ex = trace.example2_F()
    series_ok = F.body == series_expand(ex.body, F.body.D, "xi") and F.c == ex.c
    closed_ok = frac_eq(trace.closed_F_sl2(1).body, ex.body)
    return {"pass": series_ok and closed_ok, "order": F.body.D}


def F_symmetric_check(m: int) -> dict:
    return {"pass": trace.is_symmetric(trace.closed_F_sl2(m))}


def example3_check() -> dict:
    from .field import ONE, XI, qpow
    op = diffops.mr_operator(irrep(1), [irrep(2)])
    L2 = XI ** -2
    q = qpow(1)
    ex = (ONE - L2 * q ** -4) * (ONE - L2 * q ** 2) / ((ONE - L2 * q ** -2) * (ONE - L2))
    got = {nu: A.rows[0][0] for nu, A in op.terms.items()}
    ok = set(got) == {1, -1} and frac_eq(got[1], ONE) and frac_eq(got[-1], ex)
    return {"pass": ok, "coefficients": {str(k): v.to_text() for k, v in sorted(got.items())}}


def Q_closed_check(m: int) -> dict:
    Q = exchange.Q_of(irrep(2 * m))
    val = exchange.xi_to_y(Q.mat.rows[m][m])
    ok = frac_eq(val, exchange.Q_closed_zero_weight(m)) and Q.mat.is_diagonal()
    return {"pass": ok}


def Q_fundamental_check() -> dict:
    Q = exchange.Q_of(irrep(1))
    a, b = exchange.Q_closed_fundamental()
    # basis e_0 = v+ (weight 1), e_1 = v- (weight -1)
    ok = (Q.mat.is_diagonal() and frac_eq(exchange.xi_to_y(Q.mat.rows[1][1]), a)
          and frac_eq(exchange.xi_to_y(Q.mat.rows[0][0]), b))
    return {"pass": ok}


def G_check(n: int) -> dict:
    V = irrep(n)
    return {"pass": exchange.G_of(V).equals(exchange.weyl_ratio(V))}


def u_laurent_symmetric_check(m: int) -> dict:
    u = trace.u_function(m).absorb_linear()
    closed = trace.u_closed(m).absorb_linear()
    ok = (u.c == -1 and u.b == 0 and u.d == 0 and trace.is_laurent_polynomial(u.body)
          and trace.is_symmetric(u) and frac_eq(u.body, closed.body))
    return {"pass": ok}


def u_from_F_check(m: int) -> dict:
    a = trace.u_from_F(m).absorb_linear()
    b = trace.u_function(m).absorb_linear()
    printed = trace.u_from_F(m, sign=-1).absorb_linear()
    return {"pass": a.c == b.c and frac_eq(a.body, b.body),
            "printed_sign_matches": frac_eq(printed.body, b.body)}


def _keep(res: dict, *keys) -> dict:
    return {k: res[k] for k in keys if k in res}


# ---------------------------------------------------------------------------
# suite builders
# ---------------------------------------------------------------------------


def suite_mr(D: int, max_m: int, W: FdModule | None = None, Vs=None) -> list[Check]:
    pairs = [(W, list(Vs))] if W is not None and Vs else [
        (irrep(w), [irrep(v)]) for w in (1, 2) for v in (2, 4)]
    out = []
    for Wm, mods in pairs:
        out.append(Check(f"mr/W={Wm.name}/V={_names(mods)}", {"W": Wm.name, "modules": _names(mods), "order": D},
                         lambda Wm=Wm, mods=mods: diffops.mr_check(Wm, mods, D)))
    out.append(Check("mr/example3-coefficients", {"W": "irrep1", "modules": "irrep2"}, example3_check,
                     exact=True, detail_keys=("coefficients",)))
    return out


def suite_dual_mr(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = []
    for m in range(1, max_m + 1):
        for w in (1, 2):
            out.append(Check(f"dual-mr/exact/W=irrep{w}/V=irrep{2 * m}",
                             {"W": f"irrep{w}", "modules": f"irrep{2 * m}"},
                             lambda w=w, m=m: diffops.dual_mr_check(irrep(w), [irrep(2 * m)], D, exact=True),
                             exact=True))
    mods = list(Vs) if Vs else [irrep(1), irrep(1)]
    Wm = W or irrep(1)
    out.append(Check(f"dual-mr/series/W={Wm.name}/V={_names(mods)}", {"W": Wm.name, "modules": _names(mods), "order": D},
                     lambda: diffops.dual_mr_check(Wm, mods, D)))
    return out


def _qkzb_suite(kind: str, D: int, Vs=None) -> list[Check]:
    fn = diffops.qkzb_check if kind == "qkzb" else diffops.dual_qkzb_check
    out = [Check(f"{kind}/trivial/V=irrep2/j=1", {"modules": "irrep2", "j": 1, "order": D},
                 lambda: fn([irrep(2)], 1, D))]
    mods = list(Vs) if Vs else [irrep(1), irrep(1)]
    for j in range(1, len(mods) + 1):
        out.append(Check(f"{kind}/V={_names(mods)}/j={j}", {"modules": _names(mods), "j": j, "order": D},
                         lambda j=j: fn(mods, j, D)))
    out.append(Check(f"{kind}/commute/V={_names(mods)}", {"modules": _names(mods), "order": D},
                     lambda: diffops.qkzb_commutation_check(mods, D, dual_side=(kind != "qkzb"))))
    return out


def suite_qkzb(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = _qkzb_suite("qkzb", D, Vs)
    out.append(Check("qkzb/mr-compat/W=irrep1/V=irrep1,irrep1/j=1", {"order": D},
                     lambda: diffops.mr_qkzb_compat_check(irrep(1), [irrep(1), irrep(1)], 1, D)))
    return out


def suite_dual_qkzb(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    return _qkzb_suite("dual-qkzb", D, Vs)


def suite_symmetry(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    if Vs:
        mods = list(Vs)
        return [Check(f"symmetry/V={_names(mods)}", {"modules": _names(mods), "order": D},
                      lambda: diffops.symmetry_check(mods, D), exact=True, detail_keys=("windows",))]
    out = [Check(f"symmetry/N=1/V=irrep{2 * m}", {"modules": f"irrep{2 * m}"},
                 lambda m=m: diffops.symmetry_check([irrep(2 * m)], D), exact=True)
           for m in range(0, 4)]
    out.append(Check("symmetry/N=2/V=irrep1,irrep1", {"modules": "irrep1,irrep1", "order": D},
                     lambda: diffops.symmetry_check([irrep(1), irrep(1)], D), exact=True,
                     detail_keys=("windows",)))
    return out


def suite_abrr(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = []
    for a in range(3):
        for b in range(3):
            out.append(Check(f"abrr/J/{a},{b}", {"W": f"irrep{a}", "V": f"irrep{b}"},
                             lambda a=a, b=b: exchange.abrr_cross_check(irrep(a), irrep(b)), exact=True))
    for rec_fn, cid in ((lambda: exchange.cocycle_check(irrep(1), irrep(1), irrep(1)), "cocycle/1,1,1"),
                        (lambda: exchange.cocycle_check(irrep(1), irrep(2), irrep(1)), "cocycle/1,2,1"),
                        (lambda: exchange.cocycle_check(irrep(0), irrep(1), irrep(1)), "cocycle/0,1,1"),
                        (lambda: exchange.fusion_identity_check(irrep(1), [irrep(1)]), "fusion-identity/1;1"),
                        (lambda: exchange.fusion_identity_check(irrep(1), [irrep(1), irrep(1)]), "fusion-identity/1;1,1"),
                        (lambda: exchange.fusion_identity_check(irrep(1), [irrep(2), irrep(1)]), "fusion-identity/1;2,1"),
                        (lambda: exchange.transpose_check(irrep(1), irrep(1)), "transpose/1,1"),
                        (lambda: exchange.transpose_check(irrep(1), irrep(2)), "transpose/1,2"),
                        (lambda: exchange.qdybe_check(irrep(1), irrep(1), irrep(1)), "qdybe/1,1,1")):
        out.append(Check(f"abrr/{cid}", {}, rec_fn, exact=True))
    return out


def suite_identities(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = [Check("identities/psi/example1", {"order": D}, lambda: psi_example1_check(D))]
    out += [Check(f"identities/psi/closed/m={m}", {"m": m, "order": D}, lambda m=m: psi_closed_check(m, D))
            for m in range(0, max_m + 1)]
    out.append(Check("identities/F/example2", {"order": D}, lambda: F_example2_check(D)))
    out += [Check(f"identities/F/closed-symmetric/m={m}", {"m": m}, lambda m=m: F_symmetric_check(m), exact=True)
            for m in range(0, 4)]
    out.append(Check("identities/example4/R-literal", {}, diffops.example4_R_check, exact=True,
                     detail_keys=("literal_entries",)))
    out.append(Check("identities/example4/R-overall-half-power", {},
                     lambda: {"pass": diffops.example4_R_check()["overall_half_power_reading"]}, exact=True))
    out.append(Check("identities/example4/qkzb-literal", {"order": D},
                     lambda: _keep(diffops.example4_qkzb_check(D), "pass", "order")))
    out.append(Check("identities/example4/qkzb-swapped-sides", {"order": D},
                     lambda: (lambda r: {"pass": r["swapped_sides"], "order": r["order"]})(
                         diffops.example4_qkzb_check(D))))
    out.append(Check("identities/Q/fundamental", {}, Q_fundamental_check, exact=True))
    out += [Check(f"identities/Q/zero-weight/m={m}", {"m": m}, lambda m=m: Q_closed_check(m), exact=True)
            for m in range(0, 4)]
    out += [Check(f"identities/G/irrep{n}", {"module": f"irrep{n}"}, lambda n=n: G_check(n), exact=True)
            for n in (0, 1, 2)]
    out += [Check(f"identities/radial-mr/W=irrep{w}/m=1", {"order": D},
                  lambda w=w: _keep(diffops.radial_mr_check(irrep(w), 1, D), "pass"))
            for w in (1, 2)]
    return out


def suite_q_inverse(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = [Check(f"q-inverse/m={m}", {"m": m}, lambda m=m: _keep(trace.q_inverse_symmetry_check(m), "pass"),
                 exact=True) for m in range(0, max_m + 1)]
    out += [Check(f"q-inverse/u_V/m={m}", {"m": m}, lambda m=m: u_laurent_symmetric_check(m), exact=True)
            for m in range(0, 4)]
    out += [Check(f"q-inverse/u_from_F/m={m}", {"m": m}, lambda m=m: u_from_F_check(m), exact=True,
                  detail_keys=("printed_sign_matches",)) for m in range(1, max_m + 1)]
    return out


def suite_hypergeom(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = []
    for m in range(0, 4):
        out.append(Check(f"hypergeom/tableau/m={m}", {"m": m}, lambda m=m: hypergeom.tableau_check(m), exact=True))
        out.append(Check(f"hypergeom/identity/m={m}", {"m": m},
                         lambda m=m: _keep(hypergeom.identity_check(m), "pass", "constant", "literal_bound_matches"),
                         exact=True, detail_keys=("constant", "literal_bound_matches")))
    for m in range(1, 4):
        out.append(Check(f"hypergeom/constant-term/m={m}", {"m": m, "t_deg": 12},
                         lambda m=m: (lambda r: r | {"order": 12})(hypergeom.constant_term_check(m, 12))))
    return out


def suite_macdonald(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = []
    for m in range(0, max_m + 1):
        out.append(Check(f"macdonald/bridge/m={m}", {"m": m, "K": 10},
                         lambda m=m: macdonald.bridge_check(m, 10) | {"order": 10}))
        out.append(Check(f"macdonald/conjugation/m={m}", {"m": m}, lambda m=m: macdonald.conjugation_check(m), exact=True))
    for m in (0, 1):
        out.append(Check(f"macdonald/commute/n=3/m={m}", {"n": 3, "m": m, "K": 4},
                         lambda m=m: macdonald.commutativity_check(3, m, 4), exact=True))
    for n in (2, 3):
        for m in range(0, max_m + 1):
            out.append(Check(f"macdonald/poly/n={n}/m={m}", {"n": n, "m": m, "max_size": 4},
                             lambda n=n, m=m: _keep(macdonald.polynomial_check(n, m, 4), "pass"), exact=True))
    return out


def suite_limits(D: int, max_m: int, W=None, Vs=None) -> list[Check]:
    out = [Check(f"limits/{name}", {}, fn, exact=True) for name, fn in (
        ("classical-cmr", limits.classical_cmr_check), ("classical-dual", limits.classical_dual_check),
        ("rational-lam", limits.rational_lam_check), ("rational-mu", limits.rational_mu_check),
        ("rational-symmetry", limits.rational_symmetry_check))]
    out.append(Check("limits/classical-consistency", {"order": 6},
                     lambda: limits.classical_limit_consistency(1, 6) | {"order": 6}))
    out.append(Check("limits/rational-from-classical", {}, limits.rational_from_classical, exact=True))
    out.append(Check("limits/double-scaling", {}, limits.double_scaling_limit, exact=True))
    out.append(Check("limits/qkz/V=irrep2", {}, lambda: limits.qkz_limit([irrep(2)]), exact=True))
    out.append(Check("limits/qkz/V=irrep1,irrep1", {}, lambda: limits.qkz_limit([irrep(1), irrep(1)]),
                     exact=True, detail_keys=("pass_with_limit_factor",)))
    out.append(Check("limits/qkz-with-limit-factor/V=irrep1,irrep1", {},
                     lambda: {"pass": limits.qkz_limit([irrep(1), irrep(1)])["pass_with_limit_factor"]},
                     exact=True))
    return out


BUILDERS = {
    "mr": suite_mr, "dual-mr": suite_dual_mr, "qkzb": suite_qkzb, "dual-qkzb": suite_dual_qkzb,
    "symmetry": suite_symmetry, "abrr": suite_abrr, "identities": suite_identities,
    "q-inverse": suite_q_inverse, "hypergeom": suite_hypergeom, "macdonald": suite_macdonald,
    "limits": suite_limits,
}

# checks comparing against a printed display that the computation contradicts
DOCUMENTED_DISCREPANCIES = (
    "identities/example4/R-literal",
    "identities/example4/qkzb-literal",
    "limits/qkz/V=irrep1,irrep1",
)


def build(suite: str, D: int = 24, max_m: int = 2, W=None, Vs=None) -> list[Check]:
    if suite == "all":
        out = []
        for name in SUITES:
            out += BUILDERS[name](D, max_m)
        return out
    if suite not in BUILDERS:
        raise UsageError(f"unknown suite {suite!r}")
    return BUILDERS[suite](D, max_m, W, Vs)

"""Command-line surface.

Commands: `hurwitz` (one number, by any method), `table` (bulk exact
tables), `fit` (pole-form constants + primitive brackets), `hodge` (one
bracket), `verify` (named identity suites), `search` (recurrence null
spaces over a term family).  All output is exact-rational JSON or CSV,
deterministic for a fixed configuration.

Exit codes: 0 success; 1 a verification failed; 2 usage error; 3 memory
budget exceeded; 4 malformed family file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .algebra import lagrange_coeff, rational_str
from .ansatz import (
    AnsatzForm,
    fit_constants,
    verify_change_theorem,
    verify_delta_annihilation,
    verify_euler_square,
    verify_genus_expansion,
    verify_phi_shift_expansion,
    verify_xi_on_I,
)
from .cutjoin import hurwitz_via_cutjoin
from .hodge import (
    DegenerateProfileError,
    HodgeKey,
    HodgeTable,
    MissingPrimitiveError,
    elsv_hurwitz,
    evaluate,
)
from .oracle import (
    BudgetExceededError,
    HurwitzTable,
    connected_hurwitz,
    riemann_hurwitz_r,
)
from .partitions import Partition
from . import golden, simple_hurwitz

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_FAMILY = 4

_METHODS = ("oracle", "cutjoin", "elsv", "closed-form")
_SUITES = (
    "change-theorem",
    "genus-expansion",
    "recursions",
    "closed-forms",
    "oracle-vs-cutjoin",
)


class FamilyFormatError(ValueError):
    """Family file is not a JSON list of {"factors": [[g, p], ...]}."""


# -- shared lazily-built state ---------------------------------------------------

_TABLE_CACHE: dict[tuple[int, int], HurwitzTable] = {}
_FIT_CACHE: dict[int, AnsatzForm] = {}
_SHARED_HODGE = HodgeTable()


def _cutjoin_table(d_max: int, g_max: int) -> HurwitzTable:
    key = (d_max, g_max)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = hurwitz_via_cutjoin(d_max, g_max)
    return _TABLE_CACHE[key]


def _fitted_form(g: int) -> AnsatzForm:
    if g not in _FIT_CACHE:
        d_fit = 2 * g + 2
        _FIT_CACHE[g] = fit_constants(
            g, _cutjoin_table(d_fit, g), d_fit, _SHARED_HODGE
        )
    return _FIT_CACHE[g]


def _hodge_with_primitives(g: int) -> HodgeTable:
    if g >= 2:
        _fitted_form(g)
    return _SHARED_HODGE


# -- output plumbing --------------------------------------------------------------


def _emit(text: str, out_path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_csv(table: HurwitzTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["g", "alpha", "r", "value"])
    for rec in table.to_json_records():
        writer.writerow(
            [rec["g"], ",".join(map(str, rec["alpha"])), rec["r"], rec["value"]]
        )
    return buf.getvalue()


def _parse_parts(text: str, *, minimum: int) -> tuple[int, ...]:
    if text == "":
        return ()
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as ex:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from ex
    if any(p < minimum for p in parts):
        raise ValueError(f"parts must be >= {minimum}: {text!r}")
    return parts


# -- commands ---------------------------------------------------------------------


def _cmd_hurwitz(args: argparse.Namespace) -> int:
    if args.g < 0:
        raise ValueError("genus must be >= 0")
    alpha = Partition.of(_parse_parts(args.alpha, minimum=1))
    if not alpha:
        raise ValueError("profile must be non-empty")
    g, d = args.g, alpha.d
    r = riemann_hurwitz_r(g, alpha)
    if args.method == "oracle":
        table = connected_hurwitz(d, g, r)
        value = table.value(g, alpha)
    elif args.method == "cutjoin":
        value = _cutjoin_table(d, g).value(g, alpha)
    elif args.method == "elsv":
        if g > 3:
            raise ValueError("elsv needs fitted primitives; supported for g <= 3")
        value = elsv_hurwitz(g, alpha, _hodge_with_primitives(g))
    else:  # closed-form
        if set(alpha) != {1}:
            raise ValueError("closed-form method covers only profiles (1,...,1)")
        if g > 3:
            raise ValueError("closed-form constants available for g <= 3")
        value = simple_hurwitz.closed_form_simple(g, d)
    obj = {
        "g": g,
        "alpha": list(alpha),
        "r": r,
        "value": rational_str(value),
        "method": args.method,
    }
    _emit(json.dumps(obj, indent=2), args.out)
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    if args.method == "oracle":
        r_max = args.rmax if args.rmax is not None else 2 * args.dmax + 2 * args.gmax - 2
        table = connected_hurwitz(args.dmax, args.gmax, r_max)
    elif args.method == "cutjoin":
        table = _cutjoin_table(args.dmax, args.gmax)
        if args.rmax is not None:
            table = table.restricted(r_max=args.rmax)
    else:
        raise ValueError("table method must be oracle or cutjoin")
    if args.format == "csv":
        _emit(_table_csv(table), args.out)
    else:
        _emit(table.to_json(), args.out)
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    if args.g < 2:
        raise ValueError("pole-form constants exist for genus >= 2")
    form = _fitted_form(args.g)
    primitives = [
        rec
        for rec in _SHARED_HODGE.to_json_records()
        if rec["g"] == args.g and rec["source"] == "fitted"
    ]
    obj = {"form": form.to_json_obj(), "primitives": primitives}
    _emit(json.dumps(obj, indent=2), args.out)
    return EXIT_OK


def _cmd_hodge(args: argparse.Namespace) -> int:
    theta = _parse_parts(args.theta, minimum=0)
    key = HodgeKey.make(args.g, theta, args.k)
    if args.g > 3:
        raise ValueError("primitive brackets are fitted for g <= 3 only")
    value = evaluate(key, _hodge_with_primitives(args.g))
    obj = {
        "g": args.g,
        "theta": sorted(theta),
        "k": args.k,
        "value": rational_str(value),
    }
    _emit(json.dumps(obj, indent=2), args.out)
    return EXIT_OK


def _load_family(path: str | None) -> list[dict]:
    if path is None:
        return golden.SEARCH_FAMILY_26
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise FamilyFormatError(f"cannot read family file: {ex}") from ex
    if not isinstance(raw, list) or not raw:
        raise FamilyFormatError("family file must be a non-empty JSON list")
    family = []
    for entry in raw:
        if not isinstance(entry, dict) or "factors" not in entry:
            raise FamilyFormatError(f"family term missing 'factors': {entry!r}")
        factors = entry["factors"]
        if not isinstance(factors, list) or not factors:
            raise FamilyFormatError(f"'factors' must be a non-empty list: {entry!r}")
        clean = []
        for pair in factors:
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or not all(isinstance(v, int) and v >= 0 for v in pair)
            ):
                raise FamilyFormatError(f"factor must be [g, p] of ints >= 0: {pair!r}")
            clean.append((pair[0], pair[1]))
        family.append({"factors": clean})
    return family


def _cmd_search(args: argparse.Namespace) -> int:
    family = _load_family(args.family)
    max_g = max(g for term in family for g, _ in term["factors"])
    table = _cutjoin_table(args.dmax, max_g)
    result = simple_hurwitz.search_recursions(family, table, d_verify=args.dmax)
    obj = {
        "family_size": len(family),
        "dimension": result["dimension"],
        "rows": [[kind, j] for kind, j in result["rows"]],
        "basis": [[rational_str(c) for c in vec] for vec in result["basis"]],
        "numeric_failures": [
            {
                "vector": [rational_str(c) for c in item["vector"]],
                "d": item["d"],
                "residual": rational_str(item["residual"]),
            }
            for item in result["numeric_failures"]
        ],
    }
    _emit(json.dumps(obj, indent=2), args.out)
    return EXIT_VERIFY if result["numeric_failures"] else EXIT_OK


# -- verification suites ----------------------------------------------------------


def _suite_oracle_vs_cutjoin(dmax: int) -> list[dict]:
    r_max = 2 * dmax + 6
    g_max = r_max // 2
    oracle = connected_hurwitz(dmax, g_max, r_max)
    cj = _cutjoin_table(dmax, g_max).restricted(r_max=r_max)
    checks = []
    mismatch = None
    for key in sorted(set(oracle.entries) | set(cj.entries)):
        a, b = oracle.entries.get(key), cj.entries.get(key)
        if a != b:
            mismatch = {"g": key[0], "alpha": list(key[1]), "oracle": str(a), "cutjoin": str(b)}
            break
    checks.append(
        {
            "check": f"oracle-vs-cutjoin-d{dmax}-r{r_max}",
            "status": "pass" if mismatch is None else "fail",
            "detail": mismatch or {"entries": len(cj.entries)},
        }
    )
    return checks


def _suite_change_theorem(dmax: int) -> list[dict]:
    table = _cutjoin_table(dmax, 2)
    hodge = _hodge_with_primitives(2)
    reports = [
        verify_euler_square(dmax, table),
        verify_change_theorem(0, dmax, table, hodge),
        verify_change_theorem(1, dmax, table, hodge),
        verify_change_theorem(2, dmax, table, hodge),
    ]
    return [r.to_json_obj() for r in reports]


def _suite_genus_expansion(dmax: int) -> list[dict]:
    form = _fitted_form(2)
    hodge = _hodge_with_primitives(2)
    reports = list(verify_genus_expansion(2, form, hodge))
    reports.append(verify_delta_annihilation(1, hodge))
    reports.append(verify_delta_annihilation(2, hodge))
    for k in range(5):
        reports.append(verify_xi_on_I(k, min(dmax, 8)))
        reports.append(verify_phi_shift_expansion(k, min(dmax, 8)))
    return [r.to_json_obj() for r in reports]


def _suite_recursions(dmax: int) -> list[dict]:
    table = _cutjoin_table(max(dmax, 10), 3)
    checks = []
    for name, spec in sorted(golden.RECURRENCES.items()):
        rep = simple_hurwitz.verify_recurrence(spec, table, range(2, dmax + 1))
        checks.append(
            {
                "check": f"recurrence-{name}-d{dmax}",
                "status": rep["status"],
                "detail": {"failures": rep["failures"]},
            }
        )
    for name, terms in sorted(golden.DIFFERENTIAL_IDENTITIES.items()):
        expr = simple_hurwitz.differential_identity_wexpr(terms)
        numeric = simple_hurwitz.differential_identity_residuals(
            terms, table, range(1, dmax + 1)
        )
        ok = expr.is_zero() and not numeric
        checks.append(
            {
                "check": f"differential-{name}",
                "status": "pass" if ok else "fail",
                "detail": {
                    "symbolic_zero": expr.is_zero(),
                    "numeric_failures": {str(d): rational_str(v) for d, v in numeric.items()},
                },
            }
        )
    result = simple_hurwitz.search_recursions(
        golden.SEARCH_FAMILY_26, table, d_verify=dmax
    )
    checks.append(
        {
            "check": "search-family-26-nullity",
            "status": "pass"
            if result["dimension"] == golden.SEARCH_FAMILY_26_NULLITY
            and not result["numeric_failures"]
            else "fail",
            "detail": {"dimension": result["dimension"]},
        }
    )
    return checks


def _suite_closed_forms(dmax: int) -> list[dict]:
    table = _cutjoin_table(max(dmax, 10), 3)
    checks = []

    def add(name: str, ok: bool, detail=None) -> None:
        checks.append(
            {"check": name, "status": "pass" if ok else "fail", "detail": detail or {}}
        )

    for (g, n), data in sorted(golden.PINNED_W_SERIES.items()):
        expr = simple_hurwitz.wexpr_for(g, n)
        pinned = simple_hurwitz.WExpr(data["laurent"], data["log"])
        add(f"w-series-display-g{g}-n{n}", expr == pinned)
    for g in (2, 3):
        fitted = simple_hurwitz.wexpr_from_ansatz(_fitted_form(g))
        add(f"fitted-form-matches-display-g{g}", fitted == simple_hurwitz.wexpr_for(g, 0))
    for g, coeffs in sorted(golden.POLE_FORM_COEFFS.items()):
        ok = True
        for d in range(1, min(dmax, 10) + 1):
            total = sum(
                (c * lagrange_coeff(m, r, d) for (m, r), c in coeffs.items()),
                Fraction(0),
            )
            if total * math.factorial(2 * d + 2 * g - 2) != table.value(
                g, Partition((1,) * d)
            ):
                ok = False
        add(f"pole-form-display-g{g}", ok)
    form2 = _fitted_form(2)
    agg = golden.AGGREGATE_CONSTANT_CHECKS_G2
    add(
        "fitted-aggregates-g2",
        form2.constants[(2,)] + form2.constants[(3,)] + form2.constants[(4,)]
        == agg["singleton_sum"]
        and form2.constants[(2, 2)] / 2 + form2.constants[(2, 3)]
        == agg["pair_weighted_sum"]
        and form2.constants[(2, 2, 2)] == agg["triple"],
    )
    a_ok = all(
        simple_hurwitz.genus3_a_form(d) == table.value(3, Partition((1,) * d))
        for d in range(1, min(dmax, 8) + 1)
    )
    p_ok = all(
        simple_hurwitz.genus3_p_form(d) == table.value(3, Partition((1,) * d))
        for d in range(1, min(dmax, 8) + 1)
    )
    add("a-combination-g3", a_ok)
    add("polynomial-form-g3", p_ok)
    lag_ok = all(
        simple_hurwitz.a_series_coeff(k, d) == lagrange_coeff(0, k, d)
        for k in range(1, 11)
        for d in range(1, 13)
    )
    add("a-series-vs-lagrange", lag_ok)
    low_ok = all(
        simple_hurwitz.closed_form_simple(g, d) == table.value(g, Partition((1,) * d))
        for g in (0, 1, 2, 3)
        for d in range(1, min(dmax, 10) + 1)
    )
    add("closed-form-low-genus", low_ok)
    spot_ok = all(
        table.value(g, Partition((1,) * d)) == v
        for (g, d), v in golden.SPOT_VALUES.items()
    )
    add("spot-values", spot_ok)
    return checks


_SUITE_RUNNERS = {
    "oracle-vs-cutjoin": (_suite_oracle_vs_cutjoin, 5),
    "change-theorem": (_suite_change_theorem, 8),
    "genus-expansion": (_suite_genus_expansion, 8),
    "recursions": (_suite_recursions, 10),
    "closed-forms": (_suite_closed_forms, 10),
}


def _cmd_verify(args: argparse.Namespace) -> int:
    runner, default_dmax = _SUITE_RUNNERS[args.suite]
    dmax = args.dmax if args.dmax is not None else default_dmax
    checks = runner(dmax)
    if args.format == "json":
        _emit(json.dumps({"suite": args.suite, "checks": checks}, indent=2), args.out)
    else:
        lines = []
        for check in checks:
            mark = "PASS" if check["status"] == "pass" else "FAIL"
            lines.append(f"{mark} {check['check']}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_VERIFY


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hurwitz",
        description="Exact Hurwitz numbers, Hodge integrals, and their identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hurwitz", help="one Hurwitz number by a chosen method")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--alpha", required=True, help="profile parts, e.g. 1,1,2")
    p.add_argument("--method", choices=_METHODS, default="cutjoin")
    p.add_argument("--out")

    p = sub.add_parser("table", help="bulk table of Hurwitz numbers")
    p.add_argument("--method", choices=("oracle", "cutjoin"), default="cutjoin")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--gmax", type=int, default=2)
    p.add_argument("--rmax", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("fit", help="pole-form constants for one genus")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("hodge", help="evaluate one bracket")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--theta", required=True, help="tau subscripts, e.g. 0,0,1 ('' for none)")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", choices=_SUITES, required=True)
    p.add_argument("--dmax", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("search", help="null space of a recurrence family")
    p.add_argument("--family", help="JSON file: [{'factors': [[g, p], ...]}, ...]")
    p.add_argument("--dmax", type=int, default=10)
    p.add_argument("--out")

    return parser


_COMMANDS = {
    "hurwitz": _cmd_hurwitz,
    "table": _cmd_table,
    "fit": _cmd_fit,
    "hodge": _cmd_hodge,
    "verify": _cmd_verify,
    "search": _cmd_search,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BudgetExceededError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_BUDGET
    except FamilyFormatError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_FAMILY
    except (ValueError, DegenerateProfileError, MissingPrimitiveError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.  Results go to stdout (or --out) as JSON or CSV;
progress goes to stderr.  Exit code 0 iff every requested check passed."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from . import acceptance, presets, series
from . import barkoszul as bk
from .quadratic import koszul_dual_presentation, quotient_dim, replacement_model_dim, reverse
from .symgroup import count_connected, enumerate_connected

MAX_TOTAL = 10
MAX_WEIGHT = 6


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- ranges

def parse_range(text: str | None, default_total: int = 4, default_d: int = 3) -> dict:
    """'d<=2,m+n<=4,m<=2' -> bounds; refuses anything over the safety cap."""
    b = {"m": None, "n": None, "d": default_d, "m+n": default_total}
    if text:
        for part in text.split(","):
            mt = re.fullmatch(r"\s*(m\+n|m|n|d|rho)\s*<=\s*(\d+)\s*", part)
            if not mt:
                raise UsageError(f"bad range term {part!r}; use e.g. d<=3,m+n<=5")
            key = "d" if mt.group(1) == "rho" else mt.group(1)
            b[key] = int(mt.group(2))
    if b["m"] is not None and b["n"] is not None and text and "m+n" not in text:
        b["m+n"] = b["m"] + b["n"]
    if b["m+n"] > MAX_TOTAL or b["d"] > MAX_WEIGHT:
        raise UsageError(f"range {text!r} exceeds the safety cap m+n<={MAX_TOTAL}, weight<={MAX_WEIGHT}")
    if b["m+n"] < 2 or b["d"] < 0:
        raise UsageError("range must allow m+n >= 2 and d >= 0")
    return b


def range_cells(b: dict, min_d: int = 0) -> list[tuple[int, int, int]]:
    out = []
    for d in range(min_d, b["d"] + 1):
        for s in range(2, b["m+n"] + 1):
            for m in range(1, s):
                n = s - m
                if (b["m"] is None or m <= b["m"]) and (b["n"] is None or n <= b["n"]):
                    out.append((d, m, n))
    return out


def get_preset(name: str):
    """A preset, '<name>^op' for its reverse, or '<name>^!' for its dual presentation."""
    try:
        if name.endswith("^op"):
            return reverse(presets.get(name[:-3]))
        if name.endswith("^!"):
            return koszul_dual_presentation(presets.get(name[:-2]))
        return presets.get(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


# ---------------------------------------------------------------- commands

def cmd_dims(a) -> tuple[dict, bool]:
    p = get_preset(a.preset)
    b = parse_range(a.range)
    rows = [{"d": d, "m": m, "n": n, "dim": quotient_dim(p, d, m, n)} for d, m, n in range_cells(b)]
    return {"preset": a.preset, "rows": rows}, True


def cmd_dual(a) -> tuple[dict, bool]:
    p = get_preset(a.preset)
    q = koszul_dual_presentation(p)
    b = parse_range(a.range)
    rows = [{"d": d, "m": m, "n": n, "dim": quotient_dim(q, d, m, n)} for d, m, n in range_cells(b)]
    return {"preset": a.preset, "dual": q.to_json(), "rows": rows}, True


def cmd_koszul(a) -> tuple[dict, bool]:
    p = get_preset(a.preset)
    rows, ok = [], True
    for d, m, n in range_cells(parse_range(a.range), 1):
        acceptance.progress(f"[koszul-check] d={d} ({m},{n})")
        cx = bk.koszul_complex(p, d, m, n)
        h = bk.homology_dims(cx)
        good = not any(h.values())
        ok &= good
        rows.append({"d": d, "m": m, "n": n, "dims": " ".join(str(cx.dims[k]) for k in sorted(cx.dims)),
                     "homology": " ".join(str(h[k]) for k in sorted(h)), "status": "PASS" if good else "FAIL"})
    return {"preset": a.preset, "rows": rows}, ok


def cmd_euler(a) -> tuple[dict, bool]:
    p = get_preset(a.preset)
    rows, ok = [], True
    for d, m, n in range_cells(parse_range(a.range), 1):
        e = bk.koszul_euler(p, d, m, n)
        ok &= e == 0
        rows.append({"d": d, "m": m, "n": n, "euler": e})
    return {"preset": a.preset, "rows": rows}, ok


def cmd_bar(a) -> tuple[dict, bool]:
    if a.m + a.n > MAX_TOTAL or a.rho > MAX_WEIGHT:
        raise UsageError(f"cell exceeds the safety cap m+n<={MAX_TOTAL}, weight<={MAX_WEIGHT}")
    p = get_preset(a.preset)
    cx = bk.bar_slice(p, a.rho, a.m, a.n)
    out = cx.to_json(a.dump_matrices)
    out["d_squared_zero"] = cx.d_squared_zero()
    out["homology"] = {str(k): v for k, v in bk.homology_dims(cx).items()} if out["d_squared_zero"] else None
    return out, out["d_squared_zero"]


def cmd_series(a) -> tuple[dict, bool]:
    p = get_preset(a.preset)
    b = parse_range(a.bounds, 5, 3)
    shape = p.meta.get("shape")
    if shape == "algebra":
        rep = series.algebra_equation(p, a.order)
    elif shape == "operad":
        rep = series.operad_equation(p, a.order if a.order <= 6 else 6)
    else:
        rep = series.verify_koszul_equation(p, b["m+n"], b["d"], literal=a.literal)
    return rep, rep["ok"]


def cmd_assoc(a) -> tuple[dict, bool]:
    if not 1 <= a.order <= 10:
        raise UsageError("order must be in 1..10")
    rep = series.associahedra(a.order)
    return rep, rep["ok"]


def cmd_compose(a) -> tuple[dict, bool]:
    A, B = get_preset(a.top), get_preset(a.bottom)
    cmp = get_preset(a.compare) if a.compare else None
    rows, ok = [], True
    for d, m, n in range_cells(parse_range(a.range)):
        row = {"d": d, "m": m, "n": n, "dim": replacement_model_dim(A, B, d, m, n)}
        if cmp is not None:
            row["compare"] = quotient_dim(cmp, d, m, n)
            ok &= row["compare"] == row["dim"]
        rows.append(row)
    return {"top": a.top, "bottom": a.bottom, "compare": a.compare, "rows": rows}, ok


def _profile(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad profile {text!r}; use e.g. 2,1") from None
    if not parts or min(parts) < 1:
        raise UsageError(f"profile parts must be positive: {text!r}")
    return parts


def cmd_connperm(a) -> tuple[dict, bool]:
    k, j = _profile(a.kbar), _profile(a.jbar)
    if sum(k) != sum(j):
        raise UsageError(f"|kbar| = {sum(k)} differs from |jbar| = {sum(j)}")
    out = {"kbar": list(k), "jbar": list(j), "count": count_connected(k, j)}
    if a.list:
        out["permutations"] = [str(p) for p in enumerate_connected(k, j)]
    return out, True


def cmd_selftest(a) -> tuple[dict, bool]:
    wanted = [int(x) for x in a.criteria.split(",")] if a.criteria else sorted(acceptance.CRITERIA)
    results, ok = {}, True
    for k in wanted:
        if k not in acceptance.CRITERIA:
            raise UsageError(f"no criterion {k}")
        r = acceptance.run(k)
        acceptance.progress(acceptance.verdict_line(k, r))
        results[str(k)] = {"ok": r["ok"], "seconds": r["seconds"], "title": acceptance.TITLES[k]}
        ok &= r["ok"]
    return {"criteria": results}, ok


# ---------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the result here instead of stdout")
    ap = argparse.ArgumentParser(prog="properad", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common])
    rng = "cell range, e.g. d<=3,m+n<=5 (optional m<=, n<=)"

    s = add("dims", help="quotient dims table")
    s.add_argument("preset")
    s.add_argument("--range", help=rng)
    s.set_defaults(fn=cmd_dims)

    s = add("dual", help="dual presentation P^! and its dims")
    s.add_argument("preset")
    s.add_argument("--range", help=rng)
    s.set_defaults(fn=cmd_dual)

    s = add("koszul-check", help="homology of the Koszul complex per cell")
    s.add_argument("preset")
    s.add_argument("--range", help=rng)
    s.set_defaults(fn=cmd_koszul)

    s = add("euler", help="Euler characteristics of the Koszul complex")
    s.add_argument("preset")
    s.add_argument("--range", help=rng)
    s.set_defaults(fn=cmd_euler)

    s = add("bar", help="one bar complex slice")
    s.add_argument("preset")
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump-matrices", action="store_true")
    s.set_defaults(fn=cmd_bar)

    s = add("series-check", help="Poincare series functional equation residuals")
    s.add_argument("preset")
    s.add_argument("--bounds", help="for properads, e.g. m+n<=5,d<=3")
    s.add_argument("--order", type=int, default=6, help="order for algebra/operad presets")
    s.add_argument("--literal", action="store_true", help="Psi without the 1/(b!a!) factor")
    s.set_defaults(fn=cmd_series)

    s = add("assoc", help="associahedra generating series report")
    s.add_argument("--order", type=int, default=8)
    s.set_defaults(fn=cmd_assoc)

    s = add("compose-dims", help="dims of A ⊠_c B (A operations on top)")
    s.add_argument("top")
    s.add_argument("bottom", help="e.g. lie^op")
    s.add_argument("--range", help=rng)
    s.add_argument("--compare", help="preset whose quotient dims should match")
    s.set_defaults(fn=cmd_compose)

    s = add("connperm", help="connected permutations for block profiles")
    s.add_argument("kbar")
    s.add_argument("jbar")
    s.add_argument("--list", action="store_true")
    s.set_defaults(fn=cmd_connperm)

    s = add("selftest", help="run the acceptance criteria")
    s.add_argument("--criteria", help="comma list, default all")
    s.set_defaults(fn=cmd_selftest)
    return ap


def render(result: dict, fmt: str) -> str:
    if fmt == "csv":
        rows = result.get("rows")
        if rows is None:
            raise UsageError("csv output needs a table-valued command")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["empty"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return json.dumps(result, indent=1, sort_keys=True, default=str) + "\n"


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        result, ok = a.fn(a)
        text = render(result, a.format)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

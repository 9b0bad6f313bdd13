"""The ten acceptance criteria as runnable checks.

Each ``criterion_k`` returns a dict with ``ok`` and details; ``run_all`` runs a
selection.  Per-cell work is dispatched through ``run_cells``, which uses a
process pool when PROPERAD_WORKERS > 1 and always returns results in task order.
"""

from __future__ import annotations

import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from . import presets, sbimod, series
from . import barkoszul as bk
from .quadratic import koszul_dual_presentation, quotient_dim, replacement_model_dim, reverse
from .symgroup import Permutation, count_connected, is_connected

ALL_PRESETS = ("lie", "com", "as", "bilie", "bilie0", "epsbi", "halfbi", "frob")
KOSZUL_PRESETS = ("bilie", "epsbi", "as", "lie", "com")


def workers() -> int:
    try:
        return max(1, int(os.environ.get("PROPERAD_WORKERS", "1")))
    except ValueError:
        return 1


def progress(msg: str) -> None:
    if os.environ.get("PROPERAD_QUIET") != "1":
        print(msg, file=sys.stderr, flush=True)


def run_cells(fn: Callable, tasks: Sequence[tuple], label: str = "") -> list:
    """fn(*task) for every task; results in task order."""
    n = workers()
    out = []
    if n == 1 or len(tasks) < 2:
        for i, t in enumerate(tasks):
            out.append(fn(*t))
            progress(f"[{label}] {i + 1}/{len(tasks)} {t}")
        return out
    with ProcessPoolExecutor(max_workers=n) as ex:
        futs = [ex.submit(fn, *t) for t in tasks]
        for i, f in enumerate(futs):
            out.append(f.result())
            progress(f"[{label}] {i + 1}/{len(tasks)} {tasks[i]}")
    return out


def cells(max_total: int, weights: Sequence[int]) -> list[tuple[int, int, int]]:
    return [(d, m, s - m) for d in weights for s in range(2, max_total + 1) for m in range(1, s)]


def _compositions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


# ---------------------------------------------------------------- 1

def criterion_1() -> dict:
    t0 = time.time()
    bad = []
    for N in range(1, 6):
        for j in _compositions(N):
            if count_connected((N,), j) != math.factorial(N):
                bad.append(("full", N, j))
            for k in _compositions(N):
                if k != (N,) and count_connected(k, (1,) * N) != 0:
                    bad.append(("discrete", k))
    sigma = Permutation.parse("(1 3 2 4)")
    if not is_connected(sigma, (2, 2), (2, 2)):
        bad.append("(1324) should be ((2,2),(2,2))-connected")
    if is_connected(sigma, (1, 1, 2), (2, 1, 1)):
        bad.append("(1324) should not be ((1,1,2),(2,1,1))-connected")
    dt = time.time() - t0
    return {"ok": not bad and dt < 1.0, "failures": bad, "seconds": round(dt, 3)}


# ---------------------------------------------------------------- 2

def _d2_cell(name: str, rho: int, m: int, n: int) -> dict:
    p = presets.get(name)
    res = {}
    for kind, build in (("bar", bk.bar_slice), ("cobar", bk.cobar_slice), ("koszul", bk.koszul_complex)):
        cx = build(p, rho, m, n)
        res[kind] = cx.d_squared_zero()
    return res


def criterion_2(names: Sequence[str] = ALL_PRESETS, max_rho: int = 4, max_total: int = 6) -> dict:
    bad = []
    checked = 0
    for name in names:
        tasks = [(name, rho, m, n) for rho, m, n in cells(max_total, range(1, max_rho + 1))]
        for t, r in zip(tasks, run_cells(_d2_cell, tasks, f"d^2 {name}")):
            checked += 3
            bad.extend((t, k) for k, ok in r.items() if not ok)
        bk.clear_caches()
    return {"ok": not bad, "slices_checked": checked, "failures": bad}


# ---------------------------------------------------------------- 3

def _dual_cell(name: str, d: int, m: int, n: int) -> tuple[int, int]:
    p = presets.get(name)
    return bk.koszul_dual_dim(p, d, m, n), quotient_dim(_shriek(name), d, m, n)


_SHRIEK: dict = {}


def _shriek(name: str):
    if name not in _SHRIEK:
        _SHRIEK[name] = koszul_dual_presentation(presets.get(name))
    return _SHRIEK[name]


def criterion_3(names: Sequence[str] = ALL_PRESETS, max_d: int = 3, max_total: int = 5) -> dict:
    bad = []
    for name in names:
        tasks = [(name, d, m, n) for d, m, n in cells(max_total, range(0, max_d + 1))]
        for t, (a, b) in zip(tasks, run_cells(_dual_cell, tasks, f"dual {name}")):
            if a != b:
                bad.append({"cell": t, "kernel": a, "presentation": b})
        bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 4

def criterion_4() -> dict:
    bad = []
    bl = _shriek("bilie")
    for s in range(2, 7):
        for m in range(1, s):
            n = s - m
            for d in range(0, s - 1):
                want = 1 if d == m + n - 2 else 0
                got = quotient_dim(bl, d, m, n)
                if got != want:
                    bad.append({"preset": "bilie^!", "cell": (d, m, n), "dim": got, "want": want})
    eb = _shriek("epsbi")
    for m in range(1, 4):
        for n in range(1, 4):
            d = m + n - 2
            got = quotient_dim(eb, d, m, n)
            if got != math.factorial(m) * math.factorial(n):
                bad.append({"preset": "epsbi^!", "cell": (d, m, n), "dim": got})
    bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 5

def _homology_cell(name: str, d: int, m: int, n: int) -> dict:
    h = bk.homology_dims(bk.koszul_complex(presets.get(name), d, m, n))
    return {k: v for k, v in h.items() if v}


def _euler_cell(name: str, d: int, m: int, n: int) -> int:
    return bk.koszul_euler(presets.get(name), d, m, n)


def criterion_5(names: Sequence[str] = KOSZUL_PRESETS) -> dict:
    bad = []
    for name in names:
        tasks = [(name, d, m, n) for d, m, n in cells(5, range(1, 4))]
        for t, h in zip(tasks, run_cells(_homology_cell, tasks, f"koszul {name}")):
            if h:
                bad.append({"cell": t, "homology": h})
        tasks = [(name, d, m, n) for d, m, n in cells(6, range(1, 5))]
        for t, e in zip(tasks, run_cells(_euler_cell, tasks, f"euler {name}")):
            if e:
                bad.append({"cell": t, "euler": e})
        bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 6

def _lemma_cell(name: str, a: str, d: int, m: int, n: int) -> tuple[int, int]:
    A = presets.get(a)
    return quotient_dim(presets.get(name), d, m, n), replacement_model_dim(A, reverse(A), d, m, n)


def criterion_6(max_d: int = 4, max_total: int = 6) -> dict:
    bad = []
    for name, a in (("bilie", "lie"), ("epsbi", "as")):
        tasks = [(name, a, d, m, n) for d, m, n in cells(max_total, range(0, max_d + 1))]
        for t, (p, r) in zip(tasks, run_cells(_lemma_cell, tasks, f"replacement {name}")):
            if p != r:
                bad.append({"cell": t, "quotient": p, "composite": r})
        bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 7

def criterion_7(names: Sequence[str] = ("bilie", "epsbi"), max_d: int = 3, max_total: int = 5) -> dict:
    bad = []
    for name in names:
        p = presets.get(name)
        pp = koszul_dual_presentation(_shriek(name))
        for d, m, n in cells(max_total, range(0, max_d + 1)):
            a, b = quotient_dim(p, d, m, n), quotient_dim(pp, d, m, n)
            if a != b:
                bad.append({"preset": name, "cell": (d, m, n), "P": a, "P!!": b})
        bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 8

def _aug_cell(name: str, rho: int, m: int, n: int) -> dict:
    h = bk.homology_dims(bk.augmented_bar_slice(presets.get(name), rho, m, n))
    return {k: v for k, v in h.items() if v}


def criterion_8(names: Sequence[str] = ("as", "lie"), max_rho: int = 3, max_total: int = 4) -> dict:
    bad = []
    for name in names:
        tasks = [(name, rho, m, n) for rho, m, n in cells(max_total, range(0, max_rho + 1))]
        for (nm, rho, m, n), h in zip(tasks, run_cells(_aug_cell, tasks, f"augmented {name}")):
            want = {0: 1} if (rho, m, n) == (0, 1, 1) else {}
            if h != want:
                bad.append({"cell": (nm, rho, m, n), "homology": h})
        bk.clear_caches()
    return {"ok": not bad, "failures": bad}


# ---------------------------------------------------------------- 9

def random_pairs(count: int = 20, seed: int = 7, free_only: bool = False) -> dict:
    rng = random.Random(seed)
    kinds = ("regular",) if free_only else sbimod._KINDS
    tag = "free" if free_only else "mono"
    agree, mism = 0, []
    for i in range(count):
        Q = sbimod.random_monomial(rng, f"{tag}{seed}Q{i}", kinds=kinds)
        P = sbimod.random_monomial(rng, f"{tag}{seed}P{i}", kinds=kinds)
        r = series.psi_vs_compose(Q, P, 4, 2)
        if r["ok"]:
            agree += 1
        else:
            mism.append({"pair": i, "Q": [c.name for c in Q.components],
                         "P": [c.name for c in P.components], "cells": r["mismatches"]})
    return {"ok": not mism, "agree": agree, "total": count, "mismatches": mism}


def criterion_9() -> dict:
    parts = {}
    for name in ("bilie", "epsbi"):
        parts[f"koszul_equation:{name}"] = series.verify_koszul_equation(presets.get(name), 5, 3)
    for name in ("dualnumbers", "free_algebra"):
        parts[f"algebra_equation:{name}"] = series.algebra_equation(presets.get(name), 8)
    for name in ("com", "lie", "as"):
        parts[f"operad_equation:{name}"] = series.operad_equation(presets.get(name), 6)
    parts["psi_vs_compose:monomial"] = random_pairs(20, 7)
    # context, not part of the verdict
    info = {"psi_vs_compose:free_actions": random_pairs(20, 7, free_only=True)}
    bk.clear_caches()
    return {"ok": all(p["ok"] for p in parts.values()),
            "parts": {k: v["ok"] for k, v in parts.items()}, "details": parts, "context": info}


# ---------------------------------------------------------------- 10

def criterion_10() -> dict:
    rep = series.associahedra(8)
    ok = rep["ok"] and rep["P"][1] == [2, 1] and rep["P"][2] == [5, 5, 1]
    return {"ok": ok, "report": rep}


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}

TITLES = {1: "connected permutations", 2: "d^2 = 0 on every assembled complex",
          3: "kernel-route dual dims = presentation-route dual dims",
          4: "dims of BiLie^! and epsBi^!", 5: "Koszul complex acyclic; Euler characteristic 0",
          6: "replacement-rule composite dims", 7: "double dual", 8: "augmented bar acyclic",
          9: "series equations and Psi oracle", 10: "associahedra"}


def run(k: int) -> dict:
    t0 = time.time()
    res = CRITERIA[k]()
    res["seconds"] = round(time.time() - t0, 2)
    return res


def verdict_line(k: int, res: dict) -> str:
    return f"criterion {k}: {'PASS' if res['ok'] else 'FAIL'} ({TITLES[k]}, {res['seconds']} s)"

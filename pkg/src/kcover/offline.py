"""Exact offline baselines: a dynamic program over end-sorted items and a
subset-enumeration oracle used to verify it.

The DP processes sub-intervals in non-decreasing end order.  For each item
it knows the deepest-overlapping predecessor (the intersecting item with
the left-most start) and the nearest disjoint predecessor, and combines two
value tables:

* ``chi[i][j]``   -- best coverage using at most j accepts from the first i
                     sorted items;
* ``kappa[i][j]`` -- same, but item i itself must be accepted.

The intersecting transition must recurse through ``kappa`` so that the
subtracted overlap is actually covered by the accepted predecessor.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Optional

from . import numeric
from .errors import SettingError, SizeGuardError
from .intervals import (
    CoverageState,
    Instance,
    absorb,
    intersection_length,
    union_length,
)


@dataclass(frozen=True)
class SortedInstance:
    """Items of a singleton-batch instance, sorted by (end, start, index)."""

    base: Instance
    order: tuple[int, ...]          # sorted position -> original index
    starts: tuple[float, ...]       # in sorted order
    ends: tuple[float, ...]


@dataclass
class DpContext:
    """Predecessor maps and filled value tables, exposed for inspection."""

    psi: list[Optional[int]]        # 0-based sorted indices, None when absent
    phi: list[Optional[int]]
    chi: list[list[float]]          # (n+1) x (q+1); chi[i][j] over first i items
    kappa: list[list[float]]
    cells_filled: int


def _require_singletons(inst: Instance, caller: str) -> None:
    for i, b in enumerate(inst.items):
        if not b.is_singleton:
            raise SettingError(
                f"{caller} works on plain sub-intervals; items[{i}] is a "
                "multi-part batch -- use brute_force_offline for unit-sum input"
            )


def sort_instance(inst: Instance) -> SortedInstance:
    _require_singletons(inst, "sort_instance")
    ivs = [b.parts[0] for b in inst.items]
    order = tuple(
        sorted(range(len(ivs)), key=lambda i: (ivs[i].end, ivs[i].start, i))
    )
    starts = tuple(ivs[i].start for i in order)
    ends = tuple(ivs[i].end for i in order)
    return SortedInstance(inst, order, starts, ends)


def _sparse_argmin(values: tuple[float, ...]) -> Callable[[int, int], int]:
    """O(n log n) range-argmin over `values`; ties go to the smaller index."""
    n = len(values)
    log = [0] * (n + 1)
    for i in range(2, n + 1):
        log[i] = log[i // 2] + 1
    table = [list(range(n))]
    j = 1
    while (1 << j) <= n:
        prev = table[-1]
        half = 1 << (j - 1)
        row = []
        for i in range(n - (1 << j) + 1):
            a, b = prev[i], prev[i + half]
            row.append(a if (values[a], a) <= (values[b], b) else b)
        table.append(row)
        j += 1

    def query(lo: int, hi: int) -> int:  # inclusive range, lo <= hi
        jj = log[hi - lo + 1]
        a = table[jj][lo]
        b = table[jj][hi - (1 << jj) + 1]
        return a if (values[a], a) <= (values[b], b) else b

    return query


def build_predecessors(s: SortedInstance) -> tuple[list[Optional[int]], list[Optional[int]]]:
    """For each sorted item i return (psi, phi), both 0-based or None.

    psi(i): among j < i intersecting item i with a strictly smaller start,
    the one with the left-most start (ties: smallest index).
    phi(i): among j < i disjoint from item i (end < start of i), the one
    ending closest to it (ties: smallest index).
    """
    n = len(s.order)
    argmin_start = _sparse_argmin(s.starts) if n else None
    psi: list[Optional[int]] = [None] * n
    phi: list[Optional[int]] = [None] * n
    for i in range(n):
        o_i = s.starts[i]
        t = bisect_left(s.ends, o_i, 0, i)  # first predecessor with end >= o_i
        if t <= i - 1:
            q = argmin_start(t, i - 1)
            if s.starts[q] < o_i:
                psi[i] = q
        idx = t - 1
        if idx >= 0:
            while idx - 1 >= 0 and s.ends[idx - 1] == s.ends[idx]:
                idx -= 1
            phi[i] = idx
    return psi, phi


def _dp_tables(s: SortedInstance, quota: int):
    """Fill chi/kappa plus parent pointers for backtracking."""
    n = len(s.order)
    psi, phi = build_predecessors(s)
    lens = [s.ends[i] - s.starts[i] for i in range(n)]

    # Prefix union lengths, Len of the first i sorted items.
    pref = [0.0] * (n + 1)
    state = CoverageState.empty()
    for i in range(n):
        state = absorb(state, s.base.items[s.order[i]])
        pref[i + 1] = state.total_len

    q = quota
    chi = [[0.0] * (q + 1) for _ in range(n + 1)]
    kappa = [[0.0] * (q + 1) for _ in range(n + 1)]
    # parent entries: ("all",) | ("reject",) | ("phi", prev) | ("psi", prev) | ("last",)
    pchi: list[list[tuple]] = [[("none",)] * (q + 1) for _ in range(n + 1)]
    pkap: list[list[tuple]] = [[("none",)] * (q + 1) for _ in range(n + 1)]
    cells = 0

    for i in range(1, n + 1):
        item = i - 1  # 0-based sorted index of the newest item
        ov = (
            intersection_length(
                s.base.items[s.order[item]].parts[0],
                s.base.items[s.order[psi[item]]].parts[0],
            )
            if psi[item] is not None
            else 0.0
        )
        for j in range(0, q + 1):
            cells += 2
            # kappa: item i is accepted.
            if j == 0:
                kappa[i][j] = 0.0
            elif j == 1:
                kappa[i][j] = lens[item]
                pkap[i][j] = ("last",)
            else:
                fi = phi[item]
                best = lens[item] + chi[0 if fi is None else fi + 1][j - 1]
                parent = ("phi", 0 if fi is None else fi + 1)
                if psi[item] is not None:
                    cand = lens[item] - ov + kappa[psi[item] + 1][j - 1]
                    if cand > best:
                        best, parent = cand, ("psi", psi[item] + 1)
                kappa[i][j] = best
                pkap[i][j] = parent
            # chi: item i free to be rejected.
            if j == 0:
                chi[i][j] = 0.0
            elif i <= j:
                chi[i][j] = pref[i]
                pchi[i][j] = ("all",)
            else:
                best = chi[i - 1][j]
                parent = ("reject",)
                fi = phi[item]
                cand = lens[item] + chi[0 if fi is None else fi + 1][j - 1]
                if cand > best:
                    best, parent = cand, ("phi", 0 if fi is None else fi + 1)
                if psi[item] is not None:
                    cand = lens[item] - ov + kappa[psi[item] + 1][j - 1]
                    if cand > best:
                        best, parent = cand, ("psi", psi[item] + 1)
                chi[i][j] = best
                pchi[i][j] = parent

    ctx = DpContext(psi, phi, chi, kappa, cells)
    return ctx, pchi, pkap


def dp_context(inst: Instance, quota: Optional[int] = None) -> DpContext:
    """Run the DP and expose its tables (used by property tests)."""
    q = inst.quota if quota is None else quota
    ctx, _, _ = _dp_tables(sort_instance(inst), q)
    return ctx


def solve_offline(
    inst: Instance, quota: Optional[int] = None
) -> tuple[float, tuple[int, ...]]:
    """Optimal coverage with at most `quota` accepts, plus achieving indices.

    Works for any singleton-batch instance (UL, FL, AL).  Multi-part
    unit-sum batches are rejected; use :func:`brute_force_offline` there.
    """
    q = inst.quota if quota is None else quota
    if q < 0:
        raise SettingError(f"quota must be >= 0, got {q}")
    if q == 0:
        return 0.0, ()
    _require_singletons(inst, "solve_offline")
    s = sort_instance(inst)
    ctx, pchi, pkap = _dp_tables(s, q)
    n = inst.n

    chosen: set[int] = set()
    stack = [("chi", n, q)]
    while stack:
        table, i, j = stack.pop()
        if i == 0 or j == 0:
            continue
        parent = (pchi if table == "chi" else pkap)[i][j]
        kind = parent[0]
        if kind == "all":
            chosen.update(range(i))
        elif kind == "reject":
            stack.append(("chi", i - 1, j))
        elif kind == "phi":
            chosen.add(i - 1)
            stack.append(("chi", parent[1], j - 1))
        elif kind == "psi":
            chosen.add(i - 1)
            stack.append(("kappa", parent[1], j - 1))
        elif kind == "last":
            chosen.add(i - 1)
    picked = tuple(sorted(s.order[i] for i in chosen))
    return ctx.chi[n][q], picked


def _unit_predecessors(s: SortedInstance):
    """lam/mu for the unit-length DP, both 0-based sorted indices or None.

    lam(i): deepest-overlapping predecessor (smallest end with end within one
    unit of item i's end); mu(i): nearest predecessor at least one unit away.
    """
    n = len(s.order)
    lam: list[Optional[int]] = [None] * n
    mu: list[Optional[int]] = [None] * n
    for i in range(n):
        d_i = s.ends[i]
        t = bisect_left(s.ends, d_i - 1.0 - numeric.EPS, 0, i)
        if t <= i - 1:
            lam[i] = t
        idx = bisect_right(s.ends, d_i - 1.0 + numeric.EPS, 0, i) - 1
        if idx >= 0:
            while idx - 1 >= 0 and s.ends[idx - 1] == s.ends[idx]:
                idx -= 1
            mu[i] = idx
    return lam, mu


def solve_offline_unit(
    inst: Instance, quota: Optional[int] = None
) -> tuple[float, tuple[int, ...]]:
    """Unit-length specialisation of the offline optimum.

    Exploits that some optimal solution always accepts the latest-ending
    item, so every table cell commits to its last item and recurses through
    the lam/mu predecessors only.
    """
    q = inst.quota if quota is None else quota
    if q < 0:
        raise SettingError(f"quota must be >= 0, got {q}")
    if q == 0:
        return 0.0, ()
    _require_singletons(inst, "solve_offline_unit")
    for i, b in enumerate(inst.items):
        if abs(b.parts[0].length - 1.0) > numeric.EPS:
            raise SettingError(
                f"solve_offline_unit needs unit-length items; items[{i}] has "
                f"length {b.parts[0].length!r}"
            )
    s = sort_instance(inst)
    n = inst.n
    lam, mu = _unit_predecessors(s)
    lens = [s.ends[i] - s.starts[i] for i in range(n)]

    chi = [[0.0] * (q + 1) for _ in range(n + 1)]
    parent: list[list[tuple]] = [[("none",)] * (q + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        item = i - 1
        ov = 0.0
        if lam[item] is not None:
            ov = intersection_length(
                s.base.items[s.order[item]].parts[0],
                s.base.items[s.order[lam[item]]].parts[0],
            )
        for j in range(1, q + 1):
            if j == 1 or (lam[item] is None and mu[item] is None):
                chi[i][j] = lens[item]
                parent[i][j] = ("self",)
                continue
            best, par = None, None
            if mu[item] is not None:
                best = lens[item] + chi[mu[item] + 1][j - 1]
                par = ("mu", mu[item] + 1)
            if lam[item] is not None:
                cand = lens[item] - ov + chi[lam[item] + 1][j - 1]
                if best is None or cand > best:
                    best, par = cand, ("lam", lam[item] + 1)
            chi[i][j] = best
            parent[i][j] = par

    chosen: set[int] = set()
    i, j = n, q
    while i > 0 and j > 0:
        kind = parent[i][j]
        chosen.add(i - 1)
        if kind[0] == "self":
            break
        i, j = kind[1], j - 1
    picked = tuple(sorted(s.order[t] for t in chosen))
    return chi[n][q], picked


def brute_force_offline(
    inst: Instance, quota: Optional[int] = None, max_n: int = 20
) -> tuple[float, tuple[int, ...]]:
    """Exact optimum by enumerating all quota-sized subsets.

    Handles unit-sum batches natively.  Coverage is monotone, so only
    subsets of size min(quota, n) need to be checked.
    """
    q = inst.quota if quota is None else quota
    if q < 0:
        raise SettingError(f"quota must be >= 0, got {q}")
    n = inst.n
    if n > max_n:
        raise SizeGuardError(
            f"n={n} exceeds the enumeration guard max_n={max_n}"
        )
    r = min(q, n)
    if r == 0:
        return 0.0, ()
    best_val = -1.0
    best_set: tuple[int, ...] = ()
    for combo in itertools.combinations(range(n), r):
        val = union_length([inst.items[i] for i in combo])
        if val > best_val:
            best_val, best_set = val, combo
    return best_val, best_set

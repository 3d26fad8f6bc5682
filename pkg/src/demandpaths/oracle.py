"""Exact oracles for tiny instances and generators for extremal families."""

from __future__ import annotations

import itertools

from .core import BaseSpec, Complete, DemandGraph, Grid, Realization
from .errors import BadParams, TooLarge

MAX_ORACLE_VERTICES = 8
MAX_ORACLE_EDGES = 10


def _guard(base: BaseSpec, g: DemandGraph) -> None:
    if base.num_vertices > MAX_ORACLE_VERTICES or g.num_edges > MAX_ORACLE_EDGES:
        raise TooLarge(
            f"oracle limited to {MAX_ORACLE_VERTICES} vertices and "
            f"{MAX_ORACLE_EDGES} demand edges"
        )


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def search_paths(g: DemandGraph, base: BaseSpec) -> dict[int, list[int]] | None:
    """Depth-first search for a system of pairwise edge-disjoint paths,
    one per demand edge.  Exact: returns None only if no system exists.

    Demands are routed in decreasing endpoint-degree order, candidate
    paths shortest first; parallel demands are forced into
    lexicographically nondecreasing path order to kill symmetry.
    """
    demands = sorted(
        g.edges.values(),
        key=lambda e: (-(g.degree(e.u) + g.degree(e.v)), _edge_key(e.u, e.v), e.eid),
    )
    vs = base.num_vertices
    free: set[tuple[int, int]] = set()
    for a in range(1, vs + 1):
        for b in range(a + 1, vs + 1):
            if base.is_edge(a, b):
                free.add((a, b))
    remaining_deg: dict[int, int] = {v: 0 for v in range(1, vs + 1)}
    for e in demands:
        remaining_deg[e.u] += 1
        remaining_deg[e.v] += 1
    free_deg: dict[int, int] = {v: 0 for v in range(1, vs + 1)}
    for a, b in free:
        free_deg[a] += 1
        free_deg[b] += 1

    def simple_paths(u: int, v: int) -> list[list[int]]:
        out: list[list[int]] = []
        stack: list[tuple[int, list[int]]] = [(u, [u])]
        while stack:
            at, path = stack.pop()
            for w in sorted(base.neighbors(at)):
                if w in path or _edge_key(at, w) not in free:
                    continue
                if w == v:
                    out.append(path + [w])
                else:
                    stack.append((w, path + [w]))
        out.sort(key=lambda p: (len(p), p))
        return out

    solution: dict[int, list[int]] = {}

    def place(path: list[int], sign: int) -> None:
        for a, b in zip(path, path[1:]):
            key = _edge_key(a, b)
            if sign > 0:
                free.discard(key)
                free_deg[a] -= 1
                free_deg[b] -= 1
            else:
                free.add(key)
                free_deg[a] += 1
                free_deg[b] += 1

    def feasible() -> bool:
        return all(free_deg[v] >= remaining_deg[v] for v in remaining_deg)

    def rec(i: int) -> bool:
        if i == len(demands):
            return True
        e = demands[i]
        remaining_deg[e.u] -= 1
        remaining_deg[e.v] -= 1
        prev = None
        if i > 0 and _edge_key(demands[i - 1].u, demands[i - 1].v) == _edge_key(
            e.u, e.v
        ):
            prev = solution[demands[i - 1].eid]
        for path in simple_paths(e.u, e.v):
            if prev is not None and path < prev:
                continue
            place(path, +1)
            if feasible():
                solution[e.eid] = path
                if rec(i + 1):
                    return True
                del solution[e.eid]
            place(path, -1)
        remaining_deg[e.u] += 1
        remaining_deg[e.v] += 1
        return False

    if rec(0):
        return dict(solution)
    return None


def brute_force_realize(d: DemandGraph, base: BaseSpec) -> Realization | None:
    """Exact realizability decision for small instances; returns a
    verified-by-construction realization or None when none exists."""
    _guard(base, d)
    paths = search_paths(d, base)
    if paths is None:
        return None
    return Realization(base, {d.edges[eid].label: p for eid, p in paths.items()})


def brute_force_maxedp(d: DemandGraph, base: BaseSpec) -> int:
    """Largest number of demand edges simultaneously realizable, by
    exhaustive search over edge subsets (largest first)."""
    _guard(base, d)
    eids = sorted(d.edges)
    for k in range(len(eids), 0, -1):
        for combo in itertools.combinations(eids, k):
            sub = DemandGraph(d.vertices)
            for eid in combo:
                e = d.edges[eid]
                sub.add_edge(e.u, e.v, e.label)
            if search_paths(sub, base) is not None:
                return k
    return 0


# ---------------------------------------------------------------------------
# Instance families
# ---------------------------------------------------------------------------


def one_factor_bundles(n: int, q: int) -> tuple[Complete, DemandGraph]:
    """Perfect matching on n vertices with every pair taken q times."""
    if n < 2 or n % 2 != 0:
        raise BadParams(f"n={n} must be even and at least 2")
    if q < 1:
        raise BadParams(f"q={q} must be positive")
    g = DemandGraph(n)
    label = 1
    for i in range(1, n, 2):
        for _ in range(q):
            g.add_edge(i, i + 1, label)
            label += 1
    return Complete(n), g


def antipodal(t: int, d: int, q: int) -> tuple[Grid, DemandGraph]:
    """Matching of every grid vertex with its coordinate-wise mirror
    (x_1..x_d) <-> (t+1-x_1..t+1-x_d), each pair q times."""
    if t < 2 or t % 2 != 0:
        raise BadParams(f"t={t} must be even and at least 2")
    if d < 1:
        raise BadParams(f"d={d} must be positive")
    if q < 1:
        raise BadParams(f"q={q} must be positive")
    base = Grid(t, d)
    g = DemandGraph(base.num_vertices)
    label = 1
    for v in range(1, base.num_vertices + 1):
        partner = base.index(tuple(t + 1 - a for a in base.coords(v)))
        if v < partner:
            for _ in range(q):
                g.add_edge(v, partner, label)
                label += 1
    return base, g


def double_bundle(n: int) -> tuple[Complete, DemandGraph]:
    """Two disjoint (n-2)-bundles: 2n-4 demand edges, one more than the
    realizable edge maximum."""
    if n < 4:
        raise BadParams(f"n={n} must be at least 4")
    g = DemandGraph(n)
    label = 1
    for _ in range(n - 2):
        g.add_edge(1, 2, label)
        label += 1
    for _ in range(n - 2):
        g.add_edge(3, 4, label)
        label += 1
    return Complete(n), g


_FAMILIES = {
    "one_factor_bundles": (one_factor_bundles, 2),
    "antipodal": (antipodal, 3),
    "double_bundle": (double_bundle, 1),
}


def generate(kind: str, *params: int) -> tuple[BaseSpec, DemandGraph]:
    """Dispatch to a named instance family; raises BadParams for unknown
    kinds or wrong arity."""
    if kind not in _FAMILIES:
        raise BadParams(f"unknown family {kind!r}; choose from {sorted(_FAMILIES)}")
    fn, arity = _FAMILIES[kind]
    if len(params) != arity:
        raise BadParams(f"{kind} takes {arity} parameters, got {len(params)}")
    return fn(*params)

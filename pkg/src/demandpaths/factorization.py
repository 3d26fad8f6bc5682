"""Decomposition machinery: Eulerian orientations, 2-factor extraction via
the bipartite double cover, maximal 2-matchings, and balanced lifting
colorings of 2-matchings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import DemandGraph
from .errors import (
    ColoringFailed,
    InvalidTarget,
    NotEvenRegular,
    NotRegular,
    OddDegree,
    PinsAdjacent,
    SeedNotTwoMatching,
)

# ---------------------------------------------------------------------------
# Orientations and 2-factor extraction
# ---------------------------------------------------------------------------


def eulerian_orientation(g: DemandGraph) -> dict[int, tuple[int, int]]:
    """Orient every edge so in-degree equals out-degree at each vertex.

    Works per connected component with a stack-based Hierholzer circuit;
    every component of an even-degree multigraph has one.
    """
    for v in g.vertices:
        if g.degree(v) % 2 != 0:
            raise OddDegree(f"vertex {v} has odd degree {g.degree(v)}")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))
    ptr = {v: 0 for v in g.vertices}
    used: set[int] = set()
    orientation: dict[int, tuple[int, int]] = {}
    for start in g.vertices:
        if ptr[start] >= len(adj[start]):
            continue
        stack = [start]
        trail: list[int] = []
        while stack:
            v = stack[-1]
            lst = adj[v]
            i = ptr[v]
            while i < len(lst) and lst[i][0] in used:
                i += 1
            ptr[v] = i
            if i < len(lst):
                eid, w = lst[i]
                used.add(eid)
                stack.append(w)
            else:
                trail.append(stack.pop())
        trail.reverse()
        walk_used: set[int] = set()
        for a, b in zip(trail, trail[1:]):
            for eid in g.edges_between(a, b):
                if eid not in orientation and eid not in walk_used:
                    orientation[eid] = (a, b)
                    walk_used.add(eid)
                    break
    return orientation


@dataclass
class BipartiteCover:
    """Bipartite multigraph on two copies of a vertex set; one edge per
    oriented demand edge, tail on the left side, head on the right."""

    lefts: list[int]
    rights: list[int]
    edges: list[tuple[int, int, int]]  # (left, right, eid)


def bipartite_double_cover(
    g: DemandGraph, orientation: dict[int, tuple[int, int]]
) -> BipartiteCover:
    if set(orientation) != set(g.edges):
        raise InvalidTarget("orientation does not cover the edge set")
    vs = g.vertices
    edges = [(tail, head, eid) for eid, (tail, head) in sorted(orientation.items())]
    return BipartiteCover(vs, list(vs), edges)


def perfect_matching_regular_bipartite(cover: BipartiteCover) -> set[int]:
    """Perfect matching of a regular bipartite multigraph (Hopcroft-Karp).

    Returns the matched edge ids; a Δ-regular bipartite multigraph always
    has a perfect matching.
    """
    ldeg = {v: 0 for v in cover.lefts}
    rdeg = {v: 0 for v in cover.rights}
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in cover.lefts}
    for left, right, eid in cover.edges:
        ldeg[left] += 1
        rdeg[right] += 1
        adj[left].append((right, eid))
    degrees = set(ldeg.values()) | set(rdeg.values())
    if len(degrees) != 1:
        raise NotRegular(f"degrees {sorted(degrees)} are not uniform")
    if degrees == {0}:
        return set()

    INF = float("inf")
    match_l: dict[int, tuple[int, int] | None] = {v: None for v in cover.lefts}
    match_r: dict[int, tuple[int, int] | None] = {v: None for v in cover.rights}
    dist: dict[int, float] = {}

    def bfs() -> bool:
        queue = []
        for v in cover.lefts:
            if match_l[v] is None:
                dist[v] = 0
                queue.append(v)
            else:
                dist[v] = INF
        found = False
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for r, _eid in adj[v]:
                mate = match_r[r]
                if mate is None:
                    found = True
                elif dist[mate[0]] == INF:
                    dist[mate[0]] = dist[v] + 1
                    queue.append(mate[0])
        return found

    def dfs(v: int) -> bool:
        for r, eid in adj[v]:
            mate = match_r[r]
            if mate is None or (dist[mate[0]] == dist[v] + 1 and dfs(mate[0])):
                match_l[v] = (r, eid)
                match_r[r] = (v, eid)
                return True
        dist[v] = INF
        return False

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(cover.lefts) + 100))
    try:
        while bfs():
            for v in cover.lefts:
                if match_l[v] is None:
                    dfs(v)
    finally:
        sys.setrecursionlimit(old_limit)
    if any(m is None for m in match_l.values()):
        raise NotRegular("no perfect matching found; input was not regular")
    return {m[1] for m in match_l.values() if m is not None}


def peel_two_factors(g: DemandGraph, count: int) -> list[set[int]]:
    """Extract ``count`` pairwise disjoint spanning 2-regular factors,
    re-orienting the residual graph each round."""
    work = g.copy()
    factors: list[set[int]] = []
    for _ in range(count):
        orientation = eulerian_orientation(work)
        cover = bipartite_double_cover(work, orientation)
        factor = perfect_matching_regular_bipartite(cover)
        factors.append(factor)
        for eid in factor:
            work.remove_edge(eid)
    return factors


def two_factorization(g: DemandGraph) -> list[set[int]]:
    """Split a 2k-regular multigraph into k spanning 2-regular factors."""
    degs = {g.degree(v) for v in g.vertices}
    if len(degs) > 1 or (degs and next(iter(degs)) % 2 != 0):
        raise NotEvenRegular(f"degrees {sorted(degs)} are not uniformly even")
    if not degs or degs == {0}:
        return []
    k = next(iter(degs)) // 2
    return peel_two_factors(g, k)


def extend_to_maximal_two_matching(g: DemandGraph, seed: set[int]) -> set[int]:
    """Grow a 2-matching until no edge of g can be added without pushing
    some degree above 2 (maximal, not maximum)."""
    deg = {v: 0 for v in g.vertices}
    result: set[int] = set()
    for eid in sorted(seed):
        e = g.edges.get(eid)
        if e is None:
            raise SeedNotTwoMatching(f"seed edge {eid} not in graph")
        deg[e.u] += 1
        deg[e.v] += 1
        result.add(eid)
    if any(d > 2 for d in deg.values()):
        raise SeedNotTwoMatching("seed is not a 2-matching")
    for eid in sorted(g.edges):
        if eid in result:
            continue
        e = g.edges[eid]
        if deg[e.u] < 2 and deg[e.v] < 2:
            result.add(eid)
            deg[e.u] += 1
            deg[e.v] += 1
    return result


# ---------------------------------------------------------------------------
# Balanced lifting colorings
# ---------------------------------------------------------------------------

_COLORS = (1, 2, 3)
_DP_LIMIT = 16


def _third(a: int, b: int) -> int:
    return 6 - a - b


@dataclass
class LiftingColoring:
    """3-coloring of the vertices of g and the edges of a 2-matching F:
    each F-edge avoids its endpoints' colors, incident F-edges differ,
    vertex color classes are balanced within 2, and the three pinned
    vertices receive colors 1, 2, 3."""

    vertex_color: dict[int, int]
    edge_color: dict[int, int]
    pinned: tuple[int, int, int]

    def class_sizes(self) -> tuple[int, int, int]:
        sizes = [0, 0, 0]
        for c in self.vertex_color.values():
            sizes[c - 1] += 1
        return tuple(sizes)  # type: ignore[return-value]


@dataclass
class _Comp:
    kind: str  # 'single' | 'path' | 'cycle'
    vertices: list[int]
    eids: list[int]  # eids[i] joins vertices[i] and vertices[i+1] (cyclic)


def _split_components(g: DemandGraph, f_edges: set[int]) -> list[_Comp]:
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for eid in sorted(f_edges):
        e = g.edges.get(eid)
        if e is None:
            raise SeedNotTwoMatching(f"edge {eid} not in graph")
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))
    if any(len(lst) > 2 for lst in adj.values()):
        raise SeedNotTwoMatching("edge set is not a 2-matching")
    comps: list[_Comp] = []
    seen: set[int] = set()

    def walk(start: int) -> _Comp:
        verts = [start]
        eids: list[int] = []
        used: set[int] = set()
        v = start
        while True:
            nxt = None
            for eid, w in adj[v]:
                if eid not in used:
                    nxt = (eid, w)
                    break
            if nxt is None:
                return _Comp("path", verts, eids)
            used.add(nxt[0])
            eids.append(nxt[0])
            v = nxt[1]
            if v == start:
                return _Comp("cycle", verts, eids)
            verts.append(v)

    for v in g.vertices:
        if v in seen:
            continue
        if not adj[v]:
            seen.add(v)
            comps.append(_Comp("single", [v], []))
        elif len(adj[v]) == 1:
            comp = walk(v)
            seen.update(comp.vertices)
            comps.append(comp)
    for v in g.vertices:
        if v not in seen and adj[v]:
            comp = walk(v)
            seen.update(comp.vertices)
            comps.append(comp)
    return comps


def _run_parities(
    kind: str, pattern: tuple[int, ...]
) -> list[int | None] | None:
    """Required length parity per run (1 odd, 0 even, None free), or None
    if the pattern itself is invalid.

    An interior run of color x sits between two boundary edges forced to
    third(x, neighbor); its internal edges alternate over the two non-x
    colors, which pins the length parity: equal flanks need even length,
    distinct flanks odd length.
    """
    k = len(pattern)
    if kind == "cycle" and k == 1:
        return [0]  # monochrome alternation closes only on even cycles
    for i in range(k - 1):
        if pattern[i] == pattern[i + 1]:
            return None
    if kind == "cycle" and pattern[0] == pattern[-1]:
        return None
    out: list[int | None] = []
    for i in range(k):
        if kind == "cycle":
            left = _third(pattern[i - 1], pattern[i])
            right = _third(pattern[i], pattern[(i + 1) % k])
        else:
            left = _third(pattern[i - 1], pattern[i]) if i > 0 else None
            right = _third(pattern[i], pattern[i + 1]) if i < k - 1 else None
        if left is None or right is None:
            out.append(None)
        else:
            out.append(0 if left == right else 1)
    return out


def _solve_lengths(
    pattern: tuple[int, ...],
    parities: list[int | None],
    color_sums: tuple[int, int, int],
    pin_runs: list[tuple[int, int]] = (),
    joint: tuple[int, int] | None = None,
) -> list[int] | None:
    """Assign a length >= 1 to every run so that each color hits its
    prescribed total, runs meet their length-parity requirements, and the
    run designated for each pin covers the pin's position.

    ``pin_runs`` lists (run index, position) pairs in increasing position
    order; ``joint`` marks a (first, last) run pair that wraps into one
    run of a cycle, whose parity requirement applies to the joint length.
    """
    k = len(pattern)
    mins = [1] * k
    for i, p in enumerate(parities):
        if p == 0 and (joint is None or i not in joint):
            mins[i] = 2

    # suffix aggregates per color: (min sum, parity sum, #free-parity runs)
    col_tail = [[(0, 0, 0)] * 3 for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        row = list(col_tail[i + 1])
        c = pattern[i] - 1
        m, p, fr = row[c]
        par = parities[i]
        if joint is not None and i in joint:
            par = None  # joint parity handled when the pair completes
        row[c] = (
            m + mins[i],
            p + (par if par is not None else 0),
            fr + (1 if par is None else 0),
        )
        col_tail[i] = row

    pin_of_run = {ri: pos for ri, pos in pin_runs}
    next_pin_at = [None] * (k + 1)
    nxt: tuple[int, int] | None = None
    for i in range(k - 1, -1, -1):
        if i in pin_of_run:
            nxt = (i, pin_of_run[i])
        next_pin_at[i] = nxt

    col_left = [color_sums[0], color_sums[1], color_sums[2]]
    lengths = [0] * k

    def rec(i: int, prefix: int) -> bool:
        if i == k:
            return all(x == 0 for x in col_left)
        for c in range(3):
            m, p, fr = col_tail[i][c]
            if col_left[c] < m:
                return False
            if fr == 0 and (col_left[c] - p) % 2 != 0:
                return False
        col = pattern[i] - 1
        lo = mins[i]
        hi = col_left[col] - col_tail[i + 1][pattern[i] - 1][0]
        if i in pin_of_run:
            q = pin_of_run[i]
            if prefix > q:
                return False
            lo = max(lo, q - prefix + 1)
        upcoming = next_pin_at[i + 1]
        if upcoming is not None:
            j, q = upcoming
            slack = sum(mins[t] for t in range(i + 1, j))
            hi = min(hi, q - slack - prefix)
        par = parities[i]
        if joint is not None and i == joint[1]:
            want = parities[joint[0]]
            if want is not None:
                par = (want - lengths[joint[0]]) % 2
        elif joint is not None and i == joint[0]:
            par = None  # constrained via the partner run
        start = lo
        if par is not None and start % 2 != par:
            start += 1
        step = 1 if par is None else 2
        for val in range(start, hi + 1, step):
            lengths[i] = val
            col_left[col] -= val
            if rec(i + 1, prefix + val):
                return True
            col_left[col] += val
        return False

    if rec(0, 0):
        return list(lengths)
    return None


def _edge_colors_for(kind: str, vcolors: list[int]) -> list[int] | None:
    """Edge colors consistent with the given vertex colors: each edge
    avoids its endpoints' colors and differs from its neighbors.  Small
    forward DP; returns None when the vertex coloring admits none."""
    s = len(vcolors)
    n_edges = s - 1 if kind == "path" else s
    if n_edges <= 0:
        return []

    def allowed(i: int) -> list[int]:
        a = vcolors[i]
        b = vcolors[(i + 1) % s]
        return [c for c in _COLORS if c != a and c != b]

    first_options = allowed(0)
    for first in first_options:
        prev_layer: dict[int, int | None] = {first: None}
        layers = [prev_layer]
        ok = True
        for i in range(1, n_edges):
            cur: dict[int, int | None] = {}
            last_edge = kind == "cycle" and i == n_edges - 1
            for c in allowed(i):
                if last_edge and c == first:
                    continue
                for pe in layers[-1]:
                    if pe != c:
                        cur[c] = pe
                        break
            if not cur:
                ok = False
                break
            layers.append(cur)
        if not ok:
            continue
        out = [0] * n_edges
        pick = next(iter(layers[-1]))
        for i in range(n_edges - 1, -1, -1):
            out[i] = pick
            pick = layers[i][pick]  # type: ignore[assignment]
        return out
    return None


def _expand_runs(
    kind: str, pattern: tuple[int, ...], lengths: list[int]
) -> tuple[list[int], list[int]] | None:
    vcolors: list[int] = []
    for col, ln in zip(pattern, lengths):
        vcolors.extend([col] * ln)
    ecolors = _edge_colors_for(kind, vcolors)
    if ecolors is None:
        return None
    return vcolors, ecolors


def _pattern_candidates(
    kind: str, used_colors: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """All run color patterns of length <= 4 over the given colors with
    distinct adjacent entries (cyclically for cycles) covering them all."""
    out: list[tuple[int, ...]] = []
    for k in range(1, 5):
        for pattern in itertools.product(used_colors, repeat=k):
            if set(pattern) != set(used_colors):
                continue
            if any(pattern[i] == pattern[i + 1] for i in range(k - 1)):
                continue
            if kind == "cycle" and k > 1 and pattern[0] == pattern[-1]:
                continue
            out.append(pattern)
    return out


def _solve_unpinned(
    kind: str, size: int, target: tuple[int, int, int]
) -> tuple[list[int], list[int]] | None:
    used = tuple(c for c in _COLORS if target[c - 1] > 0)
    if not used:
        return None
    for pattern in _pattern_candidates(kind, used):
        parities = _run_parities(kind, pattern)
        if parities is None:
            continue
        lengths = _solve_lengths(pattern, parities, target)
        if lengths is not None:
            built = _expand_runs(kind, pattern, lengths)
            if built is not None:
                return built
    return None


def _gap_fillers(prev: int, nxt: int | None, max_runs: int) -> list[tuple[int, ...]]:
    """Run color sequences usable between two designated runs: adjacent
    colors distinct, first differing from ``prev``, last from ``nxt``."""
    out: list[tuple[int, ...]] = []
    if nxt is None or prev != nxt:
        out.append(())
    for ln in range(1, max_runs + 1):
        for pat in itertools.product(_COLORS, repeat=ln):
            if pat[0] == prev or (nxt is not None and pat[-1] == nxt):
                continue
            if any(pat[i] == pat[i + 1] for i in range(ln - 1)):
                continue
            out.append(pat)
    return out


def _pin_patterns(
    kind: str, pin_list: list[tuple[int, int]]
) -> list[tuple[tuple[int, ...], list[int], bool]]:
    """Global run-color patterns for a pinned component: one designated
    run per pin (covering the pin's position), separated by 0..2 filler
    runs.  Returns (pattern, designated run indices, wrap-joint flag):
    a cycle pattern ending with an extra run of the first pin's color is
    flagged as wrapping into the first run."""
    colors = [c for _, c in pin_list]
    p = len(colors)
    out: list[tuple[tuple[int, ...], list[int], bool]] = []
    max_fill = 3 if p == 1 else 2
    gap_opts = []
    for i in range(p):
        nxt = colors[(i + 1) % p] if (kind == "cycle" or i + 1 < p) else None
        gap_opts.append(_gap_fillers(colors[i], nxt, max_fill))
    if kind == "cycle" and p == 1:
        out.append(((colors[0],), [0], False))
    lead_opts = (
        [()] if kind == "cycle" else _gap_fillers(0, colors[0], 2)
    )
    for lead in lead_opts:
        for fills in itertools.product(*gap_opts):
            pattern: list[int] = list(lead)
            designated: list[int] = []
            for i in range(p):
                designated.append(len(pattern))
                pattern.append(colors[i])
                pattern.extend(fills[i])
            if kind == "cycle":
                if len(pattern) > 1 and pattern[0] == pattern[-1]:
                    continue
                out.append((tuple(pattern), designated, False))
                # wrap variant: trailing run of the first color joins run 0
                if len(pattern) >= 2 and pattern[-1] != colors[0]:
                    out.append(
                        (tuple(pattern) + (colors[0],), designated, True)
                    )
            else:
                out.append((tuple(pattern), designated, False))
    seen: set[tuple] = set()
    uniq = []
    for item in out:
        key = (item[0], tuple(item[1]), item[2])
        if key not in seen:
            seen.add(key)
            uniq.append(item)
    uniq.sort(key=lambda it: len(it[0]))
    return uniq


def _run_parities_joint(
    pattern: tuple[int, ...], joint: bool
) -> list[int | None] | None:
    """Cycle run parities where the last run wraps into the first: the two
    pieces form one run whose joint parity sits on the first index."""
    if not joint:
        return _run_parities("cycle", pattern)
    k = len(pattern)
    if k < 3 or pattern[0] != pattern[-1]:
        return None
    merged = pattern[:-1]
    pars = _run_parities("cycle", merged)
    if pars is None:
        return None
    return pars + [pars[0]]


def _solve_pinned(
    kind: str,
    size: int,
    pin_pos: dict[int, int],
    target: tuple[int, int, int],
) -> tuple[list[int], list[int]] | None:
    """Template construction for a pinned path or cycle: choose a global
    run pattern with one designated run covering each pin position and
    solve the run lengths against the target color counts."""
    pin_list = sorted(pin_pos.items())
    for pattern, designated, joint_flag in _pin_patterns(kind, pin_list):
        parities = _run_parities_joint(pattern, joint_flag) if kind == "cycle" \
            else _run_parities(kind, pattern)
        if parities is None:
            continue
        pin_runs = [
            (designated[i], pin_list[i][0]) for i in range(len(pin_list))
        ]
        joint = (0, len(pattern) - 1) if joint_flag else None
        lengths = _solve_lengths(pattern, parities, target, pin_runs, joint)
        if lengths is not None:
            built = _expand_runs(kind, pattern, lengths)
            if built is not None:
                return built
    return None


def _component_dp_menu(
    kind: str,
    size: int,
    allowed: list[tuple[int, ...]],
) -> dict[tuple[int, int, int], tuple[list[int], list[int]]]:
    """Exact enumeration of the feasible colorings of one small path or
    cycle: returns every achievable color-count vector together with one
    witnessing assignment."""
    menu: dict[tuple[int, int, int], tuple[list[int], list[int]]] = {}
    # state key: (vcolor, prev_edge_color, first_edge_color, n1, n2)
    for c0 in allowed[0]:
        n1 = 1 if c0 == 1 else 0
        n2 = 1 if c0 == 2 else 0
        layers: dict[tuple, tuple | None] = {(c0, 0, 0, n1, n2): None}
        trace: list[dict[tuple, tuple | None]] = [layers]
        for pos in range(1, size):
            nxt: dict[tuple, tuple | None] = {}
            for key in trace[-1]:
                vc, pe, fe, k1, k2 = key
                for c in allowed[pos]:
                    for ec in _COLORS:
                        if ec == vc or ec == c or ec == pe:
                            continue
                        nfe = ec if (kind == "cycle" and pos == 1) else fe
                        m1 = k1 + (1 if c == 1 else 0)
                        m2 = k2 + (1 if c == 2 else 0)
                        nkey = (c, ec, nfe if kind == "cycle" else 0, m1, m2)
                        if nkey not in nxt:
                            nxt[nkey] = key
            trace.append(nxt)
        for key in trace[-1]:
            vc, pe, fe, k1, k2 = key
            closing = None
            if kind == "cycle":
                for ec in _COLORS:
                    if ec in (vc, c0, pe) or ec == fe:
                        continue
                    closing = ec
                    break
                if closing is None:
                    continue
            vec = (k1, k2, size - k1 - k2)
            if vec in menu:
                continue
            vcolors = [0] * size
            ecolors_rev: list[int] = []
            cur: tuple | None = key
            pos = size - 1
            while cur is not None:
                vcolors[pos] = cur[0]
                if pos > 0:
                    ecolors_rev.append(cur[1])
                cur = trace[pos][cur]
                pos -= 1
            ecolors = list(reversed(ecolors_rev))
            if kind == "cycle" and closing is not None:
                ecolors.append(closing)
            menu[vec] = (vcolors, ecolors)
    return menu


_MENU_WINDOW = 8


def _lattice_menu(
    kind: str, size: int, pin_colors: list[int]
) -> list[tuple[int, int, int]]:
    """Candidate count vectors for a large component, near the even split.

    Cycles obey a parity law: every class of an even cycle is even, every
    class of an odd cycle is odd (hence positive).  Paths take any
    composition.  Pins force their colors to appear.
    """
    mins = [0, 0, 0]
    for c in pin_colors:
        mins[c - 1] = max(mins[c - 1], 1)
    out: list[tuple[int, int, int]] = []
    lo = max(0, size // 3 - _MENU_WINDOW)
    hi = min(size, size // 3 + _MENU_WINDOW + 2)
    for a in range(lo, hi + 1):
        for b in range(lo, hi + 1):
            c = size - a - b
            if not lo <= c <= hi:
                continue
            vec = (a, b, c)
            if any(vec[i] < mins[i] for i in range(3)):
                continue
            if kind == "cycle":
                want = size % 2
                if any(v % 2 != want for v in vec):
                    continue
                if want == 1 and min(vec) < 1:
                    continue
            out.append(vec)
    return out


@dataclass
class _CompChoice:
    comp: _Comp
    pin_positions: dict[int, int]
    menu: dict[tuple[int, int, int], tuple[list[int], list[int]] | None]
    vectors: list[tuple[int, int, int]]


def balanced_lifting_coloring(
    g: DemandGraph, f_edges: set[int], pins: tuple[int, int, int]
) -> LiftingColoring:
    """Balanced lifting coloring of the 2-matching ``f_edges`` with the
    three pinned vertices receiving colors 1, 2, 3.

    Each component exposes the count vectors it can realize (full
    enumeration for small components, near-balanced lattice plus template
    construction for large ones); a memoized search assigns one vector per
    component so the three class sizes end within 2 of each other.
    """
    w1, w2, w3 = pins
    if len({w1, w2, w3}) != 3:
        raise InvalidTarget("pins must be three distinct vertices")
    for w in pins:
        if not g.has_vertex(w):
            raise InvalidTarget(f"pin {w} not a vertex")
    pin_color = {w1: 1, w2: 2, w3: 3}
    for eid in f_edges:
        e = g.edges.get(eid)
        if e is None:
            raise SeedNotTwoMatching(f"edge {eid} not in graph")
        if e.u in pin_color and e.v in pin_color:
            raise PinsAdjacent(f"pins {e.u} and {e.v} joined by edge {eid}")

    comps = _split_components(g, f_edges)
    choices: list[_CompChoice] = []
    for comp in comps:
        size = len(comp.vertices)
        pin_positions = {
            i: pin_color[v] for i, v in enumerate(comp.vertices) if v in pin_color
        }
        if comp.kind == "cycle" and pin_positions:
            shift = min(pin_positions)
            comp = _Comp(
                comp.kind,
                comp.vertices[shift:] + comp.vertices[:shift],
                comp.eids[shift:] + comp.eids[:shift],
            )
            pin_positions = {
                i: pin_color[v]
                for i, v in enumerate(comp.vertices)
                if v in pin_color
            }
        if comp.kind == "single":
            v = comp.vertices[0]
            opts = [pin_color[v]] if v in pin_color else [1, 2, 3]
            menu = {
                tuple(1 if i == c - 1 else 0 for i in range(3)): ([c], [])
                for c in opts
            }
        elif size <= _DP_LIMIT:
            allowed = [
                (pin_positions[i],) if i in pin_positions else _COLORS
                for i in range(size)
            ]
            menu = dict(_component_dp_menu(comp.kind, size, allowed))
        else:
            menu = {
                vec: None
                for vec in _lattice_menu(
                    comp.kind, size, list(pin_positions.values())
                )
            }
        if not menu:
            raise ColoringFailed(
                f"{comp.kind} component of size {size} admits no coloring"
            )
        choices.append(_CompChoice(comp, pin_positions, menu, sorted(menu)))

    # fully constrained components first, then large ones: better pruning
    choices.sort(
        key=lambda ch: (len(ch.vectors) > 1, -len(ch.comp.vertices),
                        ch.comp.vertices[0])
    )
    suffix_size = [0] * (len(choices) + 1)
    for i in range(len(choices) - 1, -1, -1):
        suffix_size[i] = suffix_size[i + 1] + len(choices[i].comp.vertices)

    picked: list[tuple[int, int, int]] = []
    dead: set[tuple[int, int, int]] = set()

    def dfs(i: int, t1: int, t2: int, t3: int) -> bool:
        if i == len(choices):
            return max(t1, t2, t3) - min(t1, t2, t3) <= 2
        rem = suffix_size[i]
        if max(t1, t2, t3) - min(t1, t2, t3) > 2 + rem:
            return False
        key = (i, t1 - t2, t1 - t3)
        if key in dead:
            return False
        ch = choices[i]
        ranked = sorted(
            ch.vectors,
            key=lambda v: (
                max(t1 + v[0], t2 + v[1], t3 + v[2])
                - min(t1 + v[0], t2 + v[1], t3 + v[2]),
                v,
            ),
        )
        for vec in ranked:
            if ch.menu[vec] is None:
                built = _build_large(ch, vec)
                if built is None:
                    continue
                ch.menu[vec] = built
            picked.append(vec)
            if dfs(i + 1, t1 + vec[0], t2 + vec[1], t3 + vec[2]):
                return True
            picked.pop()
        dead.add(key)
        return False

    def _build_large(
        ch: _CompChoice, vec: tuple[int, int, int]
    ) -> tuple[list[int], list[int]] | None:
        size = len(ch.comp.vertices)
        if ch.pin_positions:
            return _solve_pinned(ch.comp.kind, size, ch.pin_positions, vec)
        return _solve_unpinned(ch.comp.kind, size, vec)

    if not dfs(0, 0, 0, 0):
        raise ColoringFailed("no balanced assignment over component menus")

    vertex_color: dict[int, int] = {}
    edge_color: dict[int, int] = {}
    for ch, vec in zip(choices, picked):
        assign = ch.menu[vec]
        assert assign is not None
        vcolors, ecolors = assign
        for v, c in zip(ch.comp.vertices, vcolors):
            vertex_color[v] = c
        for eid, c in zip(ch.comp.eids, ecolors):
            edge_color[eid] = c

    totals = [0, 0, 0]
    for c in vertex_color.values():
        totals[c - 1] += 1
    if max(totals) - min(totals) > 2:
        raise ColoringFailed(f"class sizes {totals} are not balanced")
    coloring = LiftingColoring(vertex_color, edge_color, pins)
    _check_coloring(g, f_edges, coloring)
    return coloring


def _check_coloring(
    g: DemandGraph, f_edges: set[int], coloring: LiftingColoring
) -> None:
    for eid in f_edges:
        e = g.edges[eid]
        c = coloring.edge_color[eid]
        if c == coloring.vertex_color[e.u] or c == coloring.vertex_color[e.v]:
            raise ColoringFailed(f"edge {eid} shares a color with an endpoint")
    at_vertex: dict[int, set[int]] = {}
    for eid in f_edges:
        e = g.edges[eid]
        for v in (e.u, e.v):
            cs = at_vertex.setdefault(v, set())
            c = coloring.edge_color[eid]
            if c in cs:
                raise ColoringFailed(f"incident edges at {v} share color {c}")
            cs.add(c)
    for i, w in enumerate(coloring.pinned, start=1):
        if coloring.vertex_color[w] != i:
            raise ColoringFailed(f"pin {w} did not receive color {i}")

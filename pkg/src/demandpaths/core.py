"""Loopless labeled multigraphs, base graphs, and the lifting primitives.

A demand graph is a loopless multigraph whose edges carry labels.  Every
edge created by splitting (lifting) inherits the label of its ancestor, so
the edges of one label always form a trail between the label's original
endpoint pair.  That trail is what eventually turns into one routed path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import (
    DegreeTooHigh,
    InvalidTarget,
    MissingEdge,
    OutOfRange,
    TargetTooSmall,
)

# Labels at or above this value mark regularization padding; they are
# routed like any other demand but stripped from returned realizations.
PADDING_LABEL_BASE = 1 << 32


def is_padding(label: int) -> bool:
    return label >= PADDING_LABEL_BASE


@dataclass(frozen=True)
class Complete:
    """Complete base graph K_n on vertices 1..n."""

    n: int

    @property
    def num_vertices(self) -> int:
        return self.n

    def is_edge(self, u: int, v: int) -> bool:
        return u != v and 1 <= u <= self.n and 1 <= v <= self.n

    def neighbors(self, v: int) -> Iterator[int]:
        return (u for u in range(1, self.n + 1) if u != v)


@dataclass(frozen=True)
class Grid:
    """Complete grid K_t^d: vertices are d-tuples over 1..t, adjacent iff
    they differ in exactly one coordinate.

    Vertex ids are row-major: index = 1 + sum((a_j - 1) * t**(j-1)).
    """

    t: int
    d: int

    @property
    def num_vertices(self) -> int:
        return self.t**self.d

    def coords(self, v: int) -> tuple[int, ...]:
        if not 1 <= v <= self.num_vertices:
            raise OutOfRange(f"vertex {v} outside 1..{self.num_vertices}")
        rest = v - 1
        out = []
        for _ in range(self.d):
            out.append(rest % self.t + 1)
            rest //= self.t
        return tuple(out)

    def index(self, coords: Iterable[int]) -> int:
        coords = tuple(coords)
        if len(coords) != self.d or any(not 1 <= a <= self.t for a in coords):
            raise OutOfRange(f"bad coordinates {coords} for K_{self.t}^{self.d}")
        v = 0
        for a in reversed(coords):
            v = v * self.t + (a - 1)
        return v + 1

    def is_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        cu, cv = self.coords(u), self.coords(v)
        return sum(1 for a, b in zip(cu, cv) if a != b) == 1

    def neighbors(self, v: int) -> Iterator[int]:
        cv = list(self.coords(v))
        for j in range(self.d):
            old = cv[j]
            for a in range(1, self.t + 1):
                if a != old:
                    cv[j] = a
                    yield self.index(cv)
            cv[j] = old


@dataclass(frozen=True)
class CompleteOver:
    """Complete graph over an explicit vertex set; internal helper for
    verifying subproblem realizations on non-contiguous vertex ids."""

    vertex_set: frozenset[int]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_set)

    def is_edge(self, u: int, v: int) -> bool:
        return u != v and u in self.vertex_set and v in self.vertex_set

    def neighbors(self, v: int) -> Iterator[int]:
        return (u for u in sorted(self.vertex_set) if u != v)


BaseSpec = Complete | Grid


class Edge(NamedTuple):
    eid: int
    label: int
    u: int
    v: int

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class LiftRecord:
    """One lifting: edge ``parent`` (u,v) replaced by ``left`` (u,w) and
    ``right`` (w,v)."""

    parent: int
    left: int
    right: int
    u: int
    w: int
    v: int
    label: int


@dataclass
class DegreeStats:
    delta: int
    degree: dict[int, int]
    gamma: dict[int, int]
    multiplicity: dict[int, int]


@dataclass
class Realization:
    """Edge-disjoint paths in a base graph, one per demand label."""

    base: BaseSpec
    paths: dict[int, list[int]]


class DemandGraph:
    """Mutable loopless labeled multigraph over an explicit vertex set.

    All rewriting operations mutate in place; a graph is owned by one
    computation at a time and copied at engine boundaries.
    """

    def __init__(self, vertices: int | Iterable[int]):
        if isinstance(vertices, int):
            vs = list(range(1, vertices + 1))
        else:
            vs = sorted(set(vertices))
        self._vertices: list[int] = vs
        self._vset: set[int] = set(vs)
        self.edges: dict[int, Edge] = {}
        self._adj: dict[int, dict[int, set[int]]] = {v: {} for v in vs}
        self._deg: dict[int, int] = {v: 0 for v in vs}
        self._next_eid = 1
        self._next_padding = PADDING_LABEL_BASE
        self.label_endpoints: dict[int, tuple[int, int]] = {}
        self.lift_log: list[LiftRecord] = []

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def vertices(self) -> list[int]:
        return list(self._vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vset

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self._deg[v]

    def gamma(self, v: int) -> int:
        return len(self._adj[v])

    def multiplicity(self, v: int) -> int:
        return self._deg[v] - len(self._adj[v])

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def edges_between(self, u: int, v: int) -> list[int]:
        return sorted(self._adj[u].get(v, ()))

    def max_degree(self) -> int:
        return max(self._deg.values(), default=0)

    def degree_stats(self) -> DegreeStats:
        deg = dict(self._deg)
        gamma = {v: len(self._adj[v]) for v in self._vertices}
        mult = {v: deg[v] - gamma[v] for v in self._vertices}
        return DegreeStats(max(deg.values(), default=0), deg, gamma, mult)

    def incident_edges(self, v: int) -> list[int]:
        out: list[int] = []
        for eids in self._adj[v].values():
            out.extend(eids)
        return sorted(out)

    # -- construction ----------------------------------------------------

    def add_edge(self, u: int, v: int, label: int | None = None,
                 eid: int | None = None) -> int:
        if u == v:
            raise InvalidTarget(f"loop at vertex {u}")
        if u not in self._vset or v not in self._vset:
            raise OutOfRange(f"edge endpoints {u},{v} outside vertex set")
        if label is None:
            label = self._next_padding
            self._next_padding += 1
        if eid is None:
            eid = self._next_eid
        elif eid in self.edges:
            raise InvalidTarget(f"edge id {eid} already in use")
        self._next_eid = max(self._next_eid, eid + 1)
        self.edges[eid] = Edge(eid, label, u, v)
        self._adj[u].setdefault(v, set()).add(eid)
        self._adj[v].setdefault(u, set()).add(eid)
        self._deg[u] += 1
        self._deg[v] += 1
        self.label_endpoints.setdefault(label, (u, v))
        return eid

    def remove_edge(self, eid: int) -> Edge:
        edge = self.edges.pop(eid, None)
        if edge is None:
            raise MissingEdge(f"edge {eid} not present")
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            self._adj[a][b].discard(eid)
            if not self._adj[a][b]:
                del self._adj[a][b]
            self._deg[a] -= 1
        return edge

    def remove_vertex(self, v: int) -> None:
        if self._deg[v] != 0:
            raise InvalidTarget(f"vertex {v} still has incident edges")
        self._vertices.remove(v)
        self._vset.remove(v)
        del self._adj[v]
        del self._deg[v]

    def copy(self) -> "DemandGraph":
        g = DemandGraph.__new__(DemandGraph)
        g._vertices = list(self._vertices)
        g._vset = set(self._vset)
        g.edges = dict(self.edges)
        g._adj = {v: {u: set(s) for u, s in nb.items()} for v, nb in self._adj.items()}
        g._deg = dict(self._deg)
        g._next_eid = self._next_eid
        g._next_padding = self._next_padding
        g.label_endpoints = dict(self.label_endpoints)
        g.lift_log = list(self.lift_log)
        return g

    # -- rewriting -------------------------------------------------------

    def lift(self, eid: int, w: int) -> tuple[int, int]:
        """Replace edge (u,v) by (u,w),(w,v); returns the two new edge ids.

        Degrees of u and v are unchanged, d(w) grows by exactly 2.
        """
        edge = self.edges.get(eid)
        if edge is None:
            raise MissingEdge(f"edge {eid} not present")
        if w == edge.u or w == edge.v:
            raise InvalidTarget(f"cannot lift edge {eid} to its own endpoint {w}")
        if w not in self._vset:
            raise OutOfRange(f"lift target {w} outside vertex set")
        self.remove_edge(eid)
        left = self.add_edge(edge.u, w, edge.label)
        right = self.add_edge(w, edge.v, edge.label)
        self.lift_log.append(
            LiftRecord(eid, left, right, edge.u, w, edge.v, edge.label)
        )
        return left, right

    def resolve_multiplicities(self, v: int) -> list[int]:
        """Lift parallel-edge excess at v to fresh non-neighbors until
        m(v) = 0; d(v) is unchanged.  Targets are scanned in ascending
        vertex order and each is used at most once, so no new parallel
        edge appears at v.  Returns the lifted (now removed) edge ids.
        """
        need = self.multiplicity(v)
        if need == 0:
            return []
        if self.degree(v) > self.n - 1:
            raise DegreeTooHigh(
                f"d({v})={self.degree(v)} exceeds n-1={self.n - 1}; "
                "not enough non-neighbors"
            )
        targets = iter(
            [w for w in self._vertices if w != v and w not in self._adj[v]]
        )
        lifted: list[int] = []
        for u in sorted(self._adj[v]):
            eids = sorted(self._adj[v][u])
            for eid in eids[1:]:
                w = next(targets, None)
                if w is None:
                    raise DegreeTooHigh(f"ran out of lift targets at vertex {v}")
                self.lift(eid, w)
                lifted.append(eid)
        return lifted

    def regularize_to_even_degree(self, target: int) -> None:
        """Raise every degree to exactly ``target`` (even).

        Deficient vertices are paired with padding edges; a single
        leftover deficient vertex absorbs lifts of existing edges not
        incident to it (lexicographically first such edge each time).
        """
        if target % 2 != 0:
            raise TargetTooSmall(f"target {target} is odd")
        if target < self.max_degree():
            raise TargetTooSmall(
                f"target {target} below max degree {self.max_degree()}"
            )
        deficit = {v: target - self._deg[v] for v in self._vertices}
        while True:
            open_vs = [v for v in self._vertices if deficit[v] > 0]
            if not open_vs:
                break
            if len(open_vs) >= 2:
                open_vs.sort(key=lambda v: (-deficit[v], v))
                a, b = open_vs[0], open_vs[1]
                self.add_edge(a, b)
                deficit[a] -= 1
                deficit[b] -= 1
            else:
                v = open_vs[0]
                eid = next(
                    (
                        e
                        for e in sorted(self.edges)
                        if v not in (self.edges[e].u, self.edges[e].v)
                    ),
                    None,
                )
                if eid is None:
                    raise TargetTooSmall(
                        f"no edge avoiding vertex {v} available for lifting"
                    )
                self.lift(eid, v)
                deficit[v] -= 2

    # -- label trails ----------------------------------------------------

    def label_edges(self, label: int) -> list[Edge]:
        return [e for e in self.edges.values() if e.label == label]


def label_trail_ok(g: DemandGraph, label: int) -> bool:
    """Check that the edges carrying ``label`` form one trail whose ends
    are the label's original endpoints."""
    edges = g.label_edges(label)
    if not edges:
        return False
    endpoints = g.label_endpoints[label]
    deg: dict[int, int] = {}
    for e in edges:
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    odd = sorted(v for v, d in deg.items() if d % 2 == 1)
    if odd != sorted(endpoints):
        return False
    # Connectivity of the label class, walked from one endpoint.
    adj: dict[int, list[Edge]] = {}
    for e in edges:
        adj.setdefault(e.u, []).append(e)
        adj.setdefault(e.v, []).append(e)
    seen_edges: set[int] = set()
    stack = [endpoints[0]]
    seen_v = {endpoints[0]}
    while stack:
        v = stack.pop()
        for e in adj.get(v, ()):
            if e.eid not in seen_edges:
                seen_edges.add(e.eid)
                w = e.other(v)
                if w not in seen_v:
                    seen_v.add(w)
                    stack.append(w)
    return len(seen_edges) == len(edges)


def walk_label_trail(edges: list[Edge], start: int) -> list[int]:
    """Order a trail's edge set into the vertex sequence starting at
    ``start`` (stack-based Hierholzer walk; the input must form one
    connected trail with ``start`` at one end)."""
    adj: dict[int, list[Edge]] = {}
    for e in edges:
        adj.setdefault(e.u, []).append(e)
        adj.setdefault(e.v, []).append(e)
    ptr: dict[int, int] = {v: 0 for v in adj}
    used: set[int] = set()
    stack = [start]
    out: list[int] = []
    while stack:
        v = stack[-1]
        lst = adj.get(v, ())
        i = ptr.get(v, 0)
        while i < len(lst) and lst[i].eid in used:
            i += 1
        ptr[v] = i
        if i < len(lst):
            e = lst[i]
            used.add(e.eid)
            stack.append(e.other(v))
        else:
            out.append(stack.pop())
    if len(used) != len(edges):
        raise MissingEdge("edge set is not a single connected trail")
    out.reverse()
    return out

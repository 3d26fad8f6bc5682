"""Ground-truth checking of realizations, plus walk-to-path shortcutting."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import BaseSpec, DemandGraph, LiftRecord, Realization, is_padding


@dataclass(frozen=True)
class Violation:
    label: int
    kind: str
    detail: str = ""


@dataclass
class VerificationReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)


def shortcut_walk(walk: list[int]) -> list[int]:
    """Erase loops from a walk, producing a simple path with the same
    endpoints whose edges are a subset of the walk's edges."""
    out: list[int] = []
    index: dict[int, int] = {}
    for v in walk:
        if v in index:
            cut = index[v]
            for x in out[cut + 1 :]:
                del index[x]
            del out[cut + 1 :]
        else:
            index[v] = len(out)
            out.append(v)
    return out


def _base_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def verify_eid_paths(
    g: DemandGraph, paths: dict[int, list[int]], base: BaseSpec
) -> VerificationReport:
    """Check per-edge paths (keyed by edge id) against a demand graph.

    Same checks as ``verify_realization`` but for internal engine output
    where several edges may share one label.
    """
    violations: list[Violation] = []
    for eid, edge in g.edges.items():
        if eid not in paths:
            violations.append(Violation(edge.label, "missing-label", f"edge {eid}"))
    for eid in paths:
        if eid not in g.edges:
            violations.append(Violation(0, "extra-label", f"edge {eid}"))
    used: dict[tuple[int, int], int] = {}
    for eid, path in sorted(paths.items()):
        edge = g.edges.get(eid)
        if edge is None:
            continue
        label = edge.label
        if len(path) < 2 or {path[0], path[-1]} != {edge.u, edge.v}:
            violations.append(
                Violation(label, "endpoint-mismatch", f"path {path} for {edge}")
            )
            continue
        if len(set(path)) != len(path):
            violations.append(Violation(label, "repeated-vertex", f"path {path}"))
        for a, b in zip(path, path[1:]):
            if not base.is_edge(a, b):
                violations.append(Violation(label, "non-edge", f"{a}-{b}"))
            else:
                key = _base_edge(a, b)
                used[key] = used.get(key, 0) + 1
    for key, count in sorted(used.items()):
        if count > 1:
            violations.append(
                Violation(0, "edge-reuse", f"base edge {key} used {count} times")
            )
    return VerificationReport(not violations, violations)


def verify_realization(d: DemandGraph, r: Realization) -> VerificationReport:
    """Exhaustively check a realization against its demand graph.

    Every non-padding label must get a simple path in the base graph with
    the demanded endpoints, and no base edge may be used twice overall.
    """
    violations: list[Violation] = []
    wanted: dict[int, tuple[int, int]] = {}
    for edge in d.edges.values():
        if not is_padding(edge.label):
            wanted[edge.label] = (edge.u, edge.v)
    for label in sorted(wanted):
        if label not in r.paths:
            violations.append(Violation(label, "missing-label"))
    for label in sorted(r.paths):
        if label not in wanted:
            violations.append(Violation(label, "extra-label"))
    used: dict[tuple[int, int], int] = {}
    for label, path in sorted(r.paths.items()):
        if label not in wanted:
            continue
        u, v = wanted[label]
        if len(path) < 2 or {path[0], path[-1]} != {u, v}:
            violations.append(
                Violation(label, "endpoint-mismatch", f"want {{{u},{v}}}, got {path}")
            )
            continue
        if len(set(path)) != len(path):
            violations.append(Violation(label, "repeated-vertex", f"path {path}"))
        for a, b in zip(path, path[1:]):
            if not r.base.is_edge(a, b):
                violations.append(Violation(label, "non-edge", f"{a}-{b}"))
            else:
                key = _base_edge(a, b)
                used[key] = used.get(key, 0) + 1
    for key, count in sorted(used.items()):
        if count > 1:
            violations.append(
                Violation(0, "edge-reuse", f"base edge {key} used {count} times")
            )
    return VerificationReport(not violations, violations)


def join_paths(first: list[int], second: list[int], via: int) -> list[int]:
    """Concatenate two paths that share the waypoint ``via`` and shortcut
    the result to a simple path."""
    a = list(first)
    if a[-1] != via:
        a.reverse()
    b = list(second)
    if b[0] != via:
        b.reverse()
    return shortcut_walk(a + b[1:])


def replay_lift_records(
    paths: dict[int, list[int]], records: list[LiftRecord]
) -> dict[int, list[int]]:
    """Reconstruct paths for lifted-away parent edges.

    ``paths`` maps edge ids of surviving (leaf) edges to realized paths.
    Records are replayed backwards: each parent's path is the spliced,
    shortcut join of its two children's paths at the lift vertex.
    """
    out = dict(paths)
    for rec in reversed(records):
        left = out.pop(rec.left)
        right = out.pop(rec.right)
        joined = join_paths(left, right, rec.w)
        if {joined[0], joined[-1]} != {rec.u, rec.v}:
            raise AssertionError(
                f"composed path for edge {rec.parent} has wrong endpoints"
            )
        out[rec.parent] = joined
    return out

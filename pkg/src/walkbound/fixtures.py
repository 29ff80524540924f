"""Small worked graphs with known exact simple-walk hitting times."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .graph import Graph


@dataclass(frozen=True)
class Fixture:
    name: str
    graph: Graph
    target: int
    #: Expected ``H(v, target)`` for every vertex, by vertex id.
    hitting: tuple


def _labelled(name, labels, edges, values):
    ids = {lab: i for i, lab in enumerate(labels)}
    g = Graph(len(labels), tuple((ids[u], ids[v]) for u, v in edges), labels)
    return Fixture(name, g, ids["a"], tuple(Q(values[lab]) for lab in labels))


def diamond_tail() -> Fixture:
    """Triangle 1-2-3 hanging off ``a`` by the edge a-1."""
    return _labelled(
        "diamond-tail",
        ["a", "1", "2", "3"],
        [("a", "1"), ("1", "2"), ("1", "3"), ("2", "3")],
        {"a": 0, "1": 7, "2": 9, "3": 9},
    )


def square_tail() -> Fixture:
    """Four-cycle 1-2-4-3 hanging off ``a`` by the edge a-1."""
    return _labelled(
        "square-tail",
        ["a", "1", "2", "3", "4"],
        [("a", "1"), ("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")],
        {"a": 0, "1": 9, "2": 12, "3": 12, "4": 13},
    )


def k4_tail() -> Fixture:
    """Complete graph on 1..4 hanging off ``a`` by the edge a-1."""
    return _labelled(
        "k4-tail",
        ["a", "1", "2", "3", "4"],
        [("a", "1"), ("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")],
        {"a": 0, "1": 13, "2": 16, "3": 16, "4": 16},
    )


def house() -> Fixture:
    """Five vertices, seven edges, non-integer hitting times."""
    return _labelled(
        "house",
        ["a", "B", "C", "D", "E"],
        [("a", "B"), ("a", "C"), ("B", "C"), ("C", "E"), ("B", "D"), ("B", "E"), ("D", "E")],
        {"a": 0, "B": Q(19, 3), "C": Q(17, 3), "D": 8, "E": Q(23, 3)},
    )


def wheel_like() -> Fixture:
    """Four-cycle-plus-hub with ``a`` on the rim; elevenths everywhere."""
    return _labelled(
        "wheel-like",
        ["a", "B", "C", "D", "E", "F"],
        [("a", "B"), ("a", "C"), ("C", "E"), ("B", "D"), ("D", "E"),
         ("a", "F"), ("B", "F"), ("C", "F"), ("D", "F"), ("E", "F")],
        {"a": 0, "B": Q(60, 11), "C": Q(60, 11), "D": Q(80, 11), "E": Q(80, 11), "F": Q(67, 11)},
    )


_BOWTIE = [("T1", "T2"), ("T1", "M1"), ("T1", "M2"), ("T2", "M3"), ("T2", "M4"),
           ("M1", "M2"), ("M3", "M4"), ("a", "M1"), ("a", "M2"), ("a", "M3"), ("a", "M4")]
_BOWTIE_LABELS = ["a", "T1", "T2", "M1", "M2", "M3", "M4"]


def bowtie() -> Fixture:
    """Two triangles joined at the top, all four bottom vertices tied to ``a``."""
    return _labelled(
        "bowtie", _BOWTIE_LABELS, _BOWTIE,
        {"a": 0, "T1": 6, "T2": 6, "M1": Q(9, 2), "M2": Q(9, 2), "M3": Q(9, 2), "M4": Q(9, 2)},
    )


def bowtie_cut() -> Fixture:
    """:func:`bowtie` without the edge a-M3."""
    return _labelled(
        "bowtie-cut", _BOWTIE_LABELS, [e for e in _BOWTIE if e != ("a", "M3")],
        {"a": 0, "T1": Q(80, 11), "T2": Q(94, 11), "M1": Q(113, 22), "M2": Q(113, 22),
         "M3": Q(95, 11), "M4": Q(74, 11)},
    )


def all_fixtures() -> list:
    return [diamond_tail(), square_tail(), k4_tail(), house(), wheel_like(), bowtie(), bowtie_cut()]


def tail_tree() -> Graph:
    """Tree with 14 vertices where the tail of ``x`` holds 9 edges.

    Labels: ``a`` is the target, ``x`` the marked vertex, ``j`` the
    neighbor of ``x`` towards ``a``.
    """
    edges = [("p", "c"), ("q", "c"), ("q", "r"), ("q", "s"), ("q", "t"), ("c", "x"),
             ("x", "g"), ("g", "h"), ("g", "i"), ("x", "j"), ("j", "k"), ("j", "l"), ("j", "a")]
    labels = []
    for u, v in edges:
        for lab in (u, v):
            if lab not in labels:
                labels.append(lab)
    ids = {lab: i for i, lab in enumerate(labels)}
    return Graph(len(labels), tuple((ids[u], ids[v]) for u, v in edges), labels)


def path(m: int) -> Graph:
    """Path P_m with vertices ``0, 1, ..., m``; vertex ``k`` is ``k`` steps from 0."""
    return Graph(m + 1, tuple((k, k + 1) for k in range(m)))


def star(leaves: int) -> Graph:
    """Center 0 joined to leaves ``1..leaves``."""
    return Graph(leaves + 1, tuple((0, k) for k in range(1, leaves + 1)))


def triangle() -> Graph:
    return Graph(3, ((0, 1), (1, 2), (0, 2)))

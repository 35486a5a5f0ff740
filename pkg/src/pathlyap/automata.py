"""Regular languages over the alphabet, represented as finite automata.

Words are tuples of symbols consumed left to right, with index 0 holding the
most recent symbol (the prepend convention: extending a memory word by a new
symbol h yields (h,) + word).  All constructions are epsilon-free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import DEFAULT_DETERMINIZE_CAP, ResourceLimitError, state_cap
from .graphs import LabeledGraph, dual, graph_from_json

__all__ = [
    "Automaton",
    "PrefixClass",
    "automaton_from_json",
    "accepts",
    "prefix_class_automaton",
    "prepend_symbol",
    "union_automaton",
    "language_includes",
    "is_universal",
    "universality_witness",
    "language_of_observer_node",
]


@dataclass(frozen=True)
class Automaton:
    """Nondeterministic finite automaton over a labeled graph.

    A word is accepted iff some path from an initial node reading it ends in
    an accepting node; ε is accepted iff initial and accepting intersect.
    """

    graph: LabeledGraph
    initial: frozenset
    accepting: frozenset

    def __post_init__(self):
        initial = frozenset(self.initial)
        accepting = frozenset(self.accepting)
        nodes = set(self.graph.nodes)
        if not initial:
            raise ValueError("initial state set must be nonempty")
        if not initial <= nodes:
            raise ValueError("initial states must be graph nodes")
        if not accepting <= nodes:
            raise ValueError("accepting states must be graph nodes")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "accepting", accepting)

    def to_json(self) -> dict:
        d = self.graph.to_json()
        d["initial"] = sorted(self.initial)
        d["accepting"] = sorted(self.accepting)
        return d


def automaton_from_json(data: dict) -> Automaton:
    if not isinstance(data, dict):
        raise ValueError("automaton JSON must be an object")
    extra = set(data) - {"alphabet", "nodes", "edges", "initial", "accepting"}
    if extra:
        raise ValueError(f"unknown automaton keys: {sorted(extra)}")
    for key in ("initial", "accepting"):
        if key not in data:
            raise ValueError(f"automaton JSON missing {key!r}")
    graph = graph_from_json(
        {k: data[k] for k in ("alphabet", "nodes", "edges")}
    )
    return Automaton(graph, frozenset(data["initial"]), frozenset(data["accepting"]))


@dataclass(frozen=True)
class PrefixClass:
    """Words agreeing with the stem on their first K symbols where defined.

    Every prefix class contains ε and all (strict) prefixes of its stem; an
    empty stem denotes the full language.
    """

    alphabet: tuple
    stem: tuple

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        stem = tuple(self.stem)
        if any(s not in alphabet for s in stem):
            raise ValueError("stem symbols must come from the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "stem", stem)


def prefix_class_automaton(p: PrefixClass) -> Automaton:
    """Chain automaton for a prefix class: K+1 states, all accepting, the
    last state absorbing every symbol."""
    k = len(p.stem)
    states = tuple(f"q{i}" for i in range(k + 1))
    edges = [(states[i], states[i + 1], p.stem[i]) for i in range(k)]
    edges += [(states[k], states[k], h) for h in p.alphabet]
    graph = LabeledGraph(p.alphabet, states, edges)
    return Automaton(graph, frozenset({states[0]}), frozenset(states))


def accepts(a: Automaton, word) -> bool:
    """Membership by breadth-first subset simulation."""
    alphabet = set(a.graph.alphabet)
    out = a.graph.out_map()
    frontier = set(a.initial)
    for sym in word:
        if sym not in alphabet:
            raise ValueError(f"symbol {sym!r} not in alphabet")
        frontier = {q for p in frontier for q in out.get((p, sym), ())}
        if not frontier:
            return False
    return bool(frontier & a.accepting)


def _fresh_node(taken, base) -> str:
    name = base
    while name in taken:
        name = "^" + name
    return name


def prepend_symbol(h: str, a: Automaton) -> Automaton:
    """Automaton for { h·w : w in L(a) }.

    A fresh initial state carries h-edges into a's initial states and is
    never accepting (ε does not belong to a prepended language).
    """
    if h not in a.graph.alphabet:
        raise ValueError(f"symbol {h!r} not in alphabet")
    start = _fresh_node(set(a.graph.nodes), f"+{h}")
    nodes = (start,) + a.graph.nodes
    edges = list(a.graph.edges) + [(start, q, h) for q in sorted(a.initial)]
    graph = LabeledGraph(a.graph.alphabet, nodes, edges)
    return Automaton(graph, frozenset({start}), a.accepting)


def union_automaton(parts) -> Automaton:
    """Disjoint union recognizing the union of the parts' languages."""
    parts = list(parts)
    if not parts:
        raise ValueError("union of zero automata")
    alphabet = parts[0].graph.alphabet
    if any(p.graph.alphabet != alphabet for p in parts):
        raise ValueError("union members must share one alphabet")
    nodes, edges, initial, accepting = [], [], set(), set()
    for i, p in enumerate(parts):
        rename = {v: f"{i}:{v}" for v in p.graph.nodes}
        nodes.extend(rename[v] for v in p.graph.nodes)
        edges.extend((rename[s], rename[d], h) for s, d, h in p.graph.edges)
        initial.update(rename[v] for v in p.initial)
        accepting.update(rename[v] for v in p.accepting)
    graph = LabeledGraph(alphabet, tuple(nodes), edges)
    return Automaton(graph, frozenset(initial), frozenset(accepting))


def _determinize(a: Automaton, cap):
    """Subset construction with an explicit dead state (complete DFA).

    Returns (initial subset, transition map (subset, symbol) -> subset).
    Subsets are frozensets of a's node ids; the empty frozenset is the dead
    state.
    """
    limit = state_cap(cap, DEFAULT_DETERMINIZE_CAP)
    out = a.graph.out_map()
    start = frozenset(a.initial)
    delta = {}
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for sym in a.graph.alphabet:
            nxt = frozenset(q for p in current for q in out.get((p, sym), ()))
            delta[(current, sym)] = nxt
            if nxt not in seen:
                if len(seen) >= limit:
                    raise ResourceLimitError(
                        f"determinization exceeded {limit} states"
                    )
                seen.add(nxt)
                queue.append(nxt)
    return start, delta


def language_includes(sub: Automaton, sup: Automaton, cap=None) -> bool:
    """True iff L(sub) ⊆ L(sup).

    Determinizes the right-hand side only, then searches the product of sub
    with the complemented DFA for a reachable (accepting, rejecting) pair.
    """
    if sub.graph.alphabet != sup.graph.alphabet:
        raise ValueError("inclusion requires a common alphabet")
    d0, delta = _determinize(sup, cap)
    sub_out = sub.graph.out_map()

    def bad(q, d):
        return q in sub.accepting and not (d & sup.accepting)

    seen = {(q, d0) for q in sub.initial}
    if any(bad(q, d) for q, d in seen):
        return False
    queue = deque(sorted(seen))
    while queue:
        q, d = queue.popleft()
        for sym in sub.graph.alphabet:
            d2 = delta[(d, sym)]
            for q2 in sub_out.get((q, sym), ()):
                if (q2, d2) in seen:
                    continue
                if bad(q2, d2):
                    return False
                seen.add((q2, d2))
                queue.append((q2, d2))
    return True


def universality_witness(a: Automaton, cap=None):
    """Shortest word outside L(a), or None when L(a) = S*.

    Ties broken lexicographically in alphabet order (breadth-first search
    expands symbols in alphabet order).
    """
    d0, delta = _determinize(a, cap)
    parent = {d0: None}
    queue = deque([d0])
    while queue:
        current = queue.popleft()
        if not (current & a.accepting):
            word = []
            back = current
            while parent[back] is not None:
                prev, sym = parent[back]
                word.append(sym)
                back = prev
            return tuple(reversed(word))
        for sym in a.graph.alphabet:
            nxt = delta[(current, sym)]
            if nxt not in parent:
                parent[nxt] = (current, sym)
                queue.append(nxt)
    return None


def is_universal(a: Automaton, cap=None) -> bool:
    """True iff L(a) is the set of all finite words."""
    return universality_witness(a, cap=cap) is None


def language_of_observer_node(obs, node) -> Automaton:
    """Automaton for the words whose observer run lands on `node`.

    Built as the dual of the observer graph with `node` initial and the root
    (the full-set node) accepting.  `obs` is an ObserverGraph; `node` may be
    a node id or an ObserverNode.
    """
    node_id = node if isinstance(node, str) else _node_id_for(obs, node)
    if node_id not in obs.subset_map:
        raise ValueError(f"unknown observer node {node_id!r}")
    return Automaton(dual(obs.graph), frozenset({node_id}), frozenset({obs.root}))


def _node_id_for(obs, node):
    subset = frozenset(node.subset)
    for name, candidate in obs.subset_map.items():
        if frozenset(candidate.subset) == subset:
            return name
    raise ValueError("observer node not found")

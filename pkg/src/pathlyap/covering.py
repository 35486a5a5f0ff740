"""Covering families of regular languages and their graph translations.

A covering family is a finite list of regular languages over the switching
alphabet satisfying two conditions: together the members cover every finite
word, and prepending any symbol to any member lands inside at least one
member.  Such a family induces a labeled graph (one node per member, one
edge per containment), and conversely the observer construction turns any
path-complete graph into a covering family; the two translations invert
each other on the observer's node languages.
"""

from dataclasses import dataclass

from .automata import (
    Automaton,
    PrefixClass,
    automaton_from_json,
    language_includes,
    language_of_observer_node,
    prefix_class_automaton,
    prepend_symbol,
    union_automaton,
    universality_witness,
)
from .graphs import LabeledGraph, _word_name
from .observer import ObserverGraph, observer_graph


@dataclass(frozen=True)
class CoveringMember:
    """One language in a covering family.

    `stem` is recorded when the member is a prefix class, purely for
    naming and serialization; the automaton is always authoritative.
    """

    name: str
    automaton: Automaton
    stem: tuple = None

    def __post_init__(self):
        if self.stem is not None:
            object.__setattr__(self, "stem", tuple(self.stem))

    def to_json(self):
        if self.stem is not None:
            return {"name": self.name, "stem": list(self.stem)}
        return {"name": self.name, "automaton": self.automaton.to_json()}


@dataclass(frozen=True)
class CoveringFamily:
    alphabet: tuple
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a covering family needs at least one member")
        names = [m.name for m in self.members]
        if len(set(names)) != len(names):
            raise ValueError("covering member names must be distinct")
        for m in self.members:
            if m.automaton.graph.alphabet != self.alphabet:
                raise ValueError(
                    f"member {m.name!r} uses a different alphabet"
                )

    def to_json(self):
        return {
            "alphabet": list(self.alphabet),
            "members": [m.to_json() for m in self.members],
        }


def covering_from_json(d):
    extra = set(d) - {"alphabet", "members"}
    if extra:
        raise ValueError(f"unknown keys in covering JSON: {sorted(extra)}")
    for key in ("alphabet", "members"):
        if key not in d:
            raise ValueError(f"covering JSON is missing {key!r}")
    alphabet = tuple(d["alphabet"])
    members = []
    for entry in d["members"]:
        keys = set(entry)
        if keys == {"name", "stem"}:
            stem = tuple(entry["stem"])
            auto = prefix_class_automaton(PrefixClass(alphabet, stem))
            members.append(CoveringMember(entry["name"], auto, stem=stem))
        elif keys == {"name", "automaton"}:
            auto = automaton_from_json(entry["automaton"])
            members.append(CoveringMember(entry["name"], auto))
        else:
            raise ValueError(
                "covering member needs exactly 'name' plus one of "
                f"'stem' or 'automaton', got {sorted(keys)}"
            )
    return CoveringFamily(alphabet, tuple(members))


@dataclass
class CoveringReport:
    covers_all_words: bool
    uncovered_witness: tuple
    prepend_closed: bool
    unclosed_pairs: tuple

    @property
    def ok(self):
        return self.covers_all_words and self.prepend_closed

    def to_json(self):
        return {
            "ok": self.ok,
            "covers_all_words": self.covers_all_words,
            "uncovered_witness": None
            if self.uncovered_witness is None
            else list(self.uncovered_witness),
            "prepend_closed": self.prepend_closed,
            "unclosed_pairs": [list(p) for p in self.unclosed_pairs],
        }


def _edge_table(c, cap=None):
    """Map (member name, symbol) to the names of all members containing the
    prepended language."""
    table = {}
    for source in c.members:
        for symbol in c.alphabet:
            lifted = prepend_symbol(symbol, source.automaton)
            targets = tuple(
                t.name
                for t in c.members
                if language_includes(lifted, t.automaton, cap=cap)
            )
            table[(source.name, symbol)] = targets
    return table


def validate_covering(c, cap=None):
    """Check both covering conditions and report witnesses for failures."""
    witness = universality_witness(
        union_automaton([m.automaton for m in c.members]), cap=cap
    )
    table = _edge_table(c, cap=cap)
    unclosed = tuple(
        pair for pair, targets in table.items() if not targets
    )
    return CoveringReport(
        covers_all_words=witness is None,
        uncovered_witness=witness,
        prepend_closed=not unclosed,
        unclosed_pairs=unclosed,
    )


def covering_to_graph(c, cap=None):
    """Translate a valid covering family into its labeled graph.

    One node per member; an edge (B, C, h) for every containment of the
    h-prepended member B inside member C, keeping all containments when
    several hold.  Returns the graph together with the node-to-member map.
    """
    report = validate_covering(c, cap=cap)
    if not report.covers_all_words:
        raise ValueError(
            "family does not cover every word; uncovered witness: "
            f"{report.uncovered_witness}"
        )
    if not report.prepend_closed:
        raise ValueError(
            "family is not closed under symbol prepending; failing "
            f"(member, symbol) pairs: {list(report.unclosed_pairs)}"
        )
    table = _edge_table(c, cap=cap)
    edges = [
        (source, target, symbol)
        for (source, symbol), targets in table.items()
        for target in targets
    ]
    graph = LabeledGraph(c.alphabet, tuple(m.name for m in c.members), edges)
    phi = {m.name: m for m in c.members}
    return graph, phi


def observer_to_covering(g, cap=None):
    """Covering family made of the observer's node languages.

    Accepts either a path-complete base graph (determinized here) or an
    already built ObserverGraph.  Member names are the observer node ids,
    so translating back to a graph reproduces the observer graph itself,
    node names included.
    """
    obs = g if isinstance(g, ObserverGraph) else observer_graph(g, cap=cap)
    members = tuple(
        CoveringMember(node, language_of_observer_node(obs, node))
        for node in obs.graph.nodes
    )
    return CoveringFamily(obs.graph.alphabet, members)


def prefix_covering(stems, alphabet, cap=None):
    """CoveringFamily from prefix-class stems, validated on construction."""
    members = []
    for stem in stems:
        stem = tuple(stem)
        auto = prefix_class_automaton(PrefixClass(alphabet, stem))
        members.append(CoveringMember(_word_name(stem, alphabet), auto, stem=stem))
    fam = CoveringFamily(tuple(alphabet), tuple(members))
    report = validate_covering(fam, cap=cap)
    if not report.ok:
        if not report.covers_all_words:
            raise ValueError(
                "stems do not cover every word; uncovered witness: "
                f"{report.uncovered_witness}"
            )
        raise ValueError(
            "stem family is not closed under symbol prepending; failing "
            f"(member, symbol) pairs: {list(report.unclosed_pairs)}"
        )
    return fam


def stem_shift_includes(symbol, source_stem, target_stem):
    """Closed-form edge test for prefix-class members.

    Prepending `symbol` to the class of `source_stem` lands inside the class
    of `target_stem` exactly when `target_stem` is a prefix of the shifted
    stem (symbol, *source_stem).  Requires an alphabet with at least two
    symbols; over a one-symbol alphabet distinct stems describe overlapping
    classes and this test is too strict.
    """
    shifted = (symbol,) + tuple(source_stem)
    return tuple(target_stem) == shifted[: len(target_stem)]

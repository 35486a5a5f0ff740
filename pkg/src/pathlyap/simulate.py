"""Trajectories, brute-force growth lower bounds, and decrease checks.

Words here are in trajectory time order: index 0 is the first symbol
applied.  That is the reverse of the convention in the language layer,
where index 0 is the most recent symbol; the decrease checker bridges the
two by walking member structures forward in time.
"""

import math
from dataclasses import dataclass

import numpy as np

from .automata import accepts
from .covering import CoveringFamily, covering_to_graph
from .errors import (
    DEFAULT_WORD_CAP,
    InvariantViolation,
    ResourceLimitError,
    state_cap,
)
from .lyapunov import evaluate_mblf
from .observer import ObserverGraph

DEFAULT_SEED = 1729

# growth rates this close (relatively) count as equal when picking witnesses,
# so that eigensolves of similar products cannot steal a tie
_TIE_TOL = 1e-12


@dataclass(eq=False)
class Trajectory:
    """States x(0..K) under word: states[k+1] = A_{word[k]} @ states[k]."""

    states: list
    word: tuple

    def to_json(self):
        return {
            "word": list(self.word),
            "states": [[float(v) for v in x] for x in self.states],
        }


def simulate(sys, word, x0):
    """Iterate the system along `word` (time order) from x0."""
    word = tuple(word)
    for sym in word:
        if sym not in sys.modes:
            raise ValueError(f"symbol {sym!r} is not a mode of the system")
    x = np.asarray(x0, dtype=float)
    if x.shape != (sys.dimension,):
        raise ValueError(
            f"expected a state vector of length {sys.dimension}"
        )
    states = [x]
    for sym in word:
        states.append(sys.modes[sym] @ states[-1])
    return Trajectory(states=states, word=word)


def _word_at(index, length, alphabet):
    n = len(alphabet)
    symbols = []
    for pos in range(length):
        symbols.append(alphabet[(index // n ** (length - 1 - pos)) % n])
    return tuple(symbols)


def jsr_lower_bound(sys, max_len, cap=None):
    """Largest spectral-radius(A_w)^(1/|w|) over words with 1 <= |w| <= max_len.

    Exhaustive: every product is formed (incrementally, newest mode on the
    left) and eigensolved.  The witness is the shortest, then
    lexicographically first (in alphabet order), word attaining the
    maximum, reported in time order.  Raises ResourceLimitError when the
    total word count would exceed the cap.
    """
    max_len = int(max_len)
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    limit = state_cap(cap, DEFAULT_WORD_CAP)
    n_sym = len(sys.alphabet)
    total = sum(n_sym ** length for length in range(1, max_len + 1))
    if total > limit:
        raise ResourceLimitError(
            f"enumerating {total} words, above the cap of {limit}"
        )

    best = -math.inf
    best_word = None
    prev = np.eye(sys.dimension)[None]
    for length in range(1, max_len + 1):
        stacked = np.stack(
            [np.matmul(sys.modes[s], prev) for s in sys.alphabet], axis=1
        )
        prev = stacked.reshape(-1, sys.dimension, sys.dimension)
        radii = np.abs(np.linalg.eigvals(prev)).max(axis=1)
        growth = radii ** (1.0 / length)
        peak = float(growth.max())
        tie = _TIE_TOL * max(1.0, abs(peak))
        if peak > best + tie:
            index = int(np.argmax(growth >= peak - tie))
            best = peak
            best_word = _word_at(index, length, sys.alphabet)
    return best, best_word


@dataclass(eq=False)
class DecreaseReport:
    """Outcome of sampled decrease checks along member chains."""

    trials: int
    passes: int
    failures: int
    worst_slack: float
    seed: int
    gamma: float
    envelope_ratio: float
    tolerance: float
    violations: tuple

    def to_json(self):
        return {
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "worst_slack": self.worst_slack,
            "seed": self.seed,
            "gamma": self.gamma,
            "envelope_ratio": self.envelope_ratio,
            "tolerance": self.tolerance,
            "violations": [dict(v) for v in self.violations],
        }


def _structure_walk(structure):
    """Graph, members containing the empty word, and successor lists."""
    if isinstance(structure, ObserverGraph):
        graph = structure.graph
        starts = [structure.root]
    elif isinstance(structure, CoveringFamily):
        graph, _ = covering_to_graph(structure)
        starts = [
            m.name for m in structure.members if accepts(m.automaton, ())
        ]
    else:
        raise ValueError(
            "structure must be an ObserverGraph or a CoveringFamily"
        )
    successors = {}
    for r, q, h in graph.edges:
        successors.setdefault((r, h), []).append(q)
    return graph, starts, successors


def trajectory_decrease_check(w_fn, structure, sys, rho_prime, trials=100,
                              horizon=20, seed=None, tolerance=1e-9,
                              initial_states=None):
    """Sample trajectories and check the scaled decrease along member chains.

    Each trial draws x0 and a word of length `horizon`, walks the member
    chain from the first member containing the empty word, and at every
    step checks W(B, x_k / rho_prime^k) <= gamma^k W(B_0, x0) + tolerance
    for EVERY admissible next member B (gamma = (rho / rho_prime)^2); the
    chain then advances to the first admissible member in member order.
    When all member quadratics are positive definite the induced norm
    envelope |x_k / rho_prime^k|^2 <= ratio * gamma^k |x0|^2 is checked as
    well, with ratio the worst upper-to-lower quadratic constant.

    A missing successor is an InvariantViolation: validated coverings and
    observers always have one.  `initial_states` overrides the sampled x0
    values (and the trial count) for directed probing.
    """
    if rho_prime <= w_fn.rho:
        raise ValueError("rho_prime must exceed the certified rate")
    graph, starts, successors = _structure_walk(structure)
    if set(graph.nodes) != set(w_fn.members):
        raise ValueError(
            "structure members do not match the function's members"
        )
    if set(graph.alphabet) != set(sys.alphabet):
        raise ValueError("structure and system alphabets differ")
    if w_fn.dimension != sys.dimension:
        raise ValueError("function and system dimensions differ")
    if not starts:
        raise InvariantViolation("no member contains the empty word")
    start = starts[0]

    gamma = (float(w_fn.rho) / float(rho_prime)) ** 2
    lower = []
    upper = []
    for name in graph.nodes:
        quads = w_fn.members[name]
        lower.append(max(float(np.linalg.eigvalsh(p)[0]) for p in quads))
        upper.append(max(float(np.linalg.eigvalsh(p)[-1]) for p in quads))
    a1 = min(lower)
    ratio = (max(upper) / a1) if a1 > 0 else None

    used_seed = DEFAULT_SEED if seed is None else int(seed)
    rng = np.random.default_rng(used_seed)
    if initial_states is not None:
        initial_states = [np.asarray(x, dtype=float) for x in initial_states]
        trials = len(initial_states)

    alphabet = graph.alphabet
    violations = []
    worst = math.inf
    failures = 0
    for trial in range(int(trials)):
        if initial_states is not None:
            x0 = initial_states[trial]
        else:
            x0 = rng.standard_normal(sys.dimension)
        word = tuple(
            alphabet[i]
            for i in rng.integers(0, len(alphabet), size=int(horizon))
        )
        states = simulate(sys, word, x0).states
        w0 = evaluate_mblf(w_fn, start, x0)
        norm0 = float(x0 @ x0)
        current = start
        bad = 0
        for k, sym in enumerate(word):
            nexts = successors.get((current, sym), ())
            if not nexts:
                raise InvariantViolation(
                    f"member {current!r} has no successor for symbol "
                    f"{sym!r}; the structure is not prepend-closed"
                )
            xk = states[k + 1] / float(rho_prime) ** (k + 1)
            bound = gamma ** (k + 1) * w0
            for candidate in nexts:
                value = evaluate_mblf(w_fn, candidate, xk)
                slack = bound - value
                worst = min(worst, slack)
                if slack < -tolerance:
                    bad += 1
                    violations.append({
                        "kind": "decrease", "trial": trial,
                        "word": list(word), "step": k + 1,
                        "member": candidate, "value": value, "bound": bound,
                    })
            if ratio is not None:
                env_bound = ratio * gamma ** (k + 1) * norm0
                env_value = float(xk @ xk)
                slack = env_bound - env_value
                worst = min(worst, slack)
                if slack < -tolerance:
                    bad += 1
                    violations.append({
                        "kind": "envelope", "trial": trial,
                        "word": list(word), "step": k + 1,
                        "member": current, "value": env_value,
                        "bound": env_bound,
                    })
            current = nexts[0]
        if bad:
            failures += 1
    if worst is math.inf:
        worst = 0.0
    return DecreaseReport(
        trials=int(trials), passes=int(trials) - failures, failures=failures,
        worst_slack=float(worst), seed=used_seed, gamma=gamma,
        envelope_ratio=ratio, tolerance=float(tolerance),
        violations=tuple(violations),
    )

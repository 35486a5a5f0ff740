"""Switched linear systems, quadratic certificates on labeled graphs, LMI
assembly, eigenvalue-based verification, and the max-lift onto observer
nodes.

A quadratic certificate attaches one symmetric matrix P_s to each graph
node.  It certifies growth rate rho when every P_s is positive definite and
every edge (r, q, h) satisfies rho^2 P_r - A_h^T P_q A_h > 0.  Lifting a
certificate onto the observer of its graph produces a memory-based function
W(subset, x) = max over s in subset of x^T P_s x, which decreases along
observer transitions at the same rate.
"""

from dataclasses import dataclass, field

import numpy as np

ASYMMETRY_CAP = 1e-8
EIG_REL_TOL = 1e-9
EIG_ABS_FLOOR = 1e-12


def _symmetrize(m, context):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{context}: expected a square matrix, got {m.shape}")
    gap = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if gap > ASYMMETRY_CAP:
        raise ValueError(
            f"{context}: asymmetry {gap:.3e} exceeds cap {ASYMMETRY_CAP:.0e}"
        )
    return (m + m.T) / 2.0


@dataclass(eq=False)
class SwitchedLinearSystem:
    alphabet: tuple
    dimension: int
    modes: dict

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        n = int(self.dimension)
        if n < 1:
            raise ValueError("dimension must be positive")
        self.dimension = n
        if set(self.modes) != set(self.alphabet):
            raise ValueError("modes must provide exactly one matrix per symbol")
        fixed = {}
        for sym, m in self.modes.items():
            m = np.asarray(m, dtype=float)
            if m.shape != (n, n):
                raise ValueError(
                    f"mode {sym!r} has shape {m.shape}, expected {(n, n)}"
                )
            fixed[sym] = m
        self.modes = fixed

    def to_json(self):
        return {
            "alphabet": list(self.alphabet),
            "dimension": self.dimension,
            "modes": {sym: self.modes[sym].tolist() for sym in self.alphabet},
        }


def system_from_json(d):
    extra = set(d) - {"alphabet", "dimension", "modes"}
    if extra:
        raise ValueError(f"unknown keys in system JSON: {sorted(extra)}")
    for key in ("alphabet", "dimension", "modes"):
        if key not in d:
            raise ValueError(f"system JSON is missing {key!r}")
    return SwitchedLinearSystem(
        tuple(d["alphabet"]), int(d["dimension"]), dict(d["modes"])
    )


@dataclass(eq=False)
class QuadraticCertificate:
    graph: object
    P: dict
    rho: float
    margin: float = None

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if set(self.P) != set(self.graph.nodes):
            raise ValueError("P map must cover exactly the graph nodes")
        fixed = {}
        shape = None
        for node, m in self.P.items():
            m = _symmetrize(m, f"P[{node}]")
            if shape is None:
                shape = m.shape
            elif m.shape != shape:
                raise ValueError("all P matrices must share one dimension")
            fixed[node] = m
        self.P = fixed

    @property
    def dimension(self):
        return next(iter(self.P.values())).shape[0]

    def to_json(self):
        return {
            "graph": self.graph.to_json(),
            "rho": float(self.rho),
            "P": {node: self.P[node].tolist() for node in self.graph.nodes},
            "margin": None if self.margin is None else float(self.margin),
        }


def certificate_from_json(d):
    from .graphs import graph_from_json

    extra = set(d) - {"graph", "rho", "P", "margin"}
    if extra:
        raise ValueError(f"unknown keys in certificate JSON: {sorted(extra)}")
    for key in ("graph", "rho", "P"):
        if key not in d:
            raise ValueError(f"certificate JSON is missing {key!r}")
    return QuadraticCertificate(
        graph=graph_from_json(d["graph"]),
        P={node: np.asarray(m, dtype=float) for node, m in d["P"].items()},
        rho=float(d["rho"]),
        margin=d.get("margin"),
    )


# ---------------------------------------------------------------------------
# LMI assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LmiTerm:
    """coeff * W^T P_var W, with W = identity when weight is None."""

    coeff: float
    var: str
    weight: object

    def evaluate(self, assignment):
        p = assignment[self.var]
        if self.weight is None:
            return self.coeff * p
        return self.coeff * (self.weight.T @ p @ self.weight)


@dataclass(frozen=True, eq=False)
class LmiConstraint:
    """An affine symmetric-matrix expression required to dominate t*I."""

    kind: str
    label: tuple
    terms: tuple

    def evaluate(self, assignment):
        return sum(term.evaluate(assignment) for term in self.terms)


@dataclass(eq=False)
class LmiProblem:
    variables: tuple
    constraints: tuple
    trace_targets: dict

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.constraints = tuple(self.constraints)
        declared = {name for name, _ in self.variables}
        for c in self.constraints:
            for term in c.terms:
                if term.var not in declared:
                    raise ValueError(
                        f"constraint {c.label} references undeclared "
                        f"variable {term.var!r}"
                    )
        if set(self.trace_targets) != declared:
            raise ValueError("trace targets must cover exactly the variables")


def assemble_lmi(g, sys, rho):
    """Margin program for certifying rate `rho` of `sys` along graph `g`.

    One matrix variable per node.  Constraints, each read as "... >= t*I":
    P_s for every node s, and rho^2 P_r - A_h^T P_q A_h for every edge
    (r, q, h).  Traces are pinned to the state dimension to fix the scale.
    """
    if set(g.alphabet) != set(sys.alphabet):
        raise ValueError(
            f"graph alphabet {g.alphabet} does not match system alphabet "
            f"{sys.alphabet}"
        )
    if rho <= 0:
        raise ValueError("rho must be positive")
    n = sys.dimension
    variables = tuple((s, n) for s in g.nodes)
    constraints = [
        LmiConstraint("node", (s,), (LmiTerm(1.0, s, None),)) for s in g.nodes
    ]
    for r, q, h in g.edges:
        constraints.append(
            LmiConstraint(
                "edge",
                (r, q, h),
                (
                    LmiTerm(float(rho) ** 2, r, None),
                    LmiTerm(-1.0, q, sys.modes[h]),
                ),
            )
        )
    trace_targets = {s: float(n) for s in g.nodes}
    return LmiProblem(variables, tuple(constraints), trace_targets)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    ok: bool
    margin: float
    node_minima: dict
    edge_minima: dict
    implied_gamma: float = None

    def to_json(self):
        return {
            "ok": self.ok,
            "margin": self.margin,
            "node_minima": dict(self.node_minima),
            "edge_minima": [
                {"source": r, "target": q, "symbol": h, "min_eigenvalue": v}
                for (r, q, h), v in self.edge_minima.items()
            ],
            "implied_gamma": self.implied_gamma,
        }


def _min_eig_and_pass(m):
    eigs = np.linalg.eigvalsh(m)
    smallest = float(eigs[0])
    norm = float(np.max(np.abs(eigs)))
    tol = max(EIG_ABS_FLOOR, EIG_REL_TOL * norm)
    return smallest, smallest > tol


def verify_certificate(cert, sys, rho_prime=None):
    """Independent eigenvalue check of a certificate against a system.

    Every node matrix and every edge slack matrix is diagonalized; the
    report carries each smallest eigenvalue and the global minimum as the
    margin.  A matrix passes when its smallest eigenvalue exceeds the
    relative tolerance.  When rho_prime is given, the report also states
    the contraction factor (rho/rho_prime)^2 implied for the system scaled
    down by rho_prime.
    """
    if set(cert.graph.alphabet) != set(sys.alphabet):
        raise ValueError("certificate and system alphabets differ")
    if cert.dimension != sys.dimension:
        raise ValueError("certificate and system dimensions differ")
    if rho_prime is not None and rho_prime <= 0:
        raise ValueError("rho_prime must be positive")

    rho_sq = float(cert.rho) ** 2
    ok = True
    node_minima = {}
    for s in cert.graph.nodes:
        smallest, passed = _min_eig_and_pass(cert.P[s])
        node_minima[s] = smallest
        ok = ok and passed
    edge_minima = {}
    for r, q, h in cert.graph.edges:
        a = sys.modes[h]
        slack = rho_sq * cert.P[r] - a.T @ cert.P[q] @ a
        smallest, passed = _min_eig_and_pass(slack)
        edge_minima[(r, q, h)] = smallest
        ok = ok and passed

    margin = min(list(node_minima.values()) + list(edge_minima.values()))
    gamma = None if rho_prime is None else (float(cert.rho) / rho_prime) ** 2
    return VerificationReport(
        ok=ok,
        margin=margin,
        node_minima=node_minima,
        edge_minima=edge_minima,
        implied_gamma=gamma,
    )


# ---------------------------------------------------------------------------
# max lift onto observer nodes
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MaxQuadraticFunction:
    """Pointwise max of quadratics, one set per member name."""

    members: dict
    rho: float
    dimension: int


def lift_certificate(cert, obs):
    """Attach to each observer node the quadratics of its subset members.

    The resulting function W(node, x) = max over s in subset of x^T P_s x
    inherits the certificate's decrease along observer transitions.
    """
    if obs.graph.alphabet != cert.graph.alphabet:
        raise ValueError("observer and certificate alphabets differ")
    base_nodes = set(cert.graph.nodes)
    members = {}
    for name, node in obs.subset_map.items():
        if not node.subset <= base_nodes:
            raise ValueError(
                f"observer node {name} references nodes outside the "
                "certificate's graph"
            )
        members[name] = tuple(cert.P[s] for s in sorted(node.subset))
    return MaxQuadraticFunction(
        members=members, rho=cert.rho, dimension=cert.dimension
    )


def evaluate_mblf(w, member, x):
    """max over the member's quadratics at the point x."""
    if member not in w.members:
        raise ValueError(f"unknown member {member!r}")
    x = np.asarray(x, dtype=float)
    if x.shape != (w.dimension,):
        raise ValueError(f"expected a vector of length {w.dimension}")
    return float(max(x @ p @ x for p in w.members[member]))

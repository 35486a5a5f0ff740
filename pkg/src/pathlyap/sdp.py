"""Margin maximization and bisection-based spectral radius upper bounds.

``solve_margin`` maximizes t subject to every constraint block of an
:class:`~pathlyap.lyapunov.LmiProblem` dominating ``t * I``, with each
variable's trace pinned to its target.  The solve is self-contained: each
variable is parametrized as ``(target/n) I + sum_j y_j B_j`` over an
orthonormal basis of trace-zero symmetric matrices, which turns the trace
equalities into plain eliminations, and the resulting max-eigenvalue
program goes to the log-det barrier kernel in :mod:`pathlyap._kernels`.
The reported margin is always recomputed from the returned matrices with
an eigenvalue solve, never trusted from the optimizer state.

``jsr_upper_bound`` brackets the certifiable growth rate by bisection on
rho, probing feasibility of the margin program, and returns the smallest
feasible probe together with its independently re-verified certificate.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._kernels import barrier_solve
from .errors import (
    DEFAULT_UNKNOWN_CAP,
    NotPathCompleteError,
    NumericalError,
    ResourceLimitError,
)
from .graphs import find_unreadable_word
from .lyapunov import QuadraticCertificate, assemble_lmi, verify_certificate

# a probe counts as feasible only when its recomputed margin clears this
FEASIBILITY_THRESHOLD = 1e-7

_WIDEN_LIMIT = 8
_BISECT_LIMIT = 200


@dataclass(eq=False)
class MarginSolution:
    """Result of one margin solve.

    margin is the smallest eigenvalue over all constraint blocks at the
    returned assignment (so it is meaningful even when status says the
    optimizer gave up early).  status is one of "optimal",
    "max-iterations", "numerical-failure".
    """

    margin: float
    assignment: dict
    iterations: int
    status: str


def _trace_zero_basis(n):
    """Orthonormal (Frobenius) basis of the trace-zero symmetric matrices."""
    basis = []
    for j in range(1, n):
        m = np.zeros((n, n))
        for i in range(j):
            m[i, i] = 1.0
        m[j, j] = -float(j)
        basis.append(m / math.sqrt(j * (j + 1)))
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j] = m[j, i] = 1.0 / math.sqrt(2.0)
            basis.append(m)
    return basis


_STATUS_NAMES = {0: "optimal", 1: "max-iterations", 2: "numerical-failure"}


def solve_margin(problem, unknown_cap=None):
    """Maximize the common slack t of all constraint blocks of `problem`.

    The solve refuses problems with more scalar unknowns than
    `unknown_cap` (default :data:`pathlyap.errors.DEFAULT_UNKNOWN_CAP`);
    the dense Newton system grows with the square of that count.
    """
    cap = DEFAULT_UNKNOWN_CAP if unknown_cap is None else int(unknown_cap)
    if not problem.constraints:
        raise ValueError("problem has no constraints")
    dims = {dim for _, dim in problem.variables}
    if len(dims) != 1:
        raise ValueError("solver requires all variables to share one dimension")
    n = dims.pop()
    basis = _trace_zero_basis(n)
    columns = [
        (name, b) for name, _ in problem.variables for b in basis
    ]
    m1 = len(columns) + 1
    if m1 > cap:
        raise ResourceLimitError(
            f"margin program has {m1} unknowns, above the cap of {cap}"
        )

    base = {
        name: (problem.trace_targets[name] / n) * np.eye(n)
        for name, _ in problem.variables
    }
    zeros = {name: np.zeros((n, n)) for name, _ in problem.variables}
    count = len(problem.constraints)
    c0 = np.zeros((count, n, n))
    d = np.zeros((count, m1, n, n))
    for k, constraint in enumerate(problem.constraints):
        c0[k] = constraint.evaluate(base)
        for a, (name, b) in enumerate(columns):
            probe = dict(zeros)
            probe[name] = b
            d[k, a] = constraint.evaluate(probe)
        d[k, m1 - 1] = -np.eye(n)

    worst = min(np.linalg.eigvalsh(c0[k])[0] for k in range(count))
    z0 = np.zeros(m1)
    # start strictly inside the cone: back the margin off from the boundary
    z0[m1 - 1] = worst - 0.5 * (1.0 + abs(worst))

    z, iterations, code = barrier_solve(
        np.ascontiguousarray(c0),
        np.ascontiguousarray(d),
        z0,
        1.0,      # initial barrier weight
        1e-10,    # final barrier weight
        0.2,      # weight shrink per stage
        1e-11,    # Newton decrement tolerance
        80,       # Newton iterations per stage
        0.25,     # Armijo slope fraction
        0.5,      # backtracking shrink
        1e-14,    # smallest line-search step
    )

    assignment = {}
    for idx, (name, b) in enumerate(columns):
        assignment.setdefault(name, base[name].copy())
        assignment[name] += z[idx] * b
    for name, _ in problem.variables:
        assignment.setdefault(name, base[name].copy())

    status = _STATUS_NAMES[int(code)]
    if not np.all(np.isfinite(z)):
        return MarginSolution(
            margin=float("nan"), assignment=assignment,
            iterations=int(iterations), status="numerical-failure",
        )
    margin = min(
        float(np.linalg.eigvalsh(c.evaluate(assignment))[0])
        for c in problem.constraints
    )
    if not math.isfinite(margin):
        status = "numerical-failure"
    return MarginSolution(
        margin=margin, assignment=assignment,
        iterations=int(iterations), status=status,
    )


@dataclass(eq=False)
class JsrBoundResult:
    """Certified growth-rate upper bound with its bisection history.

    trace lists every probed (rho, margin) pair in probe order; the bound
    is the smallest probed rho whose margin cleared the feasibility
    threshold, and certificate is that probe's assignment, re-verified.
    """

    rho_upper: float
    certificate: QuadraticCertificate
    trace: tuple
    tolerance: float

    def to_json(self):
        return {
            "rho_upper": float(self.rho_upper),
            "trace": [[float(r), float(m)] for r, m in self.trace],
            "certificate": self.certificate.to_json(),
        }


def jsr_upper_bound(graph, system, tol=1e-4, require_path_complete=True,
                    unknown_cap=None):
    """Bisect for the smallest rho whose margin program is feasible on `graph`.

    Seeds: the largest single-mode spectral radius from below (no single
    mode can be beaten), the largest single-mode 2-norm (padded 1%) from
    above (a common identity certificate works there).  The upper seed is
    widened up to 8 times if its probe is infeasible.  Raises
    NotPathCompleteError on graphs with unreadable words unless
    `require_path_complete` is False, in which case it warns and bounds
    only what the graph reads.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    witness = find_unreadable_word(graph)
    if witness is not None:
        if require_path_complete:
            raise NotPathCompleteError(witness)
        warnings.warn(
            "graph is not path-complete; the bound only constrains "
            "switching sequences the graph can read",
            UserWarning,
            stacklevel=2,
        )

    trace = []
    best = [None]

    def probe(rho):
        sol = solve_margin(assemble_lmi(graph, system, rho),
                           unknown_cap=unknown_cap)
        if sol.status == "numerical-failure":
            raise NumericalError(f"margin solve broke down at rate {rho}")
        trace.append((float(rho), float(sol.margin)))
        feasible = sol.margin > FEASIBILITY_THRESHOLD
        if feasible and (best[0] is None or rho < best[0][0]):
            best[0] = (float(rho), sol)
        return feasible

    modes = [system.modes[sym] for sym in system.alphabet]
    lo = max(max(abs(np.linalg.eigvals(a))) for a in modes)
    hi = 1.01 * max(np.linalg.norm(a, 2) for a in modes)
    hi = max(hi, tol)

    widened = 0
    while not probe(hi):
        widened += 1
        if widened > _WIDEN_LIMIT:
            raise NumericalError(
                f"no feasible rate found up to {hi}; the margin solver "
                "never produced a positive margin"
            )
        lo = hi
        hi *= 2.0

    steps = 0
    while hi - lo > tol:
        steps += 1
        if steps > _BISECT_LIMIT:
            raise NumericalError("bisection failed to narrow the bracket")
        mid = 0.5 * (lo + hi)
        if probe(mid):
            hi = mid
        else:
            lo = mid

    rho_upper, solution = best[0]
    cert = QuadraticCertificate(graph, solution.assignment, rho_upper)
    report = verify_certificate(cert, system)
    if not report.ok:
        raise NumericalError(
            "certificate from the smallest feasible probe failed "
            "independent verification"
        )
    cert = QuadraticCertificate(
        graph, solution.assignment, rho_upper, margin=report.margin
    )
    return JsrBoundResult(
        rho_upper=rho_upper,
        certificate=cert,
        trace=tuple(trace),
        tolerance=float(tol),
    )

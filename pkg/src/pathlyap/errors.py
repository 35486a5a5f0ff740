"""Shared exceptions and resource caps.

All potentially exponential constructions (subset exploration,
determinization, word enumeration) carry a state cap and abort with
:class:`ResourceLimitError` instead of hanging.  The environment variable
``PATHLYAP_STATE_CAP`` overrides the default caps globally.
"""

import os

STATE_CAP_ENV = "PATHLYAP_STATE_CAP"

DEFAULT_SUBSET_CAP = 1 << 20
DEFAULT_DETERMINIZE_CAP = 1 << 16
DEFAULT_WORD_CAP = 1 << 20
DEFAULT_UNKNOWN_CAP = 64


class ResourceLimitError(RuntimeError):
    """A configured state, word, or size cap was exceeded."""


class NumericalError(RuntimeError):
    """The numerical layer could not produce a trustworthy result."""


class InvariantViolation(RuntimeError):
    """An internally guaranteed structural property failed at runtime."""


class NotPathCompleteError(ValueError):
    """An operation required a path-complete graph and got evidence otherwise.

    ``witness`` is a word with no reading path, most recent symbol first;
    reverse it to obtain trajectory (reading) order.
    """

    def __init__(self, witness):
        self.witness = tuple(witness)
        shown = ",".join(self.witness) if self.witness else "(empty)"
        super().__init__(f"not path-complete: word [{shown}] has no reading path")


def state_cap(explicit=None, default=DEFAULT_SUBSET_CAP):
    """Resolve a cap: explicit argument, else env override, else default."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(STATE_CAP_ENV)
    if env:
        return int(env)
    return default

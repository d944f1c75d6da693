"""Exception hierarchy.

Three families matter to callers (and to the CLI exit codes):

* ``PreconditionError``: the inputs break an operation's contract
  (out-of-range vertex, r not dividing n, a set that is not a clique, ...).
* ``HypothesisError``: a proof-following algorithm hit a step whose
  success is guaranteed only under the lemma's hypotheses (degree slack,
  template-freeness).  It names the step and carries a JSON-friendly witness.
* ``NoTilingError`` / ``SolverExhaustedError``: tiling search outcomes.
"""

from __future__ import annotations

from typing import Any


class TilescopeError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(TilescopeError, ValueError):
    """An operation was called outside its contract."""


class HypothesisError(TilescopeError):
    """A step that the hypotheses guarantee could not be carried out."""

    def __init__(self, step: str, message: str, witness: dict[str, Any] | None = None):
        super().__init__(f"{step}: {message}")
        self.step = step
        self.message = message
        self.witness = dict(witness or {})

    def to_json(self) -> dict[str, Any]:
        return {"error": "hypothesis-violation", "step": self.step,
                "message": self.message, "witness": _jsonable(self.witness)}


class NoTilingError(TilescopeError, LookupError):
    """The graph provably has no K_r-tiling (search space exhausted)."""


class SolverExhaustedError(TilescopeError, RuntimeError):
    """Randomized search gave up after its restart budget."""


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(x) for x in items]
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    return str(obj)

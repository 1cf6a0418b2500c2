"""Deterministic desk-scale simulator for decentralized three-robot collaboration.

The heavy lifting lives in the compiled extension; this package re-exports
its operations. Structured values (scenarios, world states, actions,
feedback, results) cross the boundary as plain dicts and lists in the same
JSON encoding used by scenario files and episode logs.
"""

try:
    from ._crewsim import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # pragma: no cover - in-tree test layout
    from _crewsim import *  # noqa: F401,F403

__all__ = [
    "load_scenario",
    "validate_scenario",
    "instantiate_task",
    "plan_path",
    "evaluate",
    "parse_action",
    "render_feedback",
    "run_episode",
    "run_grid",
    "replay",
]

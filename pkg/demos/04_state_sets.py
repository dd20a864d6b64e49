"""
Reversibility over a set of states
==================================

The same action can be undoable on some states and not on all of them.
"""

from striprev.formula import ByFormula, Explicit, Universe, parse_formula
from striprev.reversibility import SearchConfig, decide_in_task, decide_over_set
from striprev.strips import Domain, PlanningTask

d = Domain("example1", ["f"], [("del-f", {"f"}, (), {"f"}), ("add-f", (), {"f"}, ())])
cfg = SearchConfig(horizon=1)

# only states where f is false: add-f is then undone by del-f
phi = parse_formula("(not f)", d)
print(decide_over_set("add-f", d, ByFormula(phi), cfg).witness_names())

# over every state it is not
print(decide_over_set("add-f", d, Universe(), cfg).status.value)

# an explicit list works the same way
print(decide_over_set("add-f", d, Explicit([d.state()]), cfg).status.value)

# reachable states of a task; bounded search leaves it open,
# the belief-space closure settles it
task = PlanningTask.create(d, {"f"})
print(decide_in_task("add-f", task, SearchConfig(horizon=2)).status.value)
print(decide_in_task("add-f", task, SearchConfig(horizon=2, closure=True)).status.value)

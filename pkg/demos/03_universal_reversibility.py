"""
Universal reverse plans
=======================

Which actions can be undone from every state, and by what plan?
"""

from striprev.benchgen import rev_domain
from striprev.reversibility import SearchConfig, decide_universal

d = rev_domain(2)

# exact mode: plans of length exactly 2
cfg = SearchConfig(horizon=2, exact=True)
for a in d.actions:
    v = decide_universal(a, d, cfg)
    print(f"{a.name:8} {v.status.value:24} {v.witness_names()}")
    for note in v.notes:
        print("         ", note.message)

# add-f0 touches f0 without requiring it, so nothing can undo it everywhere.
# At horizon 1 del-all has no plan yet, but one exists at length 2.
print(decide_universal("del-all", d, SearchConfig(horizon=1)).notes[0].message)

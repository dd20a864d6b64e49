"""
STRIPS states and actions
=========================

A tiny domain with one fact and two actions, built directly in Python.
"""

from striprev.strips import Domain, apply, apply_sequence, is_applicable

# one fact, one action that removes it and one that puts it back
d = Domain("example1", ["f"], [
    ("del-f", {"f"}, (), {"f"}),
    ("add-f", (), {"f"}, ()),
])

s = d.state({"f"})
print("start:", s)

# del-f needs f, so it applies here
print("del-f applicable:", is_applicable(d.action("del-f"), s))
t = apply(d.action("del-f"), s)
print("after del-f:", t)

# a whole plan is applied left to right
print("after del-f, add-f:", apply_sequence(d.plan("del-f", "add-f"), s))

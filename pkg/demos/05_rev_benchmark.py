"""
The rev-i benchmark
===================

del-all in rev-i has exactly one reverse plan of length i and none shorter.
This runs both checks for growing i, natively and (if clingo is present)
through the simple ASP encoding.
"""

import time

from striprev.benchgen import rev_domain
from striprev.encodings import emit, extract_plans, run_external_solver
from striprev.errors import SolverNotFound
from striprev.reversibility import SearchConfig, decide_universal

for i in [1, 2, 3, 4, 5, 6, 10, 20, 30]:
    d = rev_domain(i)
    t0 = time.perf_counter()
    found = decide_universal("del-all", d, SearchConfig(horizon=i, exact=True, max_plans=100))
    shorter = decide_universal("del-all", d, SearchConfig(horizon=i - 1))
    ms = (time.perf_counter() - t0) * 1000
    print(f"rev-{i:<3} plans at {i}: {len(found.witnesses)}  "
          f"below {i}: {shorter.status.value}  {ms:.1f} ms")

# the same question for a solver, on the small instances
try:
    for i in range(1, 5):
        prog = emit("simple-asp", rev_domain(i), i)
        print(f"clingo rev-{i}:", extract_plans(run_external_solver(prog)))
except SolverNotFound as exc:
    print("skipping solver runs:", exc)

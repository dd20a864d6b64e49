"""
From PDDL to plasp facts
========================

Parse a STRIPS domain and print the ASP facts the encodings consume.
"""

from striprev.pddl import emit_plasp_facts, parse_domain, pretty_print

text = """
(define (domain rev-2)
  (:requirements :strips)
  (:predicates (f0) (f1))
  (:action del-all :precondition (and (f0) (f1)) :effect (and (not (f0)) (not (f1))))
  (:action add-f0 :effect (f0))
  (:action add-f1 :precondition (f0) :effect (f1)))
"""

d = parse_domain(text)
print(d.facts, [a.name for a in d.actions])

# canonical layout, the same one the benchmark generator writes
print(pretty_print(d))

# one ASP rule per line
print(emit_plasp_facts(d).text())

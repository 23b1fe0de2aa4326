"""
Distillation Bounded Context.

Scale partitioning, topology distillation between class prototypes, and
response distillation between corresponding teacher and student queries.
"""

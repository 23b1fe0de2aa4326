"""
Benchmark Bounded Context.

Task schedules, per-stage training sets with old-class annotations removed,
and Only-Old / Only-New / Co-occurrence statistics.
"""

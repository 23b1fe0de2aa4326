"""
Detection Loss Bounded Context.

Query-to-target matching, the set prediction loss and the combined
incremental training objective.
"""

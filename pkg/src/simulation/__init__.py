"""
Simulation Bounded Context.

Synthetic query-feature world, a trainable linear detection head and the
staged incremental training loop used for the ablation of loss components.
"""

"""
Shared domain layer.

Box geometry, box-delta regression and the detection records exchanged
between contexts. Pure numpy, no I/O.
"""

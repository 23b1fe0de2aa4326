"""
Shared Bounded Context.

Boxes, detections, annotations, query batches and the COCO dataset model,
plus the run configuration every other context reads from.
"""

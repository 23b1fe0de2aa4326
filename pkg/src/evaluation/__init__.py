"""
Evaluation Bounded Context.

COCO-protocol AP, scale-stratified AP and the previous/current/all class
group metrics of incremental detection.
"""

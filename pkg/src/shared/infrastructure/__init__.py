"""
Infrastructure layer for shared bounded context.

Configuration loading, COCO and detection-stream persistence, and the
injector module every other context builds on.
"""

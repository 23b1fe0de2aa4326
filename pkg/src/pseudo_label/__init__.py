"""
Pseudo-label Bounded Context.

Per-class score banks over teacher confidences, exact two-cluster
thresholding, pseudo-label selection and de-duplication against ground truth.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class LossBreakdown:
    """
    Components of the incremental detection objective.

    total = detr + lambda1 * std + crd, with crd = align + reg when the
    response term is itemised.

    Attributes:
        detr: Set-prediction detection loss
        std: Topology distillation loss (unweighted)
        crd: Response distillation loss
        total: Weighted sum
        align: Classification part of crd
        reg: Box part of crd
        lambda1: Weight applied to std
    """

    detr: float
    std: float
    crd: float
    total: float
    align: float = 0.0
    reg: float = 0.0
    lambda1: float = 3.0

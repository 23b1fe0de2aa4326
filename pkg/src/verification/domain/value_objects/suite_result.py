from dataclasses import dataclass


@dataclass(frozen=True)
class SuiteResult:
    """
    Outcome of one gradient suite over its seeded instances.

    Attributes:
        name: Suite name (std, crd_align, crd_reg, detr)
        instances: Number of random instances checked
        max_error: Largest relative error seen
        worst_seed: Seed of the instance with the largest error
        tolerance: Pass threshold on the relative error
    """

    name: str
    instances: int
    max_error: float
    worst_seed: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance

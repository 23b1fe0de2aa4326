from dataclasses import dataclass

from src.simulation.domain.exceptions import InvalidWorldConfigError


@dataclass(frozen=True)
class WorldConfig:
    """
    Synthetic query-feature world.

    Each class has one feature center on a sphere of radius class_radius;
    each (class, scale bucket) pair adds its own offset of length
    scale_spread * class_radius, so the same class looks different at
    different sizes. Classes of later tasks are blended with a paired
    earlier class (task_similarity) to make them confusable.

    Attributes:
        classes_per_task: Number of classes introduced by each task
        feature_dim: Embedding dimension D
        class_radius: Distance of class centers from the origin
        scale_spread: Relative length of the per-bucket offsets
        margin: Minimum distance between any two (class, bucket) means
        noise: Standard deviation of query features around their mean
        task_similarity: Share of a new class center taken from its paired old class
        queries_per_image: Decoder queries per image
        max_objects_per_image: Upper bound of objects in one image
        images_per_stage: Training images per stage
        eval_images_per_task: Fully annotated test images per task
        cooccurrence_rate: Share of later-stage training images that also hold old objects
        image_size: Square image side in pixels
        image_feature_size: Side of the global image feature map
        box_jitter: Relative jitter of query reference boxes around their objects
        seed: Root of every random stream
    """

    classes_per_task: tuple[int, ...] = (5, 5)
    feature_dim: int = 16
    class_radius: float = 3.0
    scale_spread: float = 0.5
    margin: float = 1.0
    noise: float = 0.25
    task_similarity: float = 0.5
    queries_per_image: int = 10
    max_objects_per_image: int = 3
    images_per_stage: int = 160
    eval_images_per_task: int = 60
    cooccurrence_rate: float = 0.5
    image_size: int = 512
    image_feature_size: int = 4
    box_jitter: float = 0.05
    seed: int = 17

    def __post_init__(self) -> None:
        if not self.classes_per_task or any(n < 1 for n in self.classes_per_task):
            raise InvalidWorldConfigError("Every task needs at least one class")
        if self.max_objects_per_image > self.queries_per_image:
            raise InvalidWorldConfigError(
                "max_objects_per_image cannot exceed queries_per_image"
            )
        if not 0.0 <= self.cooccurrence_rate <= 1.0:
            raise InvalidWorldConfigError(
                f"cooccurrence_rate must lie in [0, 1], got {self.cooccurrence_rate}"
            )
        if not 0.0 <= self.task_similarity < 1.0:
            raise InvalidWorldConfigError(
                f"task_similarity must lie in [0, 1), got {self.task_similarity}"
            )
        if self.image_size < 128:
            raise InvalidWorldConfigError("image_size must be at least 128 pixels")

    @property
    def num_tasks(self) -> int:
        return len(self.classes_per_task)

    @property
    def num_classes(self) -> int:
        return sum(self.classes_per_task)

    def task_classes(self, task: int) -> tuple[int, ...]:
        """Class ids introduced by a 1-based task; ids are contiguous from 0."""
        start = sum(self.classes_per_task[: task - 1])
        return tuple(range(start, start + self.classes_per_task[task - 1]))

from injector import Module, provider, singleton

from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.shared.infrastructure.config.run_config import RunConfig


class DetectionLossModule(Module):
    """Provides SetLossConfig from the [loss] section."""

    @singleton
    @provider
    def provide_set_loss_config(self, config: RunConfig) -> SetLossConfig:
        loss = config.loss
        return SetLossConfig(
            focal_alpha=loss.focal_alpha,
            focal_gamma=loss.focal_gamma,
            cost_class=loss.cost_class,
            cost_bbox=loss.cost_bbox,
            cost_giou=loss.cost_giou,
            bbox_l1_weight=loss.bbox_l1_weight,
            bbox_giou_weight=loss.bbox_giou_weight,
            pseudo_weight=loss.pseudo_weight,
            lambda1=loss.lambda1,
        )

"""
Standard remote-sensing incremental schedules.

DIOR-IOD uses 20 categories split 10+10 (two-step) or 5+5+5+5 (multi-step);
DOTA-IOD uses 15 categories split 5+5+5.
"""

from src.benchmark.domain.value_objects.named_schedule import NamedSchedule

DIOR_10_10 = NamedSchedule(
    name="dior-10+10",
    stages=(
        (
            "airplane",
            "airport",
            "bridge",
            "service-area",
            "toll-station",
            "harbor",
            "overpass",
            "ship",
            "trainstation",
            "vehicle",
        ),
        (
            "baseballfield",
            "basketballcourt",
            "chimney",
            "dam",
            "golffield",
            "groundtrackfield",
            "stadium",
            "storagetank",
            "tenniscourt",
            "windmill",
        ),
    ),
)

DIOR_5_5_5_5 = NamedSchedule(
    name="dior-5+5+5+5",
    stages=(
        ("airplane", "airport", "bridge", "service-area", "toll-station"),
        ("baseball field", "basketball court", "golf field", "chimney", "dam"),
        ("ground track field", "stadium", "storage tank", "tennis court", "windmill"),
        ("harbor", "overpass", "ship", "train station", "vehicle"),
    ),
)

DOTA_5_5_5 = NamedSchedule(
    name="dota-5+5+5",
    stages=(
        ("small-vehicle", "large-vehicle", "plane", "baseball-diamond", "ground-track-field"),
        ("helicopter", "ship", "bridge", "soccer-ball-field", "tennis-court"),
        ("storage-tank", "harbor", "roundabout", "basketball-court", "swimming-pool"),
    ),
)


def schedule_presets() -> dict[str, NamedSchedule]:
    return {s.name: s for s in (DIOR_10_10, DIOR_5_5_5_5, DOTA_5_5_5)}

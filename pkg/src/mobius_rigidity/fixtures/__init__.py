"""Shipped configuration fixtures (the counterexamples and a few reference layouts)."""

import json
from importlib import resources

NAMES = (
    "example1_sector_narrow",
    "example1_sector_wide",
    "example2_a",
    "example2_b",
    "example3_square",
    "example3_rectangle",
    "coaxial",
    "concentric",
    "generic4",
    "triangle_points",
    "circle_points",
)


def path(name):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__name__).joinpath(f"{name}.json")


def load_dict(name):
    return json.loads(path(name).read_text())


def load(name):
    from ..configio import load_config

    return load_config(load_dict(name))

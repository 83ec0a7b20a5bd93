import json

from ._core import (
    MosaicError,
    euler_from_rotation,
    pitch_track,
    report,
    rotation_from_euler,
    t_test,
    validate,
)
from . import _core

__all__ = [
    "MosaicError",
    "analyze",
    "cohort",
    "euler_from_rotation",
    "pitch_track",
    "report",
    "rotation_from_euler",
    "synth",
    "t_test",
    "validate",
]


def analyze(bundle, only=(), sort_repair=False):
    return json.loads(_core.analyze_json(str(bundle), list(only), sort_repair))


def cohort(directory):
    return json.loads(_core.cohort_json(str(directory)))


def synth(out, seed=42, profile="easy", audio=True):
    return json.loads(_core.synth_json(str(out), seed, profile, audio))

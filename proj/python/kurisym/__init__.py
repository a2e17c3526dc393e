"""Kurihara numbers, structure bounds and Heegner-side predictions."""

import json

from . import _kurisym
from ._kurisym import KurisymError, __version__, parse_curve

__all__ = ["KurisymError", "__version__", "parse_curve", "analyze", "sweep", "heegner"]


def analyze(curve, p, **kw):
    return json.loads(_kurisym.analyze(curve, p, **kw))


def sweep(curve, p, **kw):
    return json.loads(_kurisym.sweep(curve, p, **kw))


def heegner(curve, p, disc, **kw):
    return json.loads(_kurisym.heegner(curve, p, disc, **kw))

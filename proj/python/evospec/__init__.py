"""Local spectral estimation for locally stationary time series.

Results are plain dicts mirroring the command-line JSON documents, with
surfaces and bands converted to numpy arrays of shape (len(u), len(theta)).
"""

import json

import numpy as np

from . import _core
from ._core import NumericError, __version__, presets

__all__ = [
    "NumericError",
    "estimate",
    "fit_tvarma",
    "mv_select",
    "presets",
    "scr",
    "simulate",
    "test",
]


def _grid_shape(doc):
    grid = doc["grid"]
    return len(grid["u"]), len(grid["theta"])


def _load(text, surfaces=()):
    doc = json.loads(text)
    if "grid" in doc:
        shape = _grid_shape(doc)
        for key in surfaces:
            doc["payload"][key] = np.asarray(doc["payload"][key], dtype=float).reshape(shape)
    return doc


def _series(x):
    return np.ascontiguousarray(x, dtype=float).ravel().tolist()


def estimate(x, n=None, B=None, **kw):
    return _load(_core.estimate(_series(x), n, B, **kw), ("values",))


def scr(x, n=None, B=None, **kw):
    return _load(_core.scr(_series(x), n, B, **kw), ("lower", "upper", "center"))


def test(x, null, n=None, B=None, **kw):
    return _load(_core.test(_series(x), null, n, B, **kw), ("estimate", "null_surface"))


def mv_select(x, rule="n-over-log-n"):
    return json.loads(_core.mv_select(_series(x), rule))


def simulate(model, N, seed, delta=0.0, stream=0):
    if isinstance(model, dict):
        model = json.dumps(model)
    return np.asarray(_core.simulate(model, N, seed, delta, stream))


def fit_tvarma(x, p, q, **kw):
    return json.loads(_core.fit_tvarma(_series(x), p, q, **kw))

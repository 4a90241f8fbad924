"""Predictor specifications, fitted models and the shared ``fit`` entry point."""

from __future__ import annotations

import numpy as np

from ..data import LiftedCovariate, STAR, is_star, training_arrays


class FittedPredictor:
    """A trained regression function on flattened lifted covariates.

    Subclasses implement :meth:`predict_array`.
    """

    n_features: int
    n_outputs: int

    def predict_array(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, x):
        """Predict at one lifted covariate; dummies map to :data:`STAR`."""
        if is_star(x):
            return STAR
        if isinstance(x, LiftedCovariate):
            x = x.flat()
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n_features,):
            raise ValueError(
                f"covariate has shape {x.shape}, model expects ({self.n_features},)"
            )
        return self.predict_array(x[None, :])[0]


class DummyPredictor(FittedPredictor):
    """Output of training on no concrete points: predicts the dummy everywhere."""

    n_features = None
    n_outputs = None

    def predict(self, x):
        return STAR

    def predict_array(self, X):
        return None

    def __repr__(self):
        return "DummyPredictor()"


class PredictorSpec:
    """Base class for the hyperparameter records.

    Subclasses are frozen dataclasses implementing ``_fit(X, Y, rng_seed)``.
    """

    kind: str = ""

    def _fit(self, X, Y, rng_seed) -> FittedPredictor:
        raise NotImplementedError

    @property
    def label(self) -> str:
        return format_spec(self)


def fit(spec: PredictorSpec, data, rng_seed: int = 0) -> FittedPredictor:
    """Train ``spec`` on the concrete points of ``data``.

    ``data`` is a :class:`LiftedSequence`, a list of points/dummies, or a
    ``(features, responses)`` pair of arrays.
    """
    if isinstance(data, tuple):
        X, Y = (np.asarray(a, dtype=float) for a in data)
        if Y.ndim == 1:
            Y = Y[:, None]
    else:
        X, Y = training_arrays(data)
    return fit_arrays(spec, X, Y, rng_seed)


def fit_arrays(spec: PredictorSpec, X, Y, rng_seed: int = 0) -> FittedPredictor:
    if len(X) == 0:
        return DummyPredictor()
    return spec._fit(X, Y, rng_seed)


def canonical_order(X, Y) -> np.ndarray:
    """Row permutation sorting ``(X, Y)`` lexicographically.

    Used by the order-sensitive learners so that any permutation of the
    training set yields bit-identical fits.
    """
    keys = np.hstack([X, Y])
    return np.lexsort(keys.T[::-1])


# -- spec registry / (de)serialization ------------------------------------

_REGISTRY: dict[str, type] = {}


def register(cls):
    _REGISTRY[cls.kind] = cls
    return cls


def format_spec(spec) -> str:
    """Compact ``kind:arg:arg`` string, e.g. ``knn:10`` or ``count:tree:5:2``."""
    from dataclasses import fields

    parts = [spec.kind]
    for f in fields(spec):
        v = getattr(spec, f.name)
        if isinstance(v, PredictorSpec):
            parts.append(format_spec(v))
        elif f.metadata.get("positional", True):
            parts.append(f"{v:g}" if isinstance(v, float) else str(v))
    return ":".join(parts)


def parse_spec(text: str) -> PredictorSpec:
    """Inverse of :func:`format_spec`; trailing arguments may be omitted."""
    from dataclasses import fields

    kind, _, rest = text.strip().partition(":")
    if kind not in _REGISTRY:
        raise ValueError(f"unknown predictor kind {kind!r}")
    cls = _REGISTRY[kind]
    if kind == "count":
        if not rest:
            raise ValueError("count predictor needs a base, e.g. count:knn:10")
        return cls(parse_spec(rest))
    args = [a for a in rest.split(":") if a] if rest else []
    flds = [f for f in fields(cls) if f.metadata.get("positional", True)]
    if len(args) > len(flds):
        raise ValueError(f"too many arguments for {kind}: {text!r}")
    kwargs = {f.name: _cast(f, a) for f, a in zip(flds, args)}
    return cls(**kwargs)


def _cast(f, a):
    t = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", "")
    if "bool" in t:
        return a.lower() in ("1", "true", "yes")
    if "int" in t:
        return int(a)
    return float(a)


def spec_to_dict(spec) -> dict:
    from dataclasses import fields

    out = {"kind": spec.kind}
    for f in fields(spec):
        v = getattr(spec, f.name)
        out[f.name] = spec_to_dict(v) if isinstance(v, PredictorSpec) else v
    return out


def spec_from_dict(d) -> PredictorSpec:
    if isinstance(d, str):
        return parse_spec(d)
    d = dict(d)
    kind = d.pop("kind")
    if kind not in _REGISTRY:
        raise ValueError(f"unknown predictor kind {kind!r}")
    if "base" in d:
        d["base"] = spec_from_dict(d["base"])
    return _REGISTRY[kind](**d)



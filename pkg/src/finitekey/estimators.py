"""scikit-learn style front end to the rate engine.

Both estimators are stateless: ``fit`` only validates the hyper-parameters,
and every row of ``X`` is optimized independently. They compose with
``Pipeline``, ``clone`` and ``get_params``/``set_params``.

>>> from finitekey.estimators import KeyRateEstimator
>>> est = KeyRateEstimator(protocol="bb84", bound="min").fit([[0.01, 1e5]])
>>> float(est.predict([[0.01, 1e5]])[0]) > 0
True
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_q, check_qn, make_protocol
from .engine import (
    DEFAULT_EPS,
    DEFAULT_EPS_EC,
    DEFAULT_LEAK_FACTOR,
    Bound,
    LeakAt,
    YieldKind,
    find_threshold_n0,
    optimize_rate,
)
from .exceptions import ThresholdNotFoundError

__all__ = ["KeyRateEstimator", "ThresholdEstimator"]

RATE_FEATURES = (
    "rate", "n", "m", "entropy_term", "delta", "leak", "pa_term",
    "q_eff", "xi", "q_key", "eps_pe", "eps_pa", "eps_bar",
)


class _EngineParams(BaseEstimator):
    def __init__(self, protocol="bb84", dimension=2, bound="vn", pe="cpovm",
                 yield_model="paper", eps=DEFAULT_EPS, eps_ec=DEFAULT_EPS_EC,
                 leak_factor=DEFAULT_LEAK_FACTOR, leak_at="worst-case"):
        self.protocol = protocol
        self.dimension = dimension
        self.bound = bound
        self.pe = pe
        self.yield_model = yield_model
        self.eps = eps
        self.eps_ec = eps_ec
        self.leak_factor = leak_factor
        self.leak_at = leak_at

    def _validate_params(self):
        self.protocol_ = make_protocol(self.protocol, self.dimension, self.pe)
        self.bound_ = Bound(self.bound)
        self.yield_model_ = YieldKind(self.yield_model)
        self.leak_at_ = LeakAt(self.leak_at)
        if not 0 < self.eps_ec < self.eps:
            raise ValueError(f"need 0 < eps_ec < eps, got {self.eps_ec}, {self.eps}")
        if not self.leak_factor > 0:
            raise ValueError("leak_factor must be positive")

    def _engine_kwargs(self):
        return dict(eps_total=self.eps, eps_ec=self.eps_ec, model=self.yield_model_,
                    leak_factor=self.leak_factor, leak_at=self.leak_at_)


class KeyRateEstimator(TransformerMixin, _EngineParams):
    """Optimized finite-key rate for rows of ``[Q, N]``.

    Parameters
    ----------
    protocol : {"bb84", "six-state", "d-bases"}
    dimension : int
        Prime dimension; values above 2 select the (d+1)-basis family.
    bound : {"vn", "min"}
        Von Neumann bound with finite-size correction, or min-entropy bound.
    pe : {"ipovm", "cpovm"}
        Parameter-estimation scheme.
    yield_model : {"paper", "per-basis"}
    eps, eps_ec : float
        Total security parameter and the fixed error-correction share.
    leak_factor : float
        Leakage is ``leak_factor * h_d(Q)`` per sifted symbol.
    leak_at : {"worst-case", "measured"}

    Attributes
    ----------
    protocol_ : ProtocolSpec
    n_features_in_ : int
    """

    def fit(self, X=None, y=None):
        self._validate_params()
        if X is not None:
            check_qn(X, self.protocol_)
        self.n_features_in_ = 2
        return self

    def breakdowns(self, X):
        """Optimized :class:`RateBreakdown` and parameters for every row."""
        check_is_fitted(self, "protocol_")
        X = check_qn(X, self.protocol_)
        return [optimize_rate(self.bound_, self.protocol_, float(Q), float(N),
                              **self._engine_kwargs()) for Q, N in X]

    def transform(self, X):
        out = []
        for res in self.breakdowns(X):
            b, params = res
            row = b.to_dict()
            row.update(params)
            out.append([row[k] for k in RATE_FEATURES])
        return np.asarray(out, dtype=float).reshape(-1, len(RATE_FEATURES))

    def predict(self, X):
        return np.array([res.best.rate for res in self.breakdowns(X)])

    def get_feature_names_out(self, input_features=None):
        return np.asarray(RATE_FEATURES, dtype=object)


class ThresholdEstimator(_EngineParams):
    """Threshold signal number ``N0`` for a column of error rates.

    ``predict`` returns ``N0``; ``transform`` returns ``[N0, N0 * log2 d]``.
    Error rates without a positive rate below ``n_ceiling`` give ``inf``.
    """

    def __init__(self, protocol="bb84", dimension=2, bound="vn", pe="cpovm",
                 yield_model="paper", eps=DEFAULT_EPS, eps_ec=DEFAULT_EPS_EC,
                 leak_factor=DEFAULT_LEAK_FACTOR, leak_at="worst-case", n_ceiling=1e16):
        super().__init__(protocol, dimension, bound, pe, yield_model, eps, eps_ec,
                         leak_factor, leak_at)
        self.n_ceiling = n_ceiling

    def fit(self, X=None, y=None):
        self._validate_params()
        if X is not None:
            check_q(X, self.protocol_)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "protocol_")
        out = []
        for Q in check_q(X, self.protocol_):
            try:
                out.append(find_threshold_n0(self.bound_, self.protocol_, float(Q),
                                             n_ceiling=self.n_ceiling, **self._engine_kwargs()))
            except ThresholdNotFoundError:
                out.append((np.inf, np.inf))
        return np.asarray(out, dtype=float).reshape(-1, 2)

    def predict(self, X):
        return self.transform(X)[:, 0]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["N0", "N0_scaled"], dtype=object)

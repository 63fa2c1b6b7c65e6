"""scikit-learn style wrappers around the functional API.

``fit`` computes the traveling wave (and whatever depends only on it);
``transform`` maps spectral parameters to Evans values. Hyperparameters are
plain constructor arguments, so ``get_params``/``set_params``/``clone`` work.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_lambdas, check_positive
from .contour import ContourSpec, evaluate_contour, kato_extend, kato_init, make_contour
from .evans import evans_batch
from .hfbound import certified_radius
from .model import ModelParams, reference_shock
from .profile import coefficient_fields, compute_profile

__all__ = ["ProfileSolver", "EvansFunction", "HighFrequencyBound"]


class _ShockParams:
    def _model(self):
        return ModelParams(gamma=self.gamma, mu=self.mu, kappa=self.kappa, s=self.s)

    def _fit_wave(self):
        check_positive("L1", self.L1)
        check_positive("dy", self.dy)
        self.params_ = self._model()
        self.shock_ = reference_shock(self.P_plus, self.P_minus, self.params_)
        self.wave_ = compute_profile(self.shock_, self.params_, L1=self.L1, dy=self.dy)


class ProfileSolver(_ShockParams, BaseEstimator):
    """Compute the dispersive-shock profile; ``transform(y)`` samples ``R`` and ``U``."""

    def __init__(self, P_plus=0.6, P_minus=0.8, gamma=1.5, mu=1.0, kappa=np.sqrt(2.0),
                 s=1.0, L1=40.0, dy=0.1):
        self.P_plus = P_plus
        self.P_minus = P_minus
        self.gamma = gamma
        self.mu = mu
        self.kappa = kappa
        self.s = s
        self.L1 = L1
        self.dy = dy

    def fit(self, X=None, y=None):
        self._fit_wave()
        return self

    def transform(self, X):
        check_fitted(self, ["wave_"])
        x = np.asarray(X, dtype=float).ravel()
        R = np.interp(x, self.wave_.y, self.wave_.R)
        U = np.interp(x, self.wave_.y, self.wave_.U)
        return np.column_stack([R, U])


class EvansFunction(_ShockParams, TransformerMixin, BaseEstimator):
    """Evans function with Kato-continued initial data.

    ``transform`` accepts complex spectral parameters (or an ``(n, 2)`` array of
    real and imaginary parts) and returns complex values. Initial data at each
    node are continued from the real point ``anchor`` along straight rays, so
    all outputs share one analytic normalization.
    """

    def __init__(self, P_plus=0.6, P_minus=0.8, gamma=1.5, mu=1.0, kappa=np.sqrt(2.0),
                 s=1.0, L1=40.0, dy=0.1, anchor=10.0, rtol=1e-6, atol=1e-9):
        self.P_plus = P_plus
        self.P_minus = P_minus
        self.gamma = gamma
        self.mu = mu
        self.kappa = kappa
        self.s = s
        self.L1 = L1
        self.dy = dy
        self.anchor = anchor
        self.rtol = rtol
        self.atol = atol

    def fit(self, X=None, y=None):
        self._fit_wave()
        self.kato_minus_ = kato_init([self.anchor], "-", self.shock_, self.params_)
        self.kato_plus_ = kato_init([self.anchor], "+", self.shock_, self.params_)
        return self

    def _initial_data(self, lams):
        out = []
        for fam in (self.kato_minus_, self.kato_plus_):
            rs, mus = zip(*(kato_extend(fam, lam, self.shock_, self.params_, n_steps=400)
                            if lam != self.anchor else (fam.r[0], fam.mu[0]) for lam in lams))
            out.append((np.array(rs), np.array(mus)))
        return out

    def transform(self, X):
        check_fitted(self, ["wave_", "kato_minus_"])
        lams = check_lambdas(X)
        (rm, mm), (rp, mp) = self._initial_data(lams)
        E, _, _ = evans_batch(lams, self.wave_, self.params_, rm, rp, mm, mp,
                              rtol=self.rtol, atol=self.atol)
        return E

    def winding(self, spec: ContourSpec):
        """Evaluate a whole contour; returns the contour evaluation object."""
        check_fitted(self, ["wave_"])
        return evaluate_contour(make_contour(spec), self.wave_, self.shock_, self.params_,
                                rtol=self.rtol, atol=self.atol)


class HighFrequencyBound(_ShockParams, BaseEstimator):
    """Certified radius ``C``; ``fit`` stores the report in ``report_``."""

    def __init__(self, P_plus=0.6, P_minus=0.8, gamma=1.5, mu=1.0, kappa=np.sqrt(2.0),
                 s=1.0, L1=40.0, dy=0.1, y0=10.0):
        self.P_plus = P_plus
        self.P_minus = P_minus
        self.gamma = gamma
        self.mu = mu
        self.kappa = kappa
        self.s = s
        self.L1 = L1
        self.dy = dy
        self.y0 = y0

    def fit(self, X=None, y=None):
        self._fit_wave()
        fields = coefficient_fields(self.wave_, self.params_)
        self.report_ = certified_radius(self.wave_, fields, self.params_, y0=self.y0, dy=self.dy)
        self.C_ = self.report_.C
        return self

import numpy as np
import pytest
from scipy.special import j0
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from gelfand_schwarz.catalog import so2_pair
from gelfand_schwarz.estimators import GeneratorMap, SchwarzRegressor, SphericalSeries
from gelfand_schwarz.exceptions import DimensionError
from gelfand_schwarz.transform import bump

X = np.array([[0.3, -0.4], [1.0, 2.0], [0.0, 0.0], [-1.5, 0.5]])


def test_generator_map_transform():
    T = GeneratorMap("z2-r2").fit(X).transform(X)
    assert np.allclose(T, np.c_[X[:, 0] ** 2, X[:, 0] * X[:, 1], X[:, 1] ** 2])
    assert GeneratorMap(so2_pair()).fit_transform(X).shape == (4, 1)


def test_params_and_clone():
    est = SphericalSeries(pair="so2", xi=(0.6, 0.8), max_degree=20)
    assert est.get_params() == {"pair": "so2", "xi": (0.6, 0.8), "max_degree": 20}
    est.set_params(max_degree=12)
    c = clone(est)
    assert c.get_params()["max_degree"] == 12 and not hasattr(c, "table_")


def test_spherical_series_matches_bessel():
    est = SphericalSeries(pair="so2", xi=(0.6, 0.8), max_degree=30).fit()
    got = est.predict(X)
    assert np.max(np.abs(got - j0(np.linalg.norm(X, axis=1)))) < 1e-10
    assert est.coef_.shape == (16,)


def test_input_validation():
    with pytest.raises(NotFittedError):
        GeneratorMap().transform(X)
    with pytest.raises(DimensionError):
        GeneratorMap().fit().transform(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        GeneratorMap().fit().transform(np.array([[np.nan, 0.0]]))
    with pytest.raises(DimensionError):
        SphericalSeries(xi=(1.0, 0.0, 0.0)).fit()
    with pytest.raises(ValueError):
        SchwarzRegressor().fit()


def test_pipeline_composes():
    pipe = make_pipeline(GeneratorMap("so2"), StandardScaler())
    assert pipe.fit_transform(X).shape == (4, 1)


def test_schwarz_regressor_score():
    est = SchwarzRegressor(pair="so2", fhat=bump(2), quad_radius=1.0, quad_nodes=48).fit()
    pts = np.array([[0.2, 0.1], [1.0, -1.0], [0.0, 2.0]])
    assert est.score(pts) > -1e-6
    assert np.allclose(est.predict(pts), est.reference(pts), atol=1e-6)

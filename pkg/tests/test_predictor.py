import numpy as np
import pytest

from resteg import errors
from resteg.image_io import MapKind, QMap
from resteg.lattice import make_lattice, split
from resteg.predictor import predict_external, predict_interp, residuals


def test_constant_neighbourhood():
    img = np.full((4, 4), 10, dtype=np.uint8)
    _, qry, lat = split(img)
    pred = predict_interp(img, lat)
    assert np.all(pred == 10)
    assert np.all(residuals(qry, pred) == 0)


def test_corner_round_half_up():
    # corner query (0,3) of a 4x4 image has neighbours (0,2) and (1,3)
    img = np.zeros((4, 4), dtype=np.uint8)
    img[0, 2] = 10
    img[1, 3] = 11
    lat = make_lattice(4, 4)
    q = np.nonzero((lat.query_rows == 0) & (lat.query_cols == 3))[0][0]
    pred = predict_interp(img, lat)
    assert pred[q] == 11  # round_half_up(10.5)


def test_context_only_dependence():
    rng = np.random.default_rng(7)
    for _ in range(100):
        img = rng.integers(0, 256, (10, 12)).astype(np.uint8)
        lat = make_lattice(*img.shape)
        pred = predict_interp(img, lat)
        scrambled = img.copy()
        scrambled[lat.query_rows, lat.query_cols] = rng.integers(0, 256, lat.n_query)
        assert np.array_equal(predict_interp(scrambled, lat), pred)


def test_determinism():
    rng = np.random.default_rng(3)
    img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
    lat = make_lattice(16, 16)
    assert np.array_equal(predict_interp(img, lat), predict_interp(img, lat))


class TestExternal:
    def test_identity_map_gives_zero_residuals(self):
        rng = np.random.default_rng(5)
        img = rng.integers(0, 256, (6, 6)).astype(np.uint8)
        _, qry, lat = split(img)
        pred = predict_external(QMap(kind=MapKind.PREDICTION, values=img), lat)
        assert np.all(residuals(qry, pred) == 0)

    def test_gather(self):
        vals = np.array([[0, 100], [50, 0]], dtype=np.uint8)
        lat = make_lattice(2, 2)
        pred = predict_external(QMap(kind=MapKind.PREDICTION, values=vals), lat)
        assert pred.tolist() == [100, 50]

    def test_dim_mismatch(self):
        lat = make_lattice(4, 4)
        m = QMap(kind=MapKind.PREDICTION, values=np.zeros((3, 3), dtype=np.uint8))
        with pytest.raises(errors.DimMismatch):
            predict_external(m, lat)

    def test_wrong_kind(self):
        lat = make_lattice(2, 2)
        m = QMap(kind=MapKind.SCORE, values=np.zeros((2, 2), dtype=np.float32))
        with pytest.raises(errors.WrongKind):
            predict_external(m, lat)


class TestResiduals:
    def test_values(self):
        assert residuals(np.array([100]), np.array([98])).tolist() == [2]
        assert residuals(np.array([0]), np.array([255])).tolist() == [-255]

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        q = rng.integers(0, 256, 50)
        y = rng.integers(0, 256, 50)
        assert np.array_equal(y + residuals(q, y), q)

    def test_length_mismatch(self):
        with pytest.raises(errors.LengthMismatch):
            residuals(np.array([1, 2]), np.array([1]))

import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spqc.datasets import (
    make_star_dataset,
    make_step_dataset,
    point_in_star,
    star_polygon,
    write_dataset_csv,
)
from spqc.errors import ConfigurationError


def test_step_dataset_shape_and_plateaus():
    data = make_step_dataset(200, 2)
    assert data.xs.shape == data.ys.shape == (200,)
    assert data.xs[0] == 0.0 and data.xs[-1] == 1.0
    assert set(np.unique(data.ys)) == {-1.0, 1.0}
    assert data.ys[0] == 1.0
    interior = np.diff(data.ys[:-1])
    assert np.count_nonzero(interior) == 3
    assert abs(data.ys.mean()) <= 0.02
    # flips at x = 1/4, 1/2, 3/4
    flips = data.xs[1:-1][interior != 0]
    assert np.allclose(flips, [0.25, 0.5, 0.75], atol=1 / 199)


def test_step_dataset_is_periodic_including_the_endpoint():
    data = make_step_dataset(5, 1)
    assert list(data.ys) == [1, 1, -1, -1, 1]
    data = make_step_dataset(201, 2)
    assert np.array_equal(data.ys[:100], data.ys[100:200])
    assert data.ys[-1] == data.ys[0]


@pytest.mark.parametrize("kwargs", [dict(num_points=1), dict(periods=0), dict(domain=(1.0, 1.0))])
def test_step_dataset_validation(kwargs):
    with pytest.raises(ConfigurationError):
        make_step_dataset(**kwargs)


def test_star_polygon_geometry():
    poly = star_polygon(1.0, 0.4, 5)
    assert poly.shape == (10, 2)
    radii = np.hypot(poly[:, 0], poly[:, 1])
    assert np.allclose(radii[::2], 1.0) and np.allclose(radii[1::2], 0.4)
    assert np.allclose(poly[0], [0.0, 1.0])


@pytest.mark.parametrize("kwargs", [dict(inner_r=1.0, outer_r=0.5), dict(arms=1)])
def test_star_polygon_validation(kwargs):
    with pytest.raises(ConfigurationError):
        star_polygon(**kwargs)


def test_point_in_star_known_points():
    poly = star_polygon()
    assert point_in_star((0.0, 0.0), poly)
    assert point_in_star((0.0, 0.85), poly)  # inside the top arm
    assert not point_in_star((0.0, -0.8), poly)  # between the two bottom arms
    assert not point_in_star((0.95, 0.95), poly)


def test_boundary_points_count_as_inside():
    poly = star_polygon()
    assert point_in_star(poly[0], poly)
    mid = (poly[0] + poly[1]) / 2
    assert point_in_star(mid, poly)


def test_point_in_square():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    assert point_in_star((0.5, 0.5), square)
    assert not point_in_star((1.5, 0.5), square)
    assert point_in_star((1.0, 0.3), square)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(0, 1.5), phi=st.floats(0, 2 * math.pi))
def test_star_membership_brackets(r, phi):
    poly = star_polygon(0.9, 0.35)
    p = (r * math.cos(phi), r * math.sin(phi))
    if r < 0.35 * math.cos(math.pi / 5) - 1e-9:
        assert point_in_star(p, poly)  # inside the inner pentagon's incircle
    if r > 0.9 + 1e-9:
        assert not point_in_star(p, poly)


def test_star_dataset():
    data = make_star_dataset(40)
    assert data.points.shape == (1600, 2)
    assert set(np.unique(data.labels)) == {-1.0, 1.0}
    assert 0.15 < data.inside_fraction < 0.35
    assert np.array_equal(make_star_dataset(40).labels, data.labels)


def test_dataset_csv_round_trip(tmp_path):
    data = make_star_dataset(5)
    path = tmp_path / "star.csv"
    write_dataset_csv(path, data.points, data.labels)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x0", "x1", "label"]
    back = np.array(rows[1:], dtype=float)
    assert np.array_equal(back[:, :2], data.points)
    assert np.array_equal(back[:, 2], data.labels)

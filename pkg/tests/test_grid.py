import math

import numpy as np
import pytest

from swirlbound import SigmaSchedule, hollow, make_grid, parabolic, region_mask, sigma
from swirlbound.errors import (AxisIncludedError, EmptyRegionError, GridError,
                               GridTooCoarseError, RegionNotCoveredError)
from swirlbound.grid import interval_weights, time_weights


def test_spacing_of_unit_tenth_grid():
    g = make_grid(1, 4, -4, 4, 31, 81, False)
    assert g.dr == pytest.approx(0.1, abs=1e-15)
    assert g.dz == pytest.approx(0.1, abs=1e-15)
    assert g.r[7] == pytest.approx(1.7)
    assert g.z[0] == -4.0 and g.z[-1] == pytest.approx(4.0)


def test_periodic_grid_drops_the_image_node():
    g = make_grid(1, 4, -4, 4, 31, 80, True)
    assert g.dz == 0.1
    assert g.z[-1] == pytest.approx(3.9)
    assert not g.boundary[:, 0].any() or g.boundary[0, 0]
    assert g.boundary[1:-1].sum() == 0


def test_axis_is_rejected():
    with pytest.raises(AxisIncludedError):
        make_grid(0, 4, -4, 4, 31, 81)
    with pytest.raises(AxisIncludedError):
        make_grid(-1, 4, -4, 4, 31, 81)


def test_too_few_nodes():
    with pytest.raises(GridTooCoarseError):
        make_grid(1, 4, -4, 4, 4, 81)


@pytest.mark.parametrize("args", [(2, 1, -4, 4, 31, 81), (1, 4, 4, 4, 31, 81)])
def test_non_positive_extent(args):
    with pytest.raises(GridError):
        make_grid(*args)


def test_region_volume_matches_closed_form(fine_grid):
    # 2 pi * 8 * int_1^4 r dr = 120 pi
    m = region_mask(fine_grid, hollow(1, 4, 1))
    assert m.volume == pytest.approx(120 * math.pi, rel=1e-12)


def test_region_volume_off_node_boundaries():
    # region ends between nodes: the partial cells cost O(h**2)
    cyl = hollow(1.03, 3.97, 1)
    for n in (97, 193, 385):
        g = make_grid(0.9, 4.5, -4.5, 4.5, n, 2 * n + 47)
        assert abs(region_mask(g, cyl).volume - cyl.volume) < 15 * g.h ** 2


def test_nested_masks(fine_grid):
    outer = region_mask(fine_grid, hollow(1, 4, 1)).mask
    inner = region_mask(fine_grid, hollow(2, 3, 1)).mask
    assert np.all(outer[inner])
    assert inner.sum() < outer.sum()


def test_weights_are_non_negative(fine_grid):
    assert np.all(region_mask(fine_grid, hollow(1.5, 3.5, 0.7)).weights >= 0)


def test_disjoint_region_is_empty():
    g = make_grid(1, 4, -4, 4, 31, 81)
    with pytest.raises(EmptyRegionError):
        region_mask(g, hollow(5, 6, 1))


def test_partial_overlap_needs_clipping():
    g = make_grid(1, 4, -4, 4, 31, 81)
    with pytest.raises(RegionNotCoveredError):
        region_mask(g, hollow(0.1, 10, 0.5))
    m = region_mask(g, hollow(0.1, 10, 0.5), clip=True)
    # kept: pi (16 - 1) * 8 of pi (25 - 0.0025) * 10
    assert m.clipped_fraction == pytest.approx(1 - 15 * 8 / (24.9975 * 10), rel=1e-12)


def test_interval_weights_partial_cells():
    x = np.linspace(0, 1, 11)
    inside, w = interval_weights(x, 0.23, 0.81)
    assert np.sum(w) == pytest.approx(0.58, abs=1e-14)
    # 0.2 sits outside but its cell holds [0.23, 0.25]; 0.8 holds [0.75, 0.81]
    assert w[2] == pytest.approx(0.02) and w[8] == pytest.approx(0.06)
    assert not inside[2] and inside[8] and not inside[9] and w[9] == 0
    err = np.sum(w * x) - (0.81 ** 2 - 0.23 ** 2) / 2
    assert err == pytest.approx(0.02 * (0.2 - 0.24) + 0.06 * (0.8 - 0.78), abs=1e-14)


def test_interval_weights_grow_with_the_interval():
    x = np.linspace(0, 1, 11)
    _, outer = interval_weights(x, 0.2, 0.8)
    _, inner = interval_weights(x, 0.20001, 0.79999)
    assert np.all(inner <= outer)


def test_periodic_sliver_wraps_to_the_first_node():
    x = np.linspace(-1, 0.75, 8)
    _, w = interval_weights(x, -1.0, 1.0, upper=1.0)
    assert w.tolist() == [0.25] * 8


def test_time_weights_trapezoid():
    t = np.linspace(-1, 0, 5)
    inside, w = time_weights(t, -1, 0)
    assert inside.all()
    assert w.tolist() == [0.125, 0.25, 0.25, 0.25, 0.125]


def test_sigma_first_level():
    s, region = sigma(SigmaSchedule(), 1)
    assert s == 0.875
    assert region.space == hollow(1.5, 3.5, 1)


def test_sigma_zero_is_full_region():
    s, region = sigma(SigmaSchedule(), 0)
    assert s == 1.0
    assert region.space == hollow(1, 4, 1)
    assert region.duration == 1.0


def test_sigma_limit():
    sched = SigmaSchedule(40)
    assert abs(sched.sigma(40) - 0.75) <= 2.0 ** (-42)
    assert sched.limit_region.space == hollow(2, 3, 1)


def test_sigma_recursion_is_exact():
    sched = SigmaSchedule(30)
    for i in range(1, 31):
        assert sched.sigma(i) == sched.sigma(i - 1) - 2.0 ** (-i - 2)
        assert sched.sigma(i) > 0.75


def test_sigma_out_of_range():
    with pytest.raises(ValueError):
        SigmaSchedule(3).sigma(4)


def test_schedule_regions_are_nested(fine_grid):
    sched = SigmaSchedule(6)
    masks = [region_mask(fine_grid, sched.region(i).space).mask for i in range(7)]
    for a, b in zip(masks, masks[1:]):
        assert np.all(a[b])


def test_parabolic_duration_is_r_squared():
    assert parabolic(1, 4, 0.5).duration == 0.25
    assert parabolic(1, 4, 0.5).measure == pytest.approx(hollow(1, 4, 0.5).volume / 4)


def test_scaled_grid_divides_nodes():
    g = make_grid(1, 4, -4, 4, 31, 81)
    gs = g.scaled(0.5)
    assert np.allclose(gs.r, g.r / 0.5, rtol=0, atol=1e-14)
    assert gs.dr == pytest.approx(2 * g.dr)

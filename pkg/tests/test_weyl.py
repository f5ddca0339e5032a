import math

import numpy as np
import pytest

from fredholm_disk import geometry, weyl
from fredholm_disk.errors import GridTooNarrow
from fredholm_disk.geometry import RadialGrid, SpaceKind, WeightPair
from fredholm_disk.modes import OperatorKind
from fredholm_disk.weyl import WeylParams, ratio_sequence, weyl_element

SQRT2 = math.sqrt(2.0)


def test_params_validation():
    with pytest.raises(ValueError):
        WeylParams(OperatorKind.HELMHOLTZ, 1, "exterior", 2.0)
    with pytest.raises(ValueError):
        WeylParams(OperatorKind.EULER, 1, "sideways", 2.0)
    with pytest.raises(ValueError):
        WeylParams(OperatorKind.EULER, 1, "interior", 0.5)


def test_element_normalized(default_grid):
    grid = weyl.suggested_grid(OperatorKind.EULER, "interior", 2.0)
    w = WeightPair(SQRT2 - 1.0, 0.3)
    field = weyl_element(WeylParams(OperatorKind.EULER, 1, "interior", 2.0),
                         w, grid)
    assert geometry.weighted_norm(field, SpaceKind("M", 2), w) \
        == pytest.approx(1.0, rel=1e-10)


def test_grid_too_narrow():
    grid = RadialGrid(1e-2, 10.0, 128)
    w = WeightPair(SQRT2 - 1.0, 0.3)
    with pytest.raises(GridTooNarrow):
        weyl_element(WeylParams(OperatorKind.EULER, 1, "interior", 4.0), w, grid)


def test_window_shape():
    tau = np.linspace(-7.0, 1.0, 1601)
    chi = weyl.window(tau, -6.0, 2.0)
    assert np.all(chi[tau <= -6.0] == 0.0)
    assert np.all(chi[tau >= 0.0] == 0.0)
    plateau = chi[(tau >= -4.0 + 1e-9) & (tau <= -2.0 - 1e-9)]
    assert np.allclose(plateau, 1.0)
    assert np.all((chi >= 0.0) & (chi <= 1.0))


@pytest.mark.parametrize("kind,mode,side,w,branch", [
    (OperatorKind.EULER, 1, "interior", WeightPair(SQRT2 - 1.0, 0.3), 1),
    (OperatorKind.EULER, 0, "interior", WeightPair(0.0, 0.3), 1),
    (OperatorKind.EULER, 0, "exterior", WeightPair(-0.5, -2.0), -1),
    (OperatorKind.HELMHOLTZ, 1, "interior", WeightPair(0.0, 0.0), 1),
    (OperatorKind.HELMHOLTZ, 0, "interior", WeightPair(-1.0, 0.5), 1),
    (OperatorKind.SHIFTED_HELMHOLTZ, 1, "interior",
     WeightPair(SQRT2 - 1.0, 0.0), 1),
])
def test_ratio_decay_at_resonance(kind, mode, side, w, branch):
    js = [1.0, 2.0, 4.0, 8.0]
    ratios = ratio_sequence(kind, mode, side, w, js, branch=branch)
    for a, b in zip(ratios, ratios[1:]):
        assert b / a <= 0.7


def test_nonresonant_control_has_floor():
    js = [1.0, 2.0, 4.0, 8.0]
    grid = weyl.suggested_grid(OperatorKind.EULER, "interior", 8.0)
    res = ratio_sequence(OperatorKind.EULER, 1, "interior",
                         WeightPair(SQRT2 - 1.0, 0.3), js, grid, branch=1)
    ctl = ratio_sequence(OperatorKind.EULER, 1, "interior",
                         WeightPair(-2.0, 0.3), js, grid, branch=1)
    assert min(ctl) >= 10.0 * res[-1]


def test_negative_branch_interior():
    # resonance of r^{+q}: sigma + 1 = -q(0)
    w = WeightPair(-2.0, 0.3)
    ratios = ratio_sequence(OperatorKind.EULER, 0, "interior", w,
                            [1.0, 2.0, 4.0], branch=-1)
    for a, b in zip(ratios, ratios[1:]):
        assert b / a <= 0.7

import numpy as np
import pytest

from spectral_riesz import bounds, figures
from spectral_riesz.errors import DomainError
from spectral_riesz.grid import GridSpec


def test_grid_parse_and_points():
    g = GridSpec.parse("1:100:3:log")
    assert g.points() == pytest.approx([1.0, 10.0, 100.0])
    assert GridSpec.parse("0:1:5").points() == pytest.approx(np.linspace(0, 1, 5))
    assert GridSpec(2.0, 2.0, 1).points().tolist() == [2.0]


@pytest.mark.parametrize("text", ["1:2", "a:b:c", "1:2:0", "2:1:5", "0:1:4:log", "1:2:3:cubic"])
def test_grid_rejects(text):
    with pytest.raises(DomainError):
        GridSpec.parse(text)


def test_fig1_endpoints_and_ordering():
    cols, t = figures.fig1_table()
    assert t.shape == (101, len(cols))
    ratio = t[:, cols.index("interpolated_ratio")]
    assert ratio[0] == pytest.approx((5 / 3) ** 1.5, abs=1e-10)
    assert ratio[-1] == pytest.approx(1.0, abs=1e-10)
    inner = t[1:-1]
    assert np.all(inner[:, cols.index("interpolated")] < inner[:, cols.index("riesz_iterated_li_yau")])
    # the iterated curve is a constant multiple of the classical one
    assert np.allclose(t[:, cols.index("iterated_ratio")], (5 / 3) ** 1.5)


def test_fig2_columns():
    cols, t = figures.fig2_table()
    assert cols == ["rho", "conjecture", "li_yau", "polya"]
    assert t[0, 0] == pytest.approx(1.05) and t[-1, 0] == pytest.approx(6.0)
    assert t[10, 2] == pytest.approx(bounds.zeta_liyau_constant(t[10, 0], 2))
    assert np.all(t[:, 3] < t[:, 2])

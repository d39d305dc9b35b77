import pytest

from prpsim.config import build_scenario
from prpsim.model import standard_params
from prpsim.plots import make_figure, write_plots
from prpsim.simcli import simulate


@pytest.fixture(scope="module")
def series():
    return simulate(standard_params(), build_scenario("rotation", 0.1), oracle=False)


@pytest.mark.parametrize("figure", ["powers", "f21y", "f21z"])
def test_three_series_over_the_whole_run(series, figure):
    fig = make_figure(series, figure)
    ax = fig.axes[0]
    assert [line.get_gid() for line in ax.get_lines()] == ["series-A", "series-B", "series-C"]
    assert ax.get_xlim() == (0.0, 3.0)
    for line in ax.get_lines():
        assert len(line.get_xdata()) == len(series)


def test_svg_files(tmp_path, series):
    paths = write_plots(series, str(tmp_path / "rotation"))
    assert [p.rsplit("/", 1)[-1] for p in paths] == ["powers.svg", "f21y.svg", "f21z.svg"]
    for path in paths:
        with open(path, encoding="utf-8") as file:
            svg = file.read()
        for leg in "ABC":
            assert f'id="series-{leg}"' in svg


def test_svg_output_is_reproducible(tmp_path, series):
    first = write_plots(series, str(tmp_path / "a"))
    second = write_plots(series, str(tmp_path / "b"))
    for a, b in zip(first, second):
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()

"""Rendering smoke tests: files come out nonempty and well-formed."""

from satsys.covers import iter_saturated_covers
from satsys.figures import save_cover, save_count_heatmap, save_gallery
from satsys.grid import GridShape

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _check_png(path):
    data = path.read_bytes()
    assert data[:8] == PNG_MAGIC and len(data) > 1000


def test_save_cover(tmp_path):
    cover = next(iter_saturated_covers(GridShape(2, 2)))
    out = save_cover(cover, tmp_path / "cover.png")
    _check_png(out)


def test_save_gallery(tmp_path):
    out = save_gallery(GridShape(1, 1), tmp_path / "gallery.png")
    _check_png(out)


def test_save_gallery_creates_parents(tmp_path):
    out = save_gallery(GridShape(1, 0), tmp_path / "a" / "b" / "g.png")
    _check_png(out)


def test_save_count_heatmap(tmp_path):
    out = save_count_heatmap(4, 4, tmp_path / "heat.png")
    _check_png(out)

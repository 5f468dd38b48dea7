#!/usr/bin/env python3
"""
Tests for SVG rendering
"""

import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue
from projective import ProjPoint
from render import Scene, polygon_scene, to_plane
from pentagram import corr_iterate, make_generic_polygon


def test_empty_scene_is_valid_svg():
    svg = Scene().to_svg()
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
    assert svg.endswith('</svg>\n')
    assert '<circle' not in svg


def test_rendering_is_deterministic():
    orbit = corr_iterate(make_generic_polygon(6, seed=2), 2)
    first = polygon_scene(orbit, title='orbit').to_svg()
    second = polygon_scene(orbit, title='orbit').to_svg()
    assert first == second
    assert first.count('<polygon') == 3
    assert '<title>orbit</title>' in first


def test_points_off_the_chart_are_clipped():
    scene = Scene()
    scene.add_points([ProjValue.of(1), ProjValue.infinity(), ProjPoint([1, 0, 0])])
    assert scene.clipped == 2
    assert '2 point(s) outside the affine chart' in scene.to_svg()


def test_circle_radius_from_squared_radius():
    scene = Scene()
    scene.add_circle(ProjValue.of(0), ProjValue.of(4))
    assert scene.bounds() == (-2.0, -2.0, 2.0, 2.0)


def test_space_points_use_oblique_projection():
    assert to_plane(ProjPoint.affine(1, 2)) == complex(1, 2)
    assert to_plane(ProjPoint.affine(1, 2, 0)) == complex(1, 2)
    assert abs(to_plane(ProjPoint.affine(0, 0, 10)) - complex(4, 3)) < 1e-12


def test_save_writes_svg_and_preview(tmp_path):
    scene = polygon_scene([make_generic_polygon(5, seed=1)])
    path = scene.save(tmp_path / 'out' / 'polygon.svg', png=True)
    assert path.read_text() == scene.to_svg()
    assert (tmp_path / 'out' / 'polygon.png').exists()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))

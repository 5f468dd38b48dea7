"""
Static SVG rendering of planar and projective states

A Scene collects primitives in world coordinates, one colour layer per
time step, and writes a deterministic SVG document. The optional raster
preview goes through Pillow.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from PIL import Image, ImageDraw

from config import (
    LOG_LEVEL, LOG_FORMAT, PNG_PREVIEW, SVG_INTERNAL_FACE_COLOR, SVG_LAYER_COLORS, SVG_MARGIN, SVG_OPEN_FACE_COLOR,
    SVG_POINT_RADIUS, SVG_SIZE, SVG_STROKE_WIDTH
)
from field import ProjValue
from projective import ProjPoint

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Drawable = Union[ProjValue, ProjPoint, complex]


def to_plane(item: Drawable) -> Optional[complex]:
    """
    A complex number for a planar value or a projective point; None when the
    item has no finite position. Points of RP^3 use an oblique projection.
    """
    if isinstance(item, complex):
        return item
    if isinstance(item, ProjValue):
        if not item.is_finite:
            return None
        return item.backend.to_complex(item.value)
    if item.is_undefined or item.is_at_infinity:
        return None
    coords = [item.backend.to_complex(v.value).real for v in item.affine_coordinates()]
    if len(coords) == 2:
        return complex(coords[0], coords[1])
    if len(coords) == 3:
        return complex(coords[0] + 0.4 * coords[2], coords[1] + 0.3 * coords[2])
    raise ValueError(f"Cannot draw a point of RP^{len(coords)}")


class Scene:
    """Primitives to draw, in world coordinates."""

    def __init__(self, title: str = ''):
        self.title = title
        self.items: List[Tuple] = []
        self.clipped = 0

    def _convert(self, items: Iterable[Drawable]) -> List[complex]:
        result = []
        for item in items:
            z = to_plane(item)
            if z is None:
                self.clipped += 1
            else:
                result.append(z)
        return result

    def add_polygon(self, points: Sequence[Drawable], layer: int = 0, closed: bool = True) -> None:
        converted = self._convert(points)
        if len(converted) >= 2:
            self.items.append(('polygon', layer, converted, closed))
        self.add_points(points, layer)

    def add_points(self, points: Sequence[Drawable], layer: int = 0) -> None:
        for z in self._convert(points):
            self.items.append(('point', layer, z))

    def add_circle(self, center: Drawable, squared_radius: Drawable, layer: int = 0) -> None:
        z = to_plane(center)
        r2 = to_plane(squared_radius)
        if z is None or r2 is None:
            self.clipped += 1
            return
        self.items.append(('circle', layer, z, abs(r2) ** 0.5))

    def add_segment(self, a: Drawable, b: Drawable, layer: int = 0) -> None:
        converted = self._convert([a, b])
        if len(converted) == 2:
            self.items.append(('segment', layer, converted[0], converted[1]))

    def add_face(self, corner: Tuple[int, int], internal: bool = True) -> None:
        self.items.append(('face', internal, complex(*corner)))

    def bounds(self) -> Tuple[float, float, float, float]:
        xs, ys = [], []
        for item in self.items:
            kind = item[0]
            if kind == 'polygon':
                xs += [z.real for z in item[2]]
                ys += [z.imag for z in item[2]]
            elif kind == 'point':
                xs.append(item[2].real)
                ys.append(item[2].imag)
            elif kind == 'circle':
                z, r = item[2], item[3]
                xs += [z.real - r, z.real + r]
                ys += [z.imag - r, z.imag + r]
            elif kind == 'segment':
                xs += [item[2].real, item[3].real]
                ys += [item[2].imag, item[3].imag]
            elif kind == 'face':
                xs += [item[2].real, item[2].real + 1]
                ys += [item[2].imag, item[2].imag + 1]
        if not xs:
            return (0.0, 0.0, 1.0, 1.0)
        return (min(xs), min(ys), max(xs), max(ys))

    def _transform(self, size: int):
        x0, y0, x1, y1 = self.bounds()
        span = max(x1 - x0, y1 - y0) or 1.0
        scale = (size - 2 * SVG_MARGIN) / span

        def screen(z: complex) -> Tuple[float, float]:
            return (SVG_MARGIN + (z.real - x0) * scale, size - SVG_MARGIN - (z.imag - y0) * scale)

        return screen, scale

    def to_svg(self, size: int = SVG_SIZE) -> str:
        screen, scale = self._transform(size)
        body = []
        for item in self.items:
            kind = item[0]
            if kind == 'face':
                x, y = screen(item[2] + 1j)
                fill = SVG_INTERNAL_FACE_COLOR if item[1] else SVG_OPEN_FACE_COLOR
                body.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{scale:.3f}" height="{scale:.3f}" '
                            f'fill="{fill}" stroke="#555555" stroke-width="0.5"/>')
                continue
            color = SVG_LAYER_COLORS[item[1] % len(SVG_LAYER_COLORS)]
            if kind == 'polygon':
                coords = ' '.join(f'{x:.3f},{y:.3f}' for x, y in map(screen, item[2]))
                tag = 'polygon' if item[3] else 'polyline'
                body.append(f'<{tag} points="{coords}" fill="none" stroke="{color}" '
                            f'stroke-width="{SVG_STROKE_WIDTH}"/>')
            elif kind == 'point':
                x, y = screen(item[2])
                body.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{SVG_POINT_RADIUS}" fill="{color}"/>')
            elif kind == 'circle':
                x, y = screen(item[2])
                body.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{item[3] * scale:.3f}" fill="none" '
                            f'stroke="{color}" stroke-width="{SVG_STROKE_WIDTH}"/>')
            elif kind == 'segment':
                (xa, ya), (xb, yb) = screen(item[2]), screen(item[3])
                body.append(f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" stroke="{color}" '
                            f'stroke-width="{2 * SVG_STROKE_WIDTH}"/>')
        if self.clipped:
            body.append(f'<text x="{SVG_MARGIN}" y="{size - 8}" font-size="12" fill="#b00000">'
                        f'{self.clipped} point(s) outside the affine chart</text>')
        title = f'<title>{self.title}</title>' if self.title else ''
        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
                 f'viewBox="0 0 {size} {size}">', title] + body + ['</svg>']
        return '\n'.join(line for line in lines if line) + '\n'

    def to_image(self, size: int = SVG_SIZE) -> Image.Image:
        """Raster preview of the same primitives."""
        screen, scale = self._transform(size)
        image = Image.new('RGB', (size, size), color='white')
        draw = ImageDraw.Draw(image)
        for item in self.items:
            kind = item[0]
            if kind == 'face':
                x, y = screen(item[2] + 1j)
                fill = SVG_INTERNAL_FACE_COLOR if item[1] else SVG_OPEN_FACE_COLOR
                draw.rectangle([x, y, x + scale, y + scale], fill=fill, outline='#555555')
                continue
            color = SVG_LAYER_COLORS[item[1] % len(SVG_LAYER_COLORS)]
            if kind == 'polygon':
                coords = [screen(z) for z in item[2]]
                if item[3]:
                    coords.append(coords[0])
                draw.line(coords, fill=color, width=2)
            elif kind == 'point':
                x, y = screen(item[2])
                r = SVG_POINT_RADIUS
                draw.ellipse([x - r, y - r, x + r, y + r], fill=color)
            elif kind == 'circle':
                x, y = screen(item[2])
                r = item[3] * scale
                draw.ellipse([x - r, y - r, x + r, y + r], outline=color, width=2)
            elif kind == 'segment':
                draw.line([screen(item[2]), screen(item[3])], fill=color, width=3)
        return image

    def save(self, path: Union[str, Path], png: bool = PNG_PREVIEW) -> Path:
        """Write the SVG, and a PNG next to it when ``png`` is set."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_svg())
        if self.clipped:
            logger.warning(f"{self.clipped} point(s) of '{self.title}' are outside the affine chart")
        if png:
            preview = path.with_suffix('.png')
            self.to_image().save(preview)
            logger.info(f"Wrote raster preview {preview}")
        logger.info(f"Wrote {path}")
        return path


# ---------------------------------------------------------------------------
# Scenes for the systems
# ---------------------------------------------------------------------------

def polygon_scene(orbit: Sequence[Sequence[Drawable]], title: str = '') -> Scene:
    """One closed polygon per time step."""
    scene = Scene(title)
    for step, polygon in enumerate(orbit):
        scene.add_polygon(list(polygon), layer=step)
    return scene


def circle_scene(states: Sequence, title: str = '') -> Scene:
    """Circles (centre, squared radius) of each circle-pattern state, one layer per step."""
    scene = Scene(title)
    for step, pattern in enumerate(states):
        for center, r2 in pattern.distinct_circles():
            scene.add_circle(center, r2, layer=step)
        scene.add_points(pattern.distinct_points(), layer=step)
    return scene


def diamond_scene(diamond, matching: Optional[Sequence] = None, title: str = '') -> Scene:
    """Faces of an Aztec diamond and, optionally, a dimer configuration on it."""
    scene = Scene(title)
    for face in diamond.internal_faces:
        scene.add_face(face, internal=True)
    for face in diamond.open_faces:
        scene.add_face(face, internal=False)
    for white, black in matching or []:
        scene.add_segment(complex(*white), complex(*black), layer=3)
    return scene

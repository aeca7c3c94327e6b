"""Schematic SVG rendering of a scene for the chat UI and docs.

Output is a plain deterministic string: rendering the same scene twice
yields byte-identical SVG.
"""

from __future__ import annotations

from .model import Freshness, ObjectClass, Scene, SceneObject

VIEW_W = 400
VIEW_H = 280

# fill color and glyph shape per class
_STYLE: dict[ObjectClass, tuple[str, str]] = {
    ObjectClass.DONUT: ("#d4a15e", "ring"),
    ObjectClass.COKE_CAN: ("#c0392b", "rect"),
    ObjectClass.COKE_BOTTLE: ("#922b21", "rect"),
    ObjectClass.BEER: ("#b9770e", "rect"),
    ObjectClass.APPLE: ("#c0392b", "ellipse"),
    ObjectClass.BANANA: ("#f1c40f", "ellipse"),
    ObjectClass.LEMON: ("#f4d03f", "ellipse"),
    ObjectClass.ORANGE: ("#e67e22", "ellipse"),
    ObjectClass.PEAR: ("#7dcea0", "ellipse"),
    ObjectClass.EGG: ("#fdf2e9", "ellipse"),
    ObjectClass.MEAT: ("#e74c3c", "rect"),
    ObjectClass.MILK: ("#fbfcfc", "rect"),
    ObjectClass.TOMATO: ("#e74c3c", "ellipse"),
    ObjectClass.FISH: ("#85c1e9", "ellipse"),
}

_EXPIRED_DARKEN = 0.45


def _darken(color: str, factor: float = _EXPIRED_DARKEN) -> str:
    r = int(int(color[1:3], 16) * factor)
    g = int(int(color[3:5], 16) * factor)
    b = int(int(color[5:7], 16) * factor)
    return f"#{r:02x}{g:02x}{b:02x}"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _glyph(obj: SceneObject) -> str:
    color, shape = _STYLE[obj.obj_class]
    expired = obj.freshness is Freshness.EXPIRED
    fill = _darken(color) if expired else color
    x0, y0, x1, y1 = obj.bbox
    px0, py0 = x0 * VIEW_W, y0 * VIEW_H
    w, h = (x1 - x0) * VIEW_W, (y1 - y0) * VIEW_H
    cx, cy = px0 + w / 2, py0 + h / 2
    if shape == "rect":
        body = (
            f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'rx="{_fmt(min(w, h) * 0.15)}" fill="{fill}" stroke="#2c3e50" stroke-width="1"/>'
        )
    elif shape == "ring":
        body = (
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(min(w, h) / 2)}" '
            f'fill="{fill}" stroke="#2c3e50" stroke-width="1"/>'
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(min(w, h) / 6)}" fill="#eef2f5"/>'
        )
    else:
        body = (
            f'<ellipse cx="{_fmt(cx)}" cy="{_fmt(cy)}" rx="{_fmt(w / 2)}" ry="{_fmt(h / 2)}" '
            f'fill="{fill}" stroke="#2c3e50" stroke-width="1"/>'
        )
    label = f"{obj.size.value} {obj.freshness.value} {obj.obj_class.value}"
    classes = "object expired" if expired else "object"
    return (
        f'<g class="{classes}" data-id="{obj.id}" data-class="{obj.obj_class.value}" '
        f'data-size="{obj.size.value}" data-freshness="{obj.freshness.value}">'
        f"<title>{label}</title>{body}</g>"
    )


def render_schematic(scene: Scene) -> str:
    """One glyph per object on a shelf background, far objects drawn first."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW_W} {VIEW_H}" '
        f'data-scene-id="{scene.scene_id}">',
        f'<rect class="shelf" x="0" y="0" width="{VIEW_W}" height="{VIEW_H}" fill="#eef2f5"/>',
        f'<line x1="0" y1="{VIEW_H - 14}" x2="{VIEW_W}" y2="{VIEW_H - 14}" '
        f'stroke="#b0bec5" stroke-width="3"/>',
    ]
    # larger shelf-plane y = farther back = drawn first, then overdrawn
    ordered = sorted(scene.objects, key=lambda o: (-o.position[1], o.id))
    parts.extend(_glyph(obj) for obj in ordered)
    parts.append("</svg>")
    return "".join(parts)

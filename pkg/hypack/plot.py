"""SVG outlines of bodies and packing windows."""

import logging
import xml.etree.ElementTree as ET

from hypack.models import Body, PackingWindow
from hypack.regions import boundary_segments


LOG = logging.getLogger(__name__)

WIDTH = 600
PADDING = 20
HEAVY = 2.5
LIGHT = 0.75

STYLES = {
    "body": {"stroke": "#000000", "stroke-width": HEAVY},
    "piece": {"stroke": "#808080", "stroke-width": LIGHT},
    "copy": {"stroke": "#000000", "stroke-width": LIGHT * 2},
    "window": {"stroke": "#b0b0b0", "stroke-width": LIGHT, "stroke-dasharray": "4 2"},
}


def get_data(item):
    """Layers to draw as (name, class, segments), light layers first."""
    if isinstance(item, Body):
        layers = [
            (name, "piece", boundary_segments(piece))
            for name, piece in sorted(item.pieces.items())
            if name not in ("R", "R'")
        ]
        layers.append((item.name, "body", boundary_segments(item.region)))
        return layers
    if isinstance(item, PackingWindow):
        layers = [("window", "window", boundary_segments(item.window))]
        layers.extend(
            (repr(g), "copy", boundary_segments(copy))
            for g, copy in zip(item.placements, item.copies())
        )
        return layers
    raise TypeError(f"Cannot render {type(item).__name__}")


def _viewport(layers):
    points = [point for _, _, segments in layers for segment in segments for point in segment]
    if not points:
        return 0, 1, 0, 1
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs), max(xs), min(ys), max(ys)


def _path(segments, project):
    parts = []
    for start, end in segments:
        parts.append("M {} {} L {} {}".format(*project(start), *project(end)))
    return " ".join(parts)


def render_svg(item):
    """Deterministic SVG document for a Body or PackingWindow.

    The half-plane window is mapped onto a fixed-width canvas with y pointing
    up; coordinates are written with six decimals.
    """
    layers = get_data(item)
    xmin, xmax, ymin, ymax = _viewport(layers)
    span = max(xmax - xmin, ymax - ymin) or 1
    scale = (WIDTH - 2 * PADDING) / float(span)
    width = 2 * PADDING + float(xmax - xmin) * scale
    height = 2 * PADDING + float(ymax - ymin) * scale

    def project(point):
        x, y = point
        return (
            f"{PADDING + float(x - xmin) * scale:.6f}",
            f"{PADDING + float(ymax - y) * scale:.6f}",
        )

    root = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": f"{width:.6f}",
            "height": f"{height:.6f}",
            "viewBox": f"0 0 {width:.6f} {height:.6f}",
        },
    )
    for name, kind, segments in layers:
        if not segments:
            continue
        attributes = {"class": kind, "fill": "none"}
        attributes.update({key: str(value) for key, value in STYLES[kind].items()})
        group = ET.SubElement(root, "g", attributes)
        ET.SubElement(group, "title").text = name
        ET.SubElement(group, "path", {"d": _path(segments, project)})
    return ET.tostring(root, encoding="unicode") + "\n"


def save_svg(item, output):
    """Write render_svg(item) to output."""
    text = render_svg(item)
    with open(output, "w") as fp:
        fp.write(text)
    LOG.info("Wrote %s", output)
    return text

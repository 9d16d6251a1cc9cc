"""Rendering of plaid / graph overlays as SVG 1.1 documents and
matplotlib figures.

All geometry arrives as exact rationals; coordinates are rounded only at
serialization time, onto a 10**-9 grid, so that identical inputs always
produce identical bytes.  The SVG y-axis is flipped to the usual screen
convention (y grows downward).
"""

from fractions import Fraction

__all__ = ["RenderSpec", "render_svg", "render_png", "LAYERS"]

LAYERS = ("plaid", "graph", "grid-points", "catches", "labels")

_GRID = 10 ** 9  # serialization rounding grid: 10**-9


class EmptyRender(ValueError):
    """Raised for an empty region or an empty layer set."""


class RenderSpec:
    """What to draw: a parameter, a block of the plane, a subset of
    layers, and stroke/scale settings (``pitch`` = pixels per unit
    square)."""

    def __init__(self, param, region, layers=("plaid", "graph"),
                 pitch=40, stroke=2):
        x0, y0, x1, y1 = region
        if x1 <= x0 or y1 <= y0:
            raise EmptyRender(f"empty region {region}")
        layers = tuple(layers)
        if not layers:
            raise EmptyRender("no layers selected")
        for layer in layers:
            if layer not in LAYERS:
                raise EmptyRender(f"unknown layer {layer!r}")
        self.param = param
        self.region = (x0, y0, x1, y1)
        self.layers = layers
        self.pitch = pitch
        self.stroke = stroke


def _fmt(value):
    """Serialize an exact rational rounded to the 10**-9 grid."""
    f = Fraction(value)
    n = (f.numerator * _GRID * 2 + f.denominator) // (2 * f.denominator)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, _GRID)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:09d}".rstrip("0")


class _Canvas:
    """Accumulates SVG elements in plaid coordinates."""

    def __init__(self, spec):
        x0, y0, x1, y1 = spec.region
        self.pitch = Fraction(spec.pitch)
        self.x0, self.y1 = Fraction(x0), Fraction(y1)
        self.width = (x1 - x0) * spec.pitch
        self.height = (y1 - y0) * spec.pitch
        self.body = []

    def pt(self, p):
        x = (Fraction(p[0]) - self.x0) * self.pitch
        y = (self.y1 - Fraction(p[1])) * self.pitch
        return f"{_fmt(x)},{_fmt(y)}"

    def polyline(self, points, color, width, closed=False, dash=None):
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        pts = " ".join(self.pt(p) for p in points)
        self.body.append(
            f'<{tag} points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}" stroke-linejoin="round"'
            f'{extra}/>')

    def circle(self, center, radius, color):
        x, y = self.pt(center).split(",")
        self.body.append(
            f'<circle cx="{x}" cy="{y}" r="{_fmt(radius)}" '
            f'fill="{color}"/>')

    def text(self, anchor, string, size, color="#444444"):
        x, y = self.pt(anchor).split(",")
        self.body.append(
            f'<text x="{x}" y="{y}" font-size="{_fmt(size)}" '
            f'fill="{color}" text-anchor="middle" '
            f'font-family="monospace">{string}</text>')

    def document(self):
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
                f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">')
        return head + "\n" + "\n".join(self.body) + "\n</svg>\n"


def _draw(spec, canvas_like, plaid_components, graph_family, catches,
          poly, circ, txt):
    """Shared layer walk for SVG and matplotlib back ends."""
    s = spec.stroke
    if "plaid" in spec.layers and plaid_components:
        for comp in plaid_components:
            poly(comp, "#000000", s, True)
    if "graph" in spec.layers and graph_family is not None:
        vx = graph_family.vertices
        for comp in graph_family.components:
            closed = len(comp) > 2 and \
                frozenset((comp[0], comp[-1])) in graph_family.edges
            poly([vx[mn] for mn in comp], "#999999",
                 Fraction(3 * s, 2), closed)
    if "grid-points" in spec.layers and graph_family is not None:
        for point in graph_family.vertices.values():
            circ(point, Fraction(s, 1) + 1, "#bb4444")
    if "catches" in spec.layers and catches:
        for catch in catches:
            for sq in catch.squares[1:-1]:
                x, y = sq
                if catch.diagonal_sign > 0:
                    seg = [(x, y), (x + 1, y + 1)]
                else:
                    seg = [(x, y + 1), (x + 1, y)]
                poly(seg, "#2255cc", s, False, "6,4")
    if "labels" in spec.layers and graph_family is not None:
        for mn, point in graph_family.vertices.items():
            txt((point[0], point[1] + Fraction(1, 4)),
                f"{mn[0]},{mn[1]}", Fraction(2 * s, 5))


def render_svg(spec, plaid_components=None, graph_family=None,
               catches=None):
    """Render the selected layers to an SVG 1.1 document string."""
    cv = _Canvas(spec)
    pitch = cv.pitch

    def poly(points, color, width, closed, dash=None):
        cv.polyline(points, color, width, closed=closed, dash=dash)

    def circ(center, radius, color):
        cv.circle(center, radius, color)

    def txt(anchor, string, size):
        cv.text(anchor, string, size * pitch / 4)

    _draw(spec, cv, plaid_components, graph_family, catches,
          poly, circ, txt)
    return cv.document()


def render_png(spec, path, plaid_components=None, graph_family=None,
               catches=None, dpi=120):
    """Render the same layers to a PNG via matplotlib."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x0, y0, x1, y1 = spec.region
    fig, ax = plt.subplots(
        figsize=((x1 - x0) * spec.pitch / dpi,
                 (y1 - y0) * spec.pitch / dpi), dpi=dpi)

    def poly(points, color, width, closed, dash=None):
        pts = list(points) + ([points[0]] if closed else [])
        ax.plot([float(p[0]) for p in pts], [float(p[1]) for p in pts],
                color=color, linewidth=float(width) / 2,
                linestyle="--" if dash else "-",
                solid_joinstyle="round")

    def circ(center, radius, color):
        ax.plot([float(center[0])], [float(center[1])], marker="o",
                markersize=float(radius), color=color, linestyle="none")

    def txt(anchor, string, size):
        ax.text(float(anchor[0]), float(anchor[1]), string,
                fontsize=max(4.0, float(size) * 10), color="#444444",
                ha="center", family="monospace")

    _draw(spec, None, plaid_components, graph_family, catches,
          poly, circ, txt)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_xticks(range(x0, x1 + 1))
    ax.set_yticks(range(y0, y1 + 1))
    ax.grid(True, linewidth=0.3, color="#dddddd")
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path

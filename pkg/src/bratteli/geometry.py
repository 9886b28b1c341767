"""Exact planar realization of the triple-shift quotient and SVG rendering.

Each anchor path of the 3-edge full shift (edges 0 and 1 embedded, edge 2
free) determines an affine similarity of the plane; the anchor's extension
block maps onto the image of the unit circle under that similarity.  Angles
are dyadic rationals handled exactly until the final complex exponential, so
identified paths land on literally identical points.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .embedding import EmbeddingPair, in_anchor_block, enumerate_anchors
from .pathspace import LazyPath


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: Fraction


@dataclass(frozen=True)
class BlockMap:
    """z -> e^(2 pi i angle) * (2^-n z + (1 + 2^-(n-1))) for one anchor block
    of length n; ``angle`` is an exact dyadic rational."""

    n: int
    angle: Fraction

    def scale(self) -> Fraction:
        return Fraction(1, 2**self.n)

    def offset(self) -> Fraction:
        return 1 + Fraction(1, 2 ** (self.n - 1))

    def __call__(self, z: complex) -> complex:
        return unit_angle(self.angle) * (float(self.scale()) * z + float(self.offset()))


def unit_angle(q: Fraction) -> complex:
    """exp(2 pi i q), exact on quarter turns."""
    q = q - (q.numerator // q.denominator)
    quarter = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if q in quarter:
        return quarter[q]
    return cmath.exp(2j * math.pi * float(q))


def split_blocks(p) -> list:
    """Partition an anchor path into its maximal blocks ending in the free
    edge; each block is a run over {0,1} closed by a 2."""
    blocks, cur = [], []
    for e in p:
        cur.append(e)
        if e == 2:
            blocks.append(tuple(cur))
            cur = []
        elif e not in (0, 1):
            raise ValueError(f"edge {e} outside the triple shift alphabet")
    if cur:
        raise ValueError("anchor path must end with the free edge")
    return blocks


def block_angle(block) -> Fraction:
    """Turn angle of one block: 2^-n plus the binary digits of the run, and 0
    for the bare free edge."""
    n = len(block)
    if block[-1] != 2:
        raise ValueError("block must end with the free edge")
    if n == 1:
        return Fraction(0)
    return Fraction(1, 2**n) + sum(Fraction(block[k], 2 ** (k + 1)) for k in range(n - 1))


def block_map(block) -> BlockMap:
    return BlockMap(len(block), block_angle(block))


@dataclass(frozen=True)
class AnchorMap:
    """Composition of the block maps of an anchor path, first block outermost;
    the empty anchor is the identity."""

    blocks: tuple

    @staticmethod
    def of(p) -> "AnchorMap":
        return AnchorMap(tuple(block_map(b) for b in split_blocks(p)))

    def scale(self) -> Fraction:
        out = Fraction(1)
        for b in self.blocks:
            out *= b.scale()
        return out

    def __call__(self, z: complex) -> complex:
        for b in reversed(self.blocks):
            z = b(z)
        return z

    def circle(self) -> Circle:
        return Circle(self(0j), self.scale())


def anchor_map(p) -> AnchorMap:
    return AnchorMap.of(p)


def tail_angle(pair: EmbeddingPair, x: LazyPath, from_level: int) -> Fraction:
    """Exact binary angle of a path whose edges from ``from_level`` on are all
    embedded: the copy sides form a binary expansion read from the block start
    (digit at level k has weight 2^-(k - from_level + 1)), evaluated as an
    exact rational via the geometric series of the repeating block."""
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    total = Fraction(0)
    for k in range(from_level, stab):
        side = pair.embedded_side(k, x.edge_at(k))
        if side is None:
            raise ValueError(f"edge at level {k} is not embedded")
        total += Fraction(side, 2 ** (k - from_level + 1))
    block = x.tail.block
    p = len(block)
    digits = []
    for i, e in enumerate(block):
        side = pair.embedded_side(stab + i, e)
        if side is None:
            raise ValueError(f"edge at level {stab + i} is not embedded")
        digits.append(side)
    block_value = sum(d * 2 ** (p - 1 - i) for i, d in enumerate(digits))
    total += Fraction(block_value, (2**p - 1) * 2 ** (stab - from_level))
    return total


def plane_point(pair: EmbeddingPair, x: LazyPath, anchor) -> complex:
    """Image of a path of the anchor's extension block in the plane."""
    if not in_anchor_block(pair, x, anchor):
        raise ValueError("path does not extend the anchor inside the two copies")
    angle = tail_angle(pair, x, len(anchor) + 1)
    return anchor_map(anchor)(unit_angle(angle))


def locate(pair: EmbeddingPair, x: LazyPath) -> complex:
    """plane_point with the anchor read off from the path itself."""
    anchor = _anchor_of(pair, x)
    return plane_point(pair, x, anchor)


def _anchor_of(pair: EmbeddingPair, x: LazyPath):
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    block = x.tail.block
    if any(pair.embedded_side(stab + i, e) is None for i, e in enumerate(block)):
        raise ValueError("path has cofinally many free edges")
    last_free = 0
    for n in range(stab - 1, 0, -1):
        if pair.embedded_side(n, x.edge_at(n)) is None:
            last_free = n
            break
    return x.truncate(last_free)


def stage_circles(n: int) -> list:
    """One circle per anchor path of length <= n-1 of the triple shift."""
    from . import catalog

    pair = catalog.three_pair()
    if n < 1:
        raise ValueError("stage must be >= 1")
    return [anchor_map(p).circle() for p in enumerate_anchors(pair, n - 1)]


def shrinking_circles(depth: int) -> list:
    """Concentric circles of radii 1, 1/2, ..., 2^-depth (the ladder-diagram
    quotient picture); the limit point at the origin is rendered separately."""
    return [Circle(0j, Fraction(1, 2**k)) for k in range(depth + 1)]


def cantor_circles(depth: int) -> list:
    """Circles centred at the origin through the depth-``depth`` endpoints of
    the middle-thirds set shifted to [1, 2]."""
    intervals = [(Fraction(1), Fraction(2))]
    for _ in range(depth):
        nxt = []
        for lo, hi in intervals:
            third = (hi - lo) / 3
            nxt.append((lo, lo + third))
            nxt.append((hi - third, hi))
        intervals = nxt
    radii = sorted({lo for lo, _ in intervals} | {hi for _, hi in intervals})
    return [Circle(0j, r) for r in radii]


# -- SVG ------------------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def render_circles(circles, extra_dots=(), viewport: float = 1000.0, world: float = 4.2) -> str:
    """Deterministic SVG: fixed viewport, circles sorted by radius then angle,
    9-digit coordinates."""
    scale = viewport / (2 * world)

    def to_svg(z: complex):
        return (viewport / 2 + scale * z.real, viewport / 2 - scale * z.imag)

    def sort_key(c: Circle):
        return (-c.radius, cmath.phase(c.center) if c.center else 0.0, c.center.real, c.center.imag)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(viewport)}" height="{int(viewport)}" '
        f'viewBox="0 0 {int(viewport)} {int(viewport)}">',
        '<g fill="none" stroke="black" stroke-width="1.5">',
    ]
    for c in sorted(circles, key=sort_key):
        cx, cy = to_svg(c.center)
        lines.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(scale * float(c.radius))}"/>'
        )
    lines.append("</g>")
    if extra_dots:
        lines.append('<g fill="black">')
        for z in extra_dots:
            cx, cy = to_svg(z)
            lines.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.000000000"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_scene(name: str, depth: int) -> str:
    """The stock scenes: "stages" (triple-shift circles), "cantor-rings"
    (circle family over the middle-thirds set), "shrinking" (dyadic circles
    plus the origin)."""
    if name == "stages":
        return render_circles(stage_circles(depth))
    if name == "cantor-rings":
        return render_circles(cantor_circles(depth), world=2.2)
    if name == "shrinking":
        return render_circles(shrinking_circles(depth), extra_dots=[0j], world=1.2)
    raise KeyError(f"unknown scene {name!r}")


def render_schematic(d, depth: int, viewport: float = 1000.0) -> str:
    """Generic diagrams get a plain leveled-graph sketch (not a realization
    of the quotient, just a picture of the diagram itself)."""
    levels = min(depth, d.depth or depth)
    margin = 60.0
    dy = (viewport - 2 * margin) / max(levels, 1)
    pos = {}
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(viewport)}" height="{int(viewport)}" '
        f'viewBox="0 0 {int(viewport)} {int(viewport)}">',
        '<g stroke="black" stroke-width="1">',
    ]
    for n in range(levels + 1):
        count = d.vertex_count(n)
        dx = (viewport - 2 * margin) / max(count, 1)
        for v in range(count):
            pos[(n, v)] = (margin + dx * (v + 0.5), margin + dy * n)
    for n in range(1, levels + 1):
        for e in d.edges_at(n):
            x1, y1 = pos[(n - 1, e.source)]
            x2, y2 = pos[(n, e.target)]
            lines.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>'
            )
    lines.append("</g>")
    lines.append('<g fill="black">')
    for (n, v), (x, y) in sorted(pos.items()):
        lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4.000000000"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

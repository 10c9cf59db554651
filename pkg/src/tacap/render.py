"""SVG diagrams and animation frame data.

Curves in the lifecycle diagram are drawn in data units inside a transformed
group, so the polyline's ``points`` attribute holds the actual (time,
kiloneurons) breakpoints.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from typing import Optional, Sequence, Union
from xml.sax.saxutils import escape, quoteattr

from .metrics import NormalizedTimes, TypeMeans, normalized_times
from .model import ENV, MOTOR, CaType, CellAssembly, Corpus, EdgeKind, UnknownPrefix, ca_type_from_id
from .sim import LINEAR, ShapeConfig, Trace, format_time, shaped_bounds, time_grid

_EPS = 1e-9
POWER_SEGMENTS = 16


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ScamCurve:
    label: str
    breakpoints: tuple  # ((t, n), ...)
    annotations: dict   # parameter name -> level (kiloneurons) or time (s)


def _ramp_points(start, stop, f, shape: ShapeConfig):
    if shape.exponent == 1.0 or stop <= start:
        return []
    step = (stop - start) / POWER_SEGMENTS
    return [(start + i * step, f(start + i * step)) for i in range(1, POWER_SEGMENTS)]


def scam_breakpoints(source: Union[CellAssembly, TypeMeans], shape: ShapeConfig = LINEAR,
                     end_time: Optional[float] = None,
                     times: Optional[NormalizedTimes] = None) -> ScamCurve:
    """Corner points of the lifecycle curve.

    For a CA the times are its own (shaped) lifecycle bounds.  For group means
    the curve starts at zero and uses the normalized times; a power shape only
    changes the CA form.
    """
    if isinstance(source, TypeMeans):
        m = source
        nt = times or normalized_times(m)
        pts = ((nt.t0, 0.0), (nt.t1, m.thresh), (nt.t1, m.igmax), (nt.t2, m.igfat), (nt.t3, 0.0))
        notes = {"potn": m.potn, "thresh": m.thresh, "igmax": m.igmax, "igfat": m.igfat,
                 "p50": (nt.t0 + nt.t1) / 2, "igtig": nt.t1, "igtex": nt.t2, "d50": (nt.t2 + nt.t3) / 2}
        return ScamCurve(m.group, pts, notes)

    ca = source
    p = ca.params
    b = shaped_bounds(ca, shape, end_time)
    k = shape.exponent
    pts = [(b.prime_start, 0.0)]
    pts += _ramp_points(b.prime_start, b.ignite,
                        lambda t: p.thresh * ((t - b.prime_start) / b.prime_len) ** k, shape)
    pts += [(b.ignite, p.thresh), (b.ignite, p.igmax)]
    if b.extinguish is None:
        pts.append((b.horizon, p.igfat))
    else:
        pts.append((b.extinguish, p.igfat))
        pts += _ramp_points(b.extinguish, b.decay_end,
                            lambda t: p.igfat * ((b.decay_end - t) / b.decay_len) ** k, shape)
        pts.append((b.decay_end, 0.0))
    notes = {"potn": p.potn, "thresh": p.thresh, "igmax": p.igmax, "igfat": p.igfat,
             "p50": p.p50, "igtig": p.igtig, "igtex": p.igtex, "d50": p.d50}
    return ScamCurve(ca.id, tuple(pts), notes)


def _num(x: float) -> str:
    return format_time(x)


def _svg_open(width, height) -> list[str]:
    return ['<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">']


def render_scam_svg(curve: ScamCurve, title: Optional[str] = None,
                    width: int = 640, height: int = 360) -> str:
    left, right, top, bottom = 60, 20, 30, 45
    notes = curve.annotations
    ts = [t for t, _ in curve.breakpoints] + [v for key in ("p50", "igtig", "igtex", "d50")
                                             if (v := notes.get(key)) is not None]
    t_lo, t_hi = min(ts), max(ts)
    if t_hi - t_lo < _EPS:
        t_hi = t_lo + 1.0
    pad = (t_hi - t_lo) * 0.05
    t_lo, t_hi = t_lo - pad, t_hi + pad
    n_hi = max([n for _, n in curve.breakpoints] + [notes.get("potn") or 0.0, 1.0]) * 1.1
    pw, ph = width - left - right, height - top - bottom
    sx, sy = pw / (t_hi - t_lo), ph / n_hi

    def px(t):
        return left + (t - t_lo) * sx

    def py(n):
        return top + ph - n * sy

    out = _svg_open(width, height)
    out.append(f"<title>{escape(title if title is not None else curve.label)}</title>")
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#999"/>')
    out.append(f'<g class="data" transform="translate({_num(left - t_lo * sx)},{_num(top + ph)}) '
               f'scale({_num(sx)},{_num(-sy)})">')
    for key in ("potn", "thresh", "igmax", "igfat"):
        n = notes.get(key)
        if n is not None:
            out.append(f'<line class="guide level" data-param="{key}" x1="{_num(t_lo)}" y1="{_num(n)}" '
                       f'x2="{_num(t_hi)}" y2="{_num(n)}" stroke="#888" stroke-dasharray="4 3" '
                       f'vector-effect="non-scaling-stroke"/>')
    for key in ("p50", "igtig", "igtex", "d50"):
        t = notes.get(key)
        if t is not None:
            out.append(f'<line class="guide time" data-param="{key}" x1="{_num(t)}" y1="0" '
                       f'x2="{_num(t)}" y2="{_num(n_hi)}" stroke="#bbb" stroke-dasharray="2 3" '
                       f'vector-effect="non-scaling-stroke"/>')
    points = " ".join(f"{_num(t)},{_num(n)}" for t, n in curve.breakpoints)
    out.append(f'<polyline points="{points}" fill="none" stroke="#1f4e9e" stroke-width="2" '
               f'vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    for key in ("potn", "thresh", "igmax", "igfat"):
        n = notes.get(key)
        if n is not None:
            out.append(f'<text x="{left - 4}" y="{_num(py(n) + 4)}" text-anchor="end">{key} {_num(n)}</text>')
    for key in ("p50", "igtig", "igtex", "d50"):
        t = notes.get(key)
        if t is not None:
            out.append(f'<text x="{_num(px(t))}" y="{top + ph + 14}" text-anchor="middle">{_num(t)}</text>')
    out.append(f'<text x="{left + pw / 2:g}" y="{height - 8}" text-anchor="middle">time (s)</text>')
    out.append(f'<text x="14" y="{top + ph / 2:g}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2:g})">kiloneurons</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- CAAR diagram

COLUMN_ORDER = (CaType.VISUAL, CaType.TOUCH, CaType.KINAESTHETIC, CaType.COGNITIVE, CaType.MOTOR)
BOX_W, LANE_GAP, COL_GAP = 56, 6, 40
PX_PER_S, MIN_BOX_H = 60, 10


@dataclass(frozen=True)
class _Box:
    ca_id: str
    x: float
    y: float
    w: float
    h: float
    placeholder: bool = False

    @property
    def cx(self):
        return self.x + self.w / 2

    @property
    def cy(self):
        return self.y + self.h / 2


def _lanes(spans):
    """Greedy interval colouring: spans (start, stop) -> lane index per span."""
    lane_ends: list[float] = []
    out = []
    for start, stop in spans:
        for i, end in enumerate(lane_ends):
            if start >= end:
                lane_ends[i] = stop
                out.append(i)
                break
        else:
            lane_ends.append(stop)
            out.append(len(lane_ends) - 1)
    return out


def render_caar_svg(corpus: Corpus, show_dangling: bool = False, size_by_potn: bool = False) -> str:
    """Typed columns left to right, task time running downward."""
    top, left = 50, 70
    cas = list(corpus.cas)
    t0 = min([0.0] + [ca.params.igtig for ca in cas])
    t1 = max([corpus.end_time] + [ca.params.igtig for ca in cas])

    def y_of(t):
        return top + (t - t0) * PX_PER_S

    placeholders = []
    if show_dangling:
        known = {ca.id for ca in cas}
        for edge in corpus.edges:
            if not edge.modeled:
                continue
            for missing, other in ((edge.target, edge.source), (edge.source, edge.target)):
                if missing not in known and missing not in [p[0] for p in placeholders]:
                    anchor = corpus.get(other)
                    t = anchor.params.igtig if anchor is not None else t0
                    placeholders.append((missing, t))

    boxes: dict[str, _Box] = {}
    x = left
    col_x = {}
    for ctype in COLUMN_ORDER:
        entries = []
        for ca in cas:
            if ca.ca_type is ctype:
                p = ca.params
                stop = p.igtex if p.igtex is not None else corpus.end_time
                h = max((stop - p.igtig) * PX_PER_S, MIN_BOX_H)
                entries.append((ca.id, p.igtig, h, False, p.potn))
        for pid, t in placeholders:
            try:
                ptype = ca_type_from_id(pid)
            except UnknownPrefix:
                ptype = CaType.COGNITIVE
            if ptype is ctype:
                entries.append((pid, t, MIN_BOX_H, True, None))
        entries.sort(key=lambda e: (e[1], e[0]))
        spans = [(y_of(t), y_of(t) + h + 2) for _, t, h, _, _ in entries]
        lanes = _lanes(spans)
        n_lanes = max(lanes, default=-1) + 1
        col_x[ctype] = x
        for (cid, t, h, placeholder, potn), lane in zip(entries, lanes):
            w = BOX_W
            if size_by_potn and potn:
                w = max(20, min(BOX_W, 10 + potn * 2))
            boxes[cid] = _Box(cid, x + lane * (BOX_W + LANE_GAP), y_of(t), w, h, placeholder)
        x += max(n_lanes, 1) * (BOX_W + LANE_GAP) + COL_GAP

    width = int(x + 60)
    height = int(y_of(t1) + 60)
    out = _svg_open(width, height)
    out.append("<title>CAAR diagram</title>")
    out.append('<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
               'markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>')
    # time axis
    out.append(f'<g class="axis"><line x1="{left - 20}" y1="{_num(y_of(t0))}" x2="{left - 20}" '
               f'y2="{_num(y_of(t1))}" stroke="#444"/>')
    tick = int(t0) if t0 == int(t0) else int(t0) - 1
    while tick <= t1 + _EPS:
        if tick >= t0 - _EPS:
            out.append(f'<text x="{left - 26}" y="{_num(y_of(tick) + 4)}" text-anchor="end">{tick} s</text>')
        tick += 1
    out.append(f'<text x="{left - 20}" y="{top - 30}" text-anchor="middle">time (s)</text>')
    for ctype in COLUMN_ORDER:
        out.append(f'<text class="column" x="{col_x[ctype]}" y="{top - 14}">{ctype.value}</text>')
    out.append("</g>")

    # edges first so boxes sit on top
    out.append('<g class="edges">')
    fan: dict[str, int] = {}
    for edge in corpus.edges:
        src, dst = boxes.get(edge.source), boxes.get(edge.target)
        dashed = ' stroke-dasharray="5 3"' if edge.kind is EdgeKind.INHIBIT else ""
        kind = edge.kind.value.lower()
        attrs = f'class="edge {kind}" data-source={quoteattr(edge.source)} data-target={quoteattr(edge.target)}'
        if edge.source == ENV:
            if dst is None:
                continue
            x1, y1, x2, y2 = dst.x - 24, dst.cy, dst.x, dst.cy
        elif edge.target == MOTOR:
            if src is None:
                continue
            x1, y1, x2, y2 = src.x + src.w, src.cy, src.x + src.w + 24, src.cy
        else:
            if src is None or dst is None:
                continue
            if src.placeholder or dst.placeholder:
                attrs = attrs.replace('class="edge ', 'class="edge dangling ')
            off = fan.get(edge.source, 0)
            fan[edge.source] = off + 1
            x1 = src.cx + (2 * (off % 5) - 4)
            y1 = src.y + src.h if dst.y >= src.y + src.h else src.cy
            x2, y2 = dst.cx, dst.y if dst.y > y1 else dst.cy
        out.append(f'<line {attrs} x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
                   f'stroke="#555"{dashed} marker-end="url(#arrow)"/>')
    out.append("</g>")

    out.append('<g class="boxes">')
    for ca in cas:
        out.append(_box_svg(boxes[ca.id], "ca"))
    for pid, _ in placeholders:
        out.append(_box_svg(boxes[pid], "placeholder"))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _box_svg(box: _Box, cls: str) -> str:
    style = ('fill="#fde0e0" stroke="#c00" stroke-dasharray="3 2"' if box.placeholder
             else 'fill="#eef3fb" stroke="#335"')
    return (f'<g class="{cls}" data-id="{box.ca_id}"><rect x="{_num(box.x)}" y="{_num(box.y)}" '
            f'width="{_num(box.w)}" height="{_num(box.h)}" {style}/>'
            f'<text x="{_num(box.cx)}" y="{_num(box.y + 9)}" text-anchor="middle" font-size="8">'
            f'{box.ca_id}</text></g>')


# ---------------------------------------------------------------- frames

def export_frames(traces: Sequence[Trace], frame_dt: float) -> str:
    """Frames of active CAs, one JSON object per line inside a JSON array."""
    if not traces:
        return "[]\n"
    times = traces[0].times
    for tr in traces[1:]:
        if len(tr.times) != len(times) or any(abs(a - b) > _EPS for a, b in zip(tr.times, times)):
            raise GridMismatch(f"{tr.ca_id} is sampled on a different grid from {traces[0].ca_id}")
    if not frame_dt > 0:
        raise ValueError("frame_dt must be positive")
    if len(times) > 1 and frame_dt < min(b - a for a, b in zip(times, times[1:])) - _EPS:
        raise ValueError("frame_dt is finer than the trace sampling")
    picks = []
    for t in time_grid(times[0], times[-1], frame_dt):
        i = bisect.bisect_right(times, t + _EPS) - 1
        if not picks or picks[-1] != i:
            picks.append(i)
    frames = []
    for i in picks:
        active = [{"id": tr.ca_id, "n": tr.samples[i].n, "state": tr.samples[i].state.value}
                  for tr in traces if tr.samples[i].n > 0]
        frames.append(json.dumps({"t": round(times[i], 9), "active": active}, separators=(",", ":")))
    return "[\n" + ",\n".join(frames) + "\n]\n"

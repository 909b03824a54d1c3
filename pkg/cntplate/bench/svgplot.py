# Minimal SVG line chart: axes with ticks, one polyline per series, legend.

import logging
from xml.sax.saxutils import escape

import numpy as np

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="%(width)d" height="%(height)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")

class SvgChart:
  def __init__(self, title="", x_label="", y_label="", width=640, height=420, margin=60):
    self.title = title
    self.x_label = x_label
    self.y_label = y_label
    self.width = width
    self.height = height
    self.margin = margin
    self.series = [] # (label, xs, ys)

  def add_series(self, label, xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    if not np.any(keep):
      logging.warning("series %s has no finite points, skipped", label)
      return
    order = np.argsort(xs[keep])
    self.series.append((label, xs[keep][order], ys[keep][order]))

  def _bounds(self):
    xs = np.concatenate([s[1] for s in self.series])
    ys = np.concatenate([s[2] for s in self.series])
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    if x1 == x0:
      x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05*(y1 - y0) if y1 > y0 else 0.5
    return x0, x1, y0 - pad, y1 + pad

  def _mapper(self):
    x0, x1, y0, y1 = self._bounds()
    m = self.margin
    pw, ph = self.width - 2*m, self.height - 2*m
    return (lambda x: m + (x - x0)/(x1 - x0)*pw), (lambda y: m + ph - (y - y0)/(y1 - y0)*ph), (x0, x1, y0, y1)

  def _text(self, x, y, text, anchor="middle", size=12, extra=""):
    return '<text x="%.2f" y="%.2f" text-anchor="%s" font-size="%d" font-family="sans-serif"%s>%s</text>' % (
      x, y, anchor, size, extra, escape(str(text)))

  def render(self):
    if not self.series:
      raise ValueError("chart has no series to plot")
    px, py, (x0, x1, y0, y1) = self._mapper()
    m = self.margin
    left, right, top, bottom = m, self.width - m, m, self.height - m
    commands = []
    commands.append('<polyline points="%.2f,%.2f %.2f,%.2f %.2f,%.2f" style="fill:none;stroke:#000000;stroke-width:1"/>' % (
      left, top, left, bottom, right, bottom))
    for tx in np.linspace(x0, x1, 6):
      commands.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" style="stroke:#000000"/>' % (px(tx), bottom, px(tx), bottom + 5))
      commands.append(self._text(px(tx), bottom + 18, "%.3g" % tx))
    for ty in np.linspace(y0, y1, 6):
      commands.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" style="stroke:#000000"/>' % (left - 5, py(ty), left, py(ty)))
      commands.append(self._text(left - 8, py(ty) + 4, "%.3g" % ty, anchor="end"))
    commands.append(self._text(self.width/2, top - 20, self.title, size=14))
    commands.append(self._text(self.width/2, self.height - 15, self.x_label))
    commands.append(self._text(18, self.height/2, self.y_label, extra=' transform="rotate(-90 18 %.2f)"' % (self.height/2)))

    for i, (label, xs, ys) in enumerate(self.series):
      color = COLORS[i % len(COLORS)]
      points = " ".join("%.2f,%.2f" % (px(x), py(y)) for x, y in zip(xs, ys))
      commands.append('<polyline points="%s" style="fill:none;stroke:%s;stroke-width:1.5"/>' % (points, color))
      ly = top + 10 + 16*i
      commands.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" style="stroke:%s;stroke-width:2"/>' % (
        right - 110, ly, right - 90, ly, color))
      commands.append(self._text(right - 85, ly + 4, label, anchor="start"))

    values = {"width": self.width, "height": self.height}
    return PREAMBLE % values + "\n".join(commands) + "\n" + POSTAMBLE

  def save(self, filename):
    with open(filename, "w") as f:
      f.write(self.render())
    logging.info("wrote plot with %d curve(s) to %s", len(self.series), filename)

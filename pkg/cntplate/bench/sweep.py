# Parametric sweeps over one axis of a base RunConfig.
#
# Rows are independent and run on a pool of worker threads fed from a queue;
# output is always written in sweep order.

import logging
import numbers
from dataclasses import dataclass
from queue import Queue
from threading import Event, Thread

from .config import SWEEP_AXES, ConfigError, with_value
from .runner import run_buckle
from .svgplot import SvgChart
from .tables import error_row, write_csv

class SweepError(RuntimeError):
  def __init__(self, row_id, cause):
    super().__init__("sweep row {} failed: {}".format(row_id, cause))
    self.row_id = row_id
    self.cause = cause

@dataclass(frozen=True)
class SweepSpec:
  axis: str
  values: tuple
  base: object
  series: tuple = None

  def __post_init__(self):
    if self.axis not in SWEEP_AXES:
      raise ConfigError("unknown sweep axis {!r}, expected one of {}".format(self.axis, ", ".join(SWEEP_AXES)), path="sweep.axis")
    if not self.values:
      raise ConfigError("sweep needs at least one value", path="sweep.values")
    for v in self.values:
      if (self.axis == "bc_code") != isinstance(v, str):
        raise ConfigError("value {!r} does not fit sweep axis {}".format(v, self.axis), path="sweep.values")
      if self.axis in ("aspect_ratio", "b_over_h") and not v > 0:
        raise ConfigError("{} values must be positive, got {}".format(self.axis, v), path="sweep.values")

  @classmethod
  def from_config(cls, config, axis=None, values=None, series=None):
    block = config.sweep
    axis = axis or (block.axis if block else None)
    if axis is None:
      raise ConfigError("no sweep axis given in config or on the command line", path="sweep.axis")
    if values is None:
      values = block.values if block else ()
    if series is None and block is not None:
      series = block.series
    return cls(axis=axis, values=tuple(values), base=config, series=tuple(series) if series else None)

def _apply(config, axis, value):
  if axis == "v_cn":
    return with_value(config, "cnt.v_cn", value)
  if axis == "aspect_ratio":
    return with_value(config, "geometry.length_a", value*config.geometry.plate_width_b)
  if axis == "bc_code":
    return with_value(config, "bc_code", value)
  return with_value(config, "geometry.thickness", config.geometry.plate_width_b/value)

def _format(value):
  return "{:g}".format(value) if isinstance(value, numbers.Number) else str(value)

# (row id, config) pairs, series-major then value
def expand_rows(spec):
  bases = [(None, spec.base)]
  if spec.series:
    bases = [(s, with_value(spec.base, "cnt.v_cn", s)) for s in spec.series]
  rows = []
  for s, base in bases:
    for value in spec.values:
      row_id = "{}/{}={}".format(spec.base.case_id, spec.axis, _format(value))
      if s is not None:
        row_id = "{}/v_cn={}/{}={}".format(spec.base.case_id, _format(s), spec.axis, _format(value))
      config = _apply(base, spec.axis, value)
      rows.append((row_id, with_value(config, "case_id", row_id)))
  return rows

class SweepWorker(Thread):
  def __init__(self, queue, results, failed):
    super().__init__(daemon=True)
    self.queue = queue
    self.results = results
    self.failed = failed

  def run(self):
    while True:
      item = self.queue.get()
      if item is None:
        return
      index, row_id, config = item
      if self.failed.is_set():
        logging.debug("skipping row %s after an earlier failure", row_id)
        continue
      try:
        self.results[index] = ("ok", run_buckle(config)[1])
      except Exception as e:
        logging.debug("row %s raised %s", row_id, repr(e))
        self.results[index] = ("error", e)
        self.failed.set()

# rows after a failure are skipped; one None per worker ends the pool
def _run_rows(rows, jobs):
  queue = Queue()
  results = {}
  failed = Event()
  workers = [SweepWorker(queue, results, failed) for _ in range(max(1, min(jobs, len(rows))))]
  for index, (row_id, config) in enumerate(rows):
    queue.put((index, row_id, config))
  for _ in workers:
    queue.put(None)
  for w in workers:
    w.start()
  for w in workers:
    w.join()
  return results

def plot_sweep(spec, rows, svg_path):
  if spec.axis == "bc_code":
    logging.warning("bc_code sweeps have no numeric axis, no plot written")
    return None
  labels = {"v_cn": "V_CN", "aspect_ratio": "a/b", "b_over_h": "b/h"}
  chart = SvgChart(title="Normalized critical buckling load", x_label=labels[spec.axis], y_label="lambda")
  groups = {}
  for value, row in rows:
    groups.setdefault(row["v_cn"] if spec.axis != "v_cn" else None, []).append((value, row["lambda"]))
  for v_cn, points in groups.items():
    label = "V_CN = {:g}".format(v_cn) if v_cn is not None else spec.base.case_id
    chart.add_series(label, [p[0] for p in points], [p[1] for p in points])
  chart.save(svg_path)
  return chart

def run_sweep(spec, jobs=1, csv_path=None, svg_path=None):
  rows = expand_rows(spec)
  logging.info("sweeping %s over %d value(s), %d row(s), %d worker(s)",
    spec.axis, len(spec.values), len(rows), jobs)
  results = _run_rows(rows, jobs)

  done = []
  for index, (row_id, _) in enumerate(rows):
    status, payload = results[index]
    if status == "error":
      logging.error("sweep row %s failed: %s", row_id, payload)
      if csv_path is not None:
        write_csv(done + [error_row(row_id, payload)], csv_path)
      raise SweepError(row_id, payload) from payload
    done.append(payload)

  if csv_path is not None:
    write_csv(done, csv_path)
  if svg_path is not None:
    values = [v for _ in (spec.series or (None,)) for v in spec.values]
    plot_sweep(spec, list(zip(values, done)), svg_path)
  return done

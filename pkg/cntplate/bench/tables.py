# CSV result tables and the shape checks run on aspect-ratio sweeps.

import logging

import numpy as np
import pandas as pd

CSV_COLUMNS = ["case_id", "length_a", "plate_width_b", "thickness", "n_strips", "m_sections",
  "bc_code", "v_cn", "E_eff", "nu_eff", "sigma_cr", "lambda", "norm_ref", "runtime_ms"]

# runtime_ms is wall-clock time, every other column is reproducible
REPRODUCIBLE_COLUMNS = CSV_COLUMNS[:-1]

ERROR_PREFIX = "ERROR:"

def error_row(row_id, error):
  return {"case_id": "{}{}: {}".format(ERROR_PREFIX, row_id, error)}

def to_frame(rows):
  return pd.DataFrame(list(rows), columns=CSV_COLUMNS)

def write_csv(rows, path):
  frame = to_frame(rows)
  frame.to_csv(path, index=False, float_format="%.10g")
  logging.info("wrote %d rows to %s", len(frame), path)
  return frame

def read_csv(path):
  return pd.read_csv(path, dtype={"case_id": str, "bc_code": str, "norm_ref": str})

def _results(frame):
  frame = frame[~frame["case_id"].astype(str).str.startswith(ERROR_PREFIX)]
  frame = frame.assign(aspect_ratio=np.round(frame["length_a"]/frame["plate_width_b"], 9))
  return frame

# lambda grows with v_cn at every sampled a/b
def curves_ordered(frame):
  frame = _results(frame)
  table = frame.pivot_table(index="aspect_ratio", columns="v_cn", values="lambda", aggfunc="first")
  table = table.sort_index(axis=1)
  if table.shape[1] < 2:
    return True
  ordered = np.all(np.diff(table.to_numpy(), axis=1) > 0)
  if not ordered:
    logging.debug("curves cross:\n%s", table)
  return bool(ordered)

# garland amplitude (max - min of lambda) on each unit interval of a/b >= 1
def garland_amplitudes(frame, v_cn):
  curve = _results(frame)
  curve = curve[np.isclose(curve["v_cn"], v_cn)].sort_values("aspect_ratio")
  r = curve["aspect_ratio"].to_numpy()
  lam = curve["lambda"].to_numpy()
  amplitudes = []
  for k in range(1, int(np.floor(r.max())) if len(r) else 1):
    window = lam[(r >= k - 1e-9) & (r <= k + 1 + 1e-9)]
    if len(window) >= 2:
      amplitudes.append(float(window.max() - window.min()))
  return amplitudes

# every curve's garland amplitude shrinks as a/b grows
def curves_flatten(frame, rel_slack=1e-3):
  for v_cn in sorted(_results(frame)["v_cn"].unique()):
    amp = garland_amplitudes(frame, v_cn)
    if len(amp) < 2:
      logging.warning("curve v_cn=%g spans fewer than two unit intervals of a/b", v_cn)
      return False
    if any(b > a*(1 + rel_slack) + 1e-12 for a, b in zip(amp, amp[1:])) or not amp[-1] < amp[0]:
      logging.debug("curve v_cn=%g does not flatten: %s", v_cn, amp)
      return False
  return True

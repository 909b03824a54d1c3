# JSON run configuration, parsed strictly: unknown keys are errors.

import json
import logging
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

class ConfigError(ValueError):
  def __init__(self, message, path=None):
    super().__init__("{}: {}".format(path, message) if path else message)
    self.path = path

class _Strict(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

class Geometry(_Strict):
  length_a: float
  plate_width_b: float
  thickness: float

class Matrix(_Strict):
  E: float
  nu: float

# Hill moduli of the nanotube (GPa) and its volume fraction
class Cnt(_Strict):
  k: float
  l: float
  m: float
  n: float
  p: float
  v_cn: float = 0.0

class Mesh(_Strict):
  n_strips: int = 8
  m_sections: int = 12

class Load(_Strict):
  sx0: float = 0.0
  sy0: float = 1.0
  sxy0: float = 0.0

class Output(_Strict):
  csv: Optional[str] = None
  svg: Optional[str] = None

SWEEP_AXES = ("v_cn", "aspect_ratio", "bc_code", "b_over_h")

class SweepBlock(_Strict):
  axis: Literal["v_cn", "aspect_ratio", "bc_code", "b_over_h"]
  values: List[Union[float, str]] = Field(min_length=1)
  series: Optional[List[float]] = None

class RunConfig(_Strict):
  case_id: str = "case"
  description: str = ""
  geometry: Geometry
  matrix: Matrix
  cnt: Cnt
  mesh: Mesh = Mesh()
  bc_code: str = "SSSS"
  load: Load = Load()
  normalization: Literal["matrix", "effective"]
  output: Output = Output()
  sweep: Optional[SweepBlock] = None

def _error_path(e):
  err = e.errors()[0]
  return ".".join(str(part) for part in err["loc"]), err["msg"]

def parse_config(data):
  try:
    return RunConfig.model_validate(data)
  except ValidationError as e:
    path, msg = _error_path(e)
    raise ConfigError(msg, path=path) from e

def load_config(path):
  try:
    with open(path) as f:
      data = json.load(f)
  except OSError as e:
    raise ConfigError("unable to read config: {}".format(e.strerror), path=str(path)) from e
  except json.JSONDecodeError as e:
    raise ConfigError("invalid JSON at line {} column {}: {}".format(e.lineno, e.colno, e.msg), path=str(path)) from e
  config = parse_config(data)
  logging.debug("loaded config %s from %s", config.case_id, path)
  return config

# copy of config with one dotted field replaced, revalidated
def with_value(config, dotted_path, value):
  data = config.model_dump()
  node = data
  keys = dotted_path.split(".")
  for key in keys[:-1]:
    node = node[key]
  node[keys[-1]] = value
  return parse_config(data)

def parse_mesh(text):
  try:
    strips, sections = (int(part) for part in text.lower().split("x"))
  except ValueError:
    raise ConfigError("mesh must look like <strips>x<sections>, got {!r}".format(text), path="mesh") from None
  return Mesh(n_strips=strips, m_sections=sections)

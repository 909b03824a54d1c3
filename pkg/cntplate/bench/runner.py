# One analysis from a RunConfig: homogenize, assemble, solve, normalize.

import logging
import time
from dataclasses import dataclass, replace

from cntplate.material.micromechanics import (CompositeSpec, HillModuli, IsotropicElastic, MicromechanicsError,
  homogenize, matrix_equivalent_hill)
from cntplate.solver.eigensolver import smallest_critical_load
from cntplate.strip.assembly import LoadState, PlateModelError, assemble_global, make_plate

from .config import ConfigError, Mesh, parse_config

# printed benchmark factors for a square plate at v_cn = 0
SQUARE_PLATE_REFERENCES = {"SSSS": 4.000, "SCSC": 7.721, "SCSS": 5.979, "CCCC": 10.072}
SQUARE_PLATE_TOLERANCES = {"SSSS": 0.005, "SCSC": 0.01, "SCSS": 0.05, "CCCC": 0.01}

_PLATE_FIELDS = {
  "plate_width_b": "geometry.plate_width_b",
  "length_a": "geometry.length_a",
  "thickness": "geometry.thickness",
  "n_strips": "mesh.n_strips",
  "m_sections": "mesh.m_sections",
  "bc_code": "bc_code",
  "load": "load"}

def build_composite(config):
  try:
    matrix = IsotropicElastic(E=config.matrix.E, nu=config.matrix.nu)
  except MicromechanicsError as e:
    raise ConfigError(str(e), path="matrix." + (e.field or "E")) from e
  c = config.cnt
  try:
    cnt = HillModuli(k=c.k, l=c.l, m=c.m, n=c.n, p=c.p)
  except MicromechanicsError as e:
    raise ConfigError(str(e), path="cnt." + (e.field or "k")) from e
  try:
    return CompositeSpec(matrix=matrix, cnt=cnt, v_cn=c.v_cn)
  except MicromechanicsError as e:
    raise ConfigError(str(e), path="cnt.v_cn") from e

def build_material(config):
  spec = build_composite(config)
  try:
    return homogenize(spec)
  except MicromechanicsError as e:
    raise ConfigError(str(e), path="cnt" if e.field in (None, "cnt") else "cnt." + e.field) from e

def build_plate(config, q):
  g = config.geometry
  try:
    load = LoadState(sx0=config.load.sx0, sy0=config.load.sy0, sxy0=config.load.sxy0)
    return make_plate(g.plate_width_b, g.length_a, g.thickness, q,
      n_strips=config.mesh.n_strips, m_sections=config.mesh.m_sections, bc_code=config.bc_code, load=load)
  except PlateModelError as e:
    raise ConfigError(str(e), path=_PLATE_FIELDS.get(e.field, "geometry")) from e

def reference_constants(config, material):
  if config.normalization == "matrix":
    return config.matrix.E, config.matrix.nu
  return material.effective.E, material.effective.nu

def run_buckle(config):
  start = time.perf_counter()
  material = build_material(config)
  model = build_plate(config, material.q)
  system = assemble_global(model)
  result = smallest_critical_load(system)
  result = replace(result, metadata=dict(result.metadata, n_strips=model.n_strips, m_sections=model.grid.m_sections,
    bc_code=model.bc_code, n_dofs=system.n_dofs))
  E_ref, nu_ref = reference_constants(config, material)
  result = result.normalized(E_ref, nu_ref, model.plate_width_b, model.thickness, config.normalization)
  runtime_ms = (time.perf_counter() - start)*1000

  g = config.geometry
  row = {
    "case_id": config.case_id,
    "length_a": g.length_a,
    "plate_width_b": g.plate_width_b,
    "thickness": g.thickness,
    "n_strips": config.mesh.n_strips,
    "m_sections": config.mesh.m_sections,
    "bc_code": model.bc_code,
    "v_cn": config.cnt.v_cn,
    "E_eff": material.effective.E,
    "nu_eff": material.effective.nu,
    "sigma_cr": result.sigma_cr,
    "lambda": result.lam,
    "norm_ref": config.normalization,
    "runtime_ms": runtime_ms}
  logging.info("%s: %s a=%g b=%g h=%g v_cn=%g sigma_cr=%.6g lambda=%.5f (%.0f ms)",
    config.case_id, model.bc_code, g.length_a, g.plate_width_b, g.thickness, config.cnt.v_cn,
    result.sigma_cr, result.lam, runtime_ms)
  return result, row

def square_plate_config(bc_code, mesh=None):
  matrix = IsotropicElastic(E=2.1, nu=0.34)
  hill = matrix_equivalent_hill(matrix)
  mesh = mesh or Mesh()
  return parse_config({
    "case_id": "square-" + bc_code,
    "description": "square plate, b/h = 100, pure matrix",
    "geometry": {"length_a": 1.0, "plate_width_b": 1.0, "thickness": 0.01},
    "matrix": {"E": matrix.E, "nu": matrix.nu},
    "cnt": {"k": hill.k, "l": hill.l, "m": hill.m, "n": hill.n, "p": hill.p, "v_cn": 0.0},
    "mesh": {"n_strips": mesh.n_strips, "m_sections": mesh.m_sections},
    "bc_code": bc_code,
    "normalization": "effective"})

@dataclass(frozen=True)
class BenchmarkCheck:
  bc_code: str
  reference: float
  tolerance: float
  lam: float = None
  error: str = None

  @property
  def delta(self):
    return None if self.lam is None else (self.lam - self.reference)/self.reference

  @property
  def passed(self):
    return self.error is None and abs(self.delta) <= self.tolerance

@dataclass(frozen=True)
class ValidationReport:
  checks: tuple
  mesh: Mesh

  @property
  def passed(self):
    return all(c.passed for c in self.checks)

  def lines(self):
    out = ["Square plate benchmark, mesh {}x{}".format(self.mesh.n_strips, self.mesh.m_sections)]
    for c in self.checks:
      if c.error is not None:
        out.append("{:5s} reference {:7.3f}  FAIL  {}".format(c.bc_code, c.reference, c.error))
      else:
        out.append("{:5s} reference {:7.3f}  computed {:8.4f}  delta {:+.3%}  tol {:.2%}  {}".format(
          c.bc_code, c.reference, c.lam, c.delta, c.tolerance, "PASS" if c.passed else "FAIL"))
    out.append("overall: {}".format("PASS" if self.passed else "FAIL"))
    return out

def validate_table2(tolerance=None, mesh=None):
  mesh = mesh or Mesh()
  default = Mesh()
  if mesh.n_strips < default.n_strips or mesh.m_sections < default.m_sections:
    logging.warning("validation mesh %dx%d is coarser than the default %dx%d",
      mesh.n_strips, mesh.m_sections, default.n_strips, default.m_sections)
  checks = []
  for bc_code, reference in SQUARE_PLATE_REFERENCES.items():
    tol = tolerance if tolerance is not None else SQUARE_PLATE_TOLERANCES[bc_code]
    try:
      result, _ = run_buckle(square_plate_config(bc_code, mesh))
      checks.append(BenchmarkCheck(bc_code=bc_code, reference=reference, tolerance=tol, lam=result.lam))
    except Exception as e:
      logging.error("benchmark %s failed: %s", bc_code, e)
      checks.append(BenchmarkCheck(bc_code=bc_code, reference=reference, tolerance=tol, error=str(e)))
  return ValidationReport(checks=tuple(checks), mesh=mesh)

# Spline finite strip discretization of a thin plate in classical plate theory.
#
# The plate spans x in [0, plate_width_b] across the strips and y in
# [0, length_a] along them. Nodal lines sit at x_k = k*b/n_strips and carry
# two amplitude blocks each: w and theta = dw/dx, m+3 spline amplitudes per
# block. Global ordering follows the nodal lines:
#   [w_0 block, theta_0 block, w_1 block, theta_1 block, ...]
# so a strip's local vector [w_i, theta_i, w_j, theta_j] is one contiguous
# slice of the global vector.
#
# Stresses are compression positive: the plate buckles where K - sigma*Kg
# is singular, Kg built from the reference load state.

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import block_diag, eigvalsh

from .spline import EndCondition, KnotGrid, SplineDomainError, basis_matrix, build_constraint_transform, hermite_vector

GAUSS_POINTS = 4
THIN_PLATE_LIMIT = 1/20
# eigenvalues of K below this fraction of trace(K) count as rigid modes
NULLSPACE_TOLERANCE = 1e-10

# curvature operators: chi = (-w_xx, -w_yy, -2 w_xy)
# entries are (scale, x derivative order, y derivative order)
_BENDING_ROWS = ((-1.0, 2, 0), (-1.0, 0, 2), (-2.0, 1, 1))
_SLOPE_ROWS = ((1.0, 1, 0), (1.0, 0, 1))

class PlateModelError(ValueError):
  def __init__(self, message, field=None):
    super().__init__(message)
    self.field = field

class MechanismError(RuntimeError):
  pass

@dataclass(frozen=True)
class LoadState:
  sx0: float = 0.0
  sy0: float = 1.0
  sxy0: float = 0.0

  def __post_init__(self):
    if self.sx0 == 0 and self.sy0 == 0 and self.sxy0 == 0:
      raise PlateModelError("reference load state has no nonzero component", field="load")

  def as_matrix(self):
    return np.array([[self.sx0, self.sxy0], [self.sxy0, self.sy0]])

@dataclass(frozen=True)
class CurvatureVector:
  rho_x: float
  rho_y: float
  rho_xy: float

@dataclass(frozen=True)
class PlateModel:
  plate_width_b: float
  length_a: float
  thickness: float
  q: object
  n_strips: int
  grid: KnotGrid
  bc_code: str
  load: LoadState

  @property
  def strip_width(self):
    return self.plate_width_b/self.n_strips

  @property
  def ends(self):
    return EndCondition.from_letter(self.bc_code[0]), EndCondition.from_letter(self.bc_code[2])

  @property
  def sides(self):
    return EndCondition.from_letter(self.bc_code[1]), EndCondition.from_letter(self.bc_code[3])

  def strips(self):
    return [Strip(index=s, x0=s*self.strip_width, width=self.strip_width, grid=self.grid) for s in range(self.n_strips)]

@dataclass(frozen=True)
class Strip:
  index: int
  x0: float
  width: float
  grid: KnotGrid

  @property
  def n_dofs(self):
    return 4*self.grid.n_splines

@dataclass(frozen=True)
class DofMap:
  n_strips: int
  n_splines: int

  @property
  def n_lines(self):
    return self.n_strips + 1

  @property
  def total(self):
    return 2*self.n_lines*self.n_splines

  # block 0 is w, block 1 is theta
  def index(self, line, block, j):
    if not (0 <= line < self.n_lines and block in (0, 1) and 0 <= j < self.n_splines):
      raise IndexError("no dof for line {} block {} amplitude {}".format(line, block, j))
    return (2*line + block)*self.n_splines + j

  def strip_slice(self, strip_index):
    start = 2*strip_index*self.n_splines
    return slice(start, start + 4*self.n_splines)

@dataclass(frozen=True)
class AssembledSystem:
  K: np.ndarray
  Kg: np.ndarray
  T: np.ndarray
  K_full: np.ndarray = field(repr=False)
  Kg_full: np.ndarray = field(repr=False)
  line_of_dof: np.ndarray = field(repr=False)
  bc_code: str = ""

  @property
  def n_dofs(self):
    return self.K.shape[0]

def make_plate(plate_width_b, length_a, thickness, q, n_strips=8, m_sections=12, bc_code="SSSS", load=None):
  for name, value in (("plate_width_b", plate_width_b), ("length_a", length_a), ("thickness", thickness)):
    if not value > 0:
      raise PlateModelError("{} must be positive, got {}".format(name, value), field=name)
  if thickness/plate_width_b > THIN_PLATE_LIMIT:
    raise PlateModelError("thickness/width {:.4g} exceeds the thin-plate limit 1/20".format(thickness/plate_width_b), field="thickness")
  if int(n_strips) != n_strips or n_strips < 2:
    raise PlateModelError("need an integer number of at least 2 strips, got {}".format(n_strips), field="n_strips")
  bc_code = str(bc_code).upper()
  if len(bc_code) != 4 or any(c not in "SCF" for c in bc_code):
    raise PlateModelError("bc_code must be four letters over S, C, F, got {!r}".format(bc_code), field="bc_code")
  try:
    grid = KnotGrid(length_a=length_a, m_sections=m_sections)
  except SplineDomainError as e:
    raise PlateModelError(str(e), field="m_sections") from e
  if thickness/plate_width_b > 0.8*THIN_PLATE_LIMIT:
    logging.warning("thickness/width %.4g is close to the thin-plate limit", thickness/plate_width_b)
  return PlateModel(plate_width_b=plate_width_b, length_a=length_a, thickness=thickness, q=q,
    n_strips=int(n_strips), grid=grid, bc_code=bc_code, load=load if load is not None else LoadState())

def flexural_rigidity(q, thickness):
  return thickness**3/12*q.as_matrix()

def _x_vectors(strip, x):
  x = x - strip.x0
  return [hermite_vector(strip.width, x, d) for d in range(3)]

def _y_vectors(strip, y):
  return [basis_matrix(strip.grid, [y], d)[0] for d in range(3)]

def bending_strain_matrix(strip, x, y):
  X = _x_vectors(strip, x)
  Y = _y_vectors(strip, y)
  return np.vstack([c*np.kron(X[dx], Y[dy]) for c, dx, dy in _BENDING_ROWS])

def geometric_strain_matrix(strip, x, y):
  X = _x_vectors(strip, x)
  Y = _y_vectors(strip, y)
  return np.vstack([c*np.kron(X[dx], Y[dy]) for c, dx, dy in _SLOPE_ROWS])

# 1-D Gauss rules: 4 points across the strip, 4 per knot span along it
def _x_quadrature(strip):
  pts, wts = leggauss(GAUSS_POINTS)
  b = strip.width
  x = (pts + 1)*b/2
  return [np.array([hermite_vector(b, xp, d) for xp in x]) for d in range(3)], wts*b/2

def _y_quadrature(grid):
  pts, wts = leggauss(GAUSS_POINTS)
  h = grid.h_knot
  starts = np.arange(grid.m_sections)*h
  y = (starts[:, None] + (pts[None, :] + 1)*h/2).ravel()
  w = np.tile(wts*h/2, grid.m_sections)
  return [basis_matrix(grid, y, d) for d in range(3)], w

# Every row of B is a Kronecker product of an x part and a y part, so the
# area integral of B_a^T c B_b splits into 1-D integrals.
def _separable_integral(strip, rows, coeffs):
  X, wx = _x_quadrature(strip)
  Y, wy = _y_quadrature(strip.grid)
  k = np.zeros((strip.n_dofs, strip.n_dofs))
  for a, (ca, ax, ay) in enumerate(rows):
    for b, (cb, bx, by) in enumerate(rows):
      c = coeffs[a, b]
      if c == 0:
        continue
      ix = X[ax].T @ (wx[:, None]*X[bx])
      iy = Y[ay].T @ (wy[:, None]*Y[by])
      k += c*ca*cb*np.kron(ix, iy)
  return k

def strip_stiffness(strip, D):
  k = _separable_integral(strip, _BENDING_ROWS, np.asarray(D))
  return (k + k.T)/2

def strip_geometric(strip, load, thickness):
  k = thickness*_separable_integral(strip, _SLOPE_ROWS, load.as_matrix())
  return (k + k.T)/2

def _side_block(side):
  if side == EndCondition.Clamped:
    return (0, 1)
  if side == EndCondition.Simple:
    return (0,)
  return ()

def constraint_matrix(model):
  end0, end1 = model.ends
  side0, side1 = model.sides
  ty = build_constraint_transform(model.grid, end0, end1).matrix
  n = model.grid.n_splines
  blocks = []
  lines = []
  for line in range(model.n_strips + 1):
    removed = _side_block(side0) if line == 0 else _side_block(side1) if line == model.n_strips else ()
    for block in (0, 1):
      if block in removed:
        blocks.append(np.zeros((n, 0)))
      else:
        blocks.append(ty)
        lines.extend([line]*ty.shape[1])
  return block_diag(*blocks), np.array(lines, dtype=int)

def count_rigid_modes(K):
  ev = eigvalsh(K)
  return int(np.sum(ev < NULLSPACE_TOLERANCE*np.trace(K)))

def assemble_global(model, allow_mechanism=False):
  dofs = DofMap(n_strips=model.n_strips, n_splines=model.grid.n_splines)
  D = flexural_rigidity(model.q, model.thickness)
  K_full = np.zeros((dofs.total, dofs.total))
  Kg_full = np.zeros((dofs.total, dofs.total))
  for strip in model.strips():
    sl = dofs.strip_slice(strip.index)
    K_full[sl, sl] += strip_stiffness(strip, D)
    Kg_full[sl, sl] += strip_geometric(strip, model.load, model.thickness)

  T, line_of_dof = constraint_matrix(model)
  K = T.T @ K_full @ T
  Kg = T.T @ Kg_full @ T
  K = (K + K.T)/2
  Kg = (Kg + Kg.T)/2
  logging.debug("assembled %s plate: %d strips x %d sections, %d -> %d dofs",
    model.bc_code, model.n_strips, model.grid.m_sections, dofs.total, K.shape[0])

  if not allow_mechanism:
    rigid = count_rigid_modes(K)
    if rigid > 0:
      raise MechanismError("boundary code {} leaves {} unconstrained mechanism(s)".format(model.bc_code, rigid))
  if logging.getLogger().getEffectiveLevel() <= 5:
    logging.log(5, "K diag range %.3e..%.3e, Kg diag range %.3e..%.3e",
      np.min(np.diag(K)), np.max(np.diag(K)), np.min(np.diag(Kg)), np.max(np.diag(Kg)))
  return AssembledSystem(K=K, Kg=Kg, T=T, K_full=K_full, Kg_full=Kg_full, line_of_dof=line_of_dof, bc_code=model.bc_code)

def expand(sys, reduced):
  return sys.T @ np.asarray(reduced, dtype=float)

def _locate(model, x):
  if not -1e-12 <= x <= model.plate_width_b*(1 + 1e-12):
    raise PlateModelError("x={} outside the plate [0, {}]".format(x, model.plate_width_b))
  s = min(int(x/model.strip_width), model.n_strips - 1)
  return model.strips()[s]

def _strip_dofs(model, full, strip):
  dofs = DofMap(n_strips=model.n_strips, n_splines=model.grid.n_splines)
  return np.asarray(full)[dofs.strip_slice(strip.index)]

def deflection(model, full, x, y):
  strip = _locate(model, x)
  X = hermite_vector(strip.width, x - strip.x0, 0)
  Y = basis_matrix(model.grid, [y], 0)[0]
  return float(np.kron(X, Y) @ _strip_dofs(model, full, strip))

def curvatures(model, full, x, y):
  strip = _locate(model, x)
  chi = bending_strain_matrix(strip, x, y) @ _strip_dofs(model, full, strip)
  return CurvatureVector(rho_x=chi[0], rho_y=chi[1], rho_xy=chi[2])

# {M_x, M_y, M_xy} = D chi
def moments(model, full, x, y):
  chi = curvatures(model, full, x, y)
  D = flexural_rigidity(model.q, model.thickness)
  return D @ np.array([chi.rho_x, chi.rho_y, chi.rho_xy])

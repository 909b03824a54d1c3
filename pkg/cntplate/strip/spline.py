# Uniform cubic B3-splines along the strips, Hermitian cubics across them,
# and the end-condition transforms acting on spline amplitudes.
#
# Spline i (i = -1..m+1) is centred on knot y_i = i*h_knot and supported on
# [y_{i-2}, y_{i+2}]. Amplitude vectors are indexed j = i+1 = 0..m+2.

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

class SplineDomainError(ValueError):
  pass

class EndCondition(Enum):
  Free = "F"
  Simple = "S"
  Clamped = "C"

  @classmethod
  def from_letter(cls, letter):
    try:
      return cls(letter)
    except ValueError:
      raise SplineDomainError("unknown end condition letter {!r}".format(letter)) from None

@dataclass(frozen=True)
class KnotGrid:
  length_a: float
  m_sections: int

  def __post_init__(self):
    if int(self.m_sections) != self.m_sections or self.m_sections < 3:
      raise SplineDomainError("need an integer number of at least 3 spline sections, got {}".format(self.m_sections))
    if not self.length_a > 0:
      raise SplineDomainError("spline length must be positive, got {}".format(self.length_a))
    object.__setattr__(self, "m_sections", int(self.m_sections))

  @property
  def h_knot(self):
    return self.length_a/self.m_sections

  @property
  def n_splines(self):
    return self.m_sections + 3

  # active spline indices -1..m+1
  @property
  def indices(self):
    return range(-1, self.m_sections + 2)

  def knot(self, i):
    return i*self.h_knot

  # abscissae of the active splines' centre knots, in amplitude order
  def centres(self):
    return np.arange(-1, self.m_sections + 2)*self.h_knot

@dataclass(frozen=True)
class ConstraintTransform:
  matrix: np.ndarray
  end0: EndCondition
  end1: EndCondition

  @property
  def n_full(self):
    return self.matrix.shape[0]

  @property
  def n_reduced(self):
    return self.matrix.shape[1]

  # |w|, |w'| at both ends for every column, shape (4, n_reduced)
  def residuals(self, grid):
    rows = _end_rows(grid)
    return np.abs(np.vstack([rows[0][0], rows[0][1], rows[1][0], rows[1][1]]) @ self.matrix)

# B3-spline in the local coordinate t = (y - y_i)/h, one cubic per knot span
def _b3_local(t, deriv):
  r = np.abs(t)
  s = np.sign(t)
  inner = r < 1
  outer = (r >= 1) & (r < 2)
  out = np.zeros_like(t, dtype=float)
  if deriv == 0:
    out[inner] = 2/3 - r[inner]**2 + r[inner]**3/2
    out[outer] = (2 - r[outer])**3/6
  elif deriv == 1:
    out[inner] = -2*t[inner] + 1.5*t[inner]*r[inner]
    out[outer] = -s[outer]*(2 - r[outer])**2/2
  elif deriv == 2:
    out[inner] = -2 + 3*r[inner]
    out[outer] = 2 - r[outer]
  else:
    raise SplineDomainError("derivative order must be 0, 1 or 2, got {}".format(deriv))
  return out

def eval_b3(grid, i, y, deriv=0):
  if i not in grid.indices:
    raise SplineDomainError("spline index {} outside the active range -1..{}".format(i, grid.m_sections + 1))
  h = grid.h_knot
  t = (np.asarray(y, dtype=float) - i*h)/h
  value = _b3_local(np.atleast_1d(t), deriv)/h**deriv
  return value.reshape(np.shape(t)) if np.ndim(t) else float(value[0])

# all active splines at the given points, shape (len(y), m+3)
def basis_matrix(grid, y, deriv=0):
  h = grid.h_knot
  y = np.atleast_1d(np.asarray(y, dtype=float))
  t = y[:, None]/h - np.arange(-1, grid.m_sections + 2)[None, :]
  return _b3_local(t, deriv)/h**deriv

def eval_series(grid, amplitudes, y, deriv=0):
  amplitudes = np.asarray(amplitudes, dtype=float)
  if amplitudes.shape != (grid.n_splines,):
    raise SplineDomainError("expected {} spline amplitudes, got {}".format(grid.n_splines, amplitudes.shape))
  value = basis_matrix(grid, y, deriv) @ amplitudes
  return value if np.ndim(y) else float(value[0])

def hermite_vector(strip_width_b, x, deriv=0):
  b = strip_width_b
  x = float(x)
  if not -1e-12*b <= x <= b*(1 + 1e-12):
    raise SplineDomainError("x={} outside the strip [0, {}]".format(x, b))
  xi = x/b
  if deriv == 0:
    return np.array([1 - 3*xi**2 + 2*xi**3, x*(1 - 2*xi + xi**2), 3*xi**2 - 2*xi**3, x*(xi**2 - xi)])
  if deriv == 1:
    return np.array([(-6*xi + 6*xi**2)/b, 1 - 4*xi + 3*xi**2, (6*xi - 6*xi**2)/b, 3*xi**2 - 2*xi])
  if deriv == 2:
    return np.array([(-6 + 12*xi)/b**2, (-4 + 6*xi)/b, (6 - 12*xi)/b**2, (6*xi - 2)/b])
  raise SplineDomainError("derivative order must be 0, 1 or 2, got {}".format(deriv))

def eval_hermite(strip_width_b, k, x, deriv=0):
  if k not in (1, 2, 3, 4):
    raise SplineDomainError("Hermite function index must be 1..4, got {}".format(k))
  return float(hermite_vector(strip_width_b, x, deriv)[k - 1])

# spline series interpolating f at the knots of [0, a] with clamped end slopes
def interpolate(grid, f, fprime):
  knots = np.arange(grid.m_sections + 1)*grid.h_knot
  rows = [basis_matrix(grid, [0.0], 1)[0]]
  rows.extend(basis_matrix(grid, knots, 0))
  rows.append(basis_matrix(grid, [grid.length_a], 1)[0])
  rhs = np.concatenate([[fprime(0.0)], [f(y) for y in knots], [fprime(grid.length_a)]])
  return np.linalg.solve(np.array(rows), rhs)

# (w row, w' row) at y=0 and at y=a
def _end_rows(grid):
  n = grid.n_splines
  w0 = basis_matrix(grid, [0.0], 0)[0]
  d0 = basis_matrix(grid, [0.0], 1)[0]
  w1 = basis_matrix(grid, [grid.length_a], 0)[0]
  d1 = basis_matrix(grid, [grid.length_a], 1)[0]
  # only the three splines overlapping an end knot contribute
  for row in (w0, d0):
    row[3:] = 0
  for row in (w1, d1):
    row[:n - 3] = 0
  return (w0, d0), (w1, d1)

def build_constraint_transform(grid, end0, end1):
  n = grid.n_splines
  (w0, d0), (w1, d1) = _end_rows(grid)
  rows = []
  eliminated = []
  if end0 in (EndCondition.Simple, EndCondition.Clamped):
    rows.append(w0)
    eliminated.append(0)
  if end0 == EndCondition.Clamped:
    rows.append(d0)
    eliminated.append(1)
  if end1 in (EndCondition.Simple, EndCondition.Clamped):
    rows.append(w1)
    eliminated.append(n - 1)
  if end1 == EndCondition.Clamped:
    rows.append(d1)
    eliminated.append(n - 2)

  kept = [j for j in range(n) if j not in eliminated]
  T = np.zeros((n, len(kept)))
  T[kept, np.arange(len(kept))] = 1.0
  if rows:
    C = np.array(rows)
    # C_E a_E + C_R a_R = 0 solved for the boundary-most amplitudes
    T[eliminated, :] = -np.linalg.solve(C[:, eliminated], C[:, kept])
  logging.log(5, "constraint transform %s/%s: %d -> %d amplitudes", end0.name, end1.name, n, len(kept))
  return ConstraintTransform(matrix=T, end0=end0, end1=end1)

# Mori-Tanaka homogenization of a matrix filled with randomly oriented,
# straight single-walled carbon nanotubes. All moduli are in GPa.

import logging
import math
from dataclasses import dataclass

import numpy as np

class MicromechanicsError(ValueError):
  def __init__(self, message, field=None):
    super().__init__(message)
    self.field = field

@dataclass(frozen=True)
class IsotropicElastic:
  E: float
  nu: float

  def __post_init__(self):
    if not math.isfinite(self.E) or self.E <= 0:
      raise MicromechanicsError("Young's modulus must be positive, got {}".format(self.E), field="E")
    if not -1 < self.nu < 0.5:
      raise MicromechanicsError("Poisson's ratio must lie in (-1, 0.5), got {}".format(self.nu), field="nu")

@dataclass(frozen=True)
class BulkShear:
  K: float
  G: float

  def __post_init__(self):
    if not self.K > 0 or not self.G > 0:
      raise MicromechanicsError("bulk and shear moduli must be positive, got K={} G={}".format(self.K, self.G))

# transversely isotropic constants of a straight nanotube
@dataclass(frozen=True)
class HillModuli:
  k: float
  l: float
  m: float
  n: float
  p: float

  def __post_init__(self):
    for name in ("k", "m", "n", "p"):
      if not getattr(self, name) > 0:
        raise MicromechanicsError("Hill modulus {} must be positive, got {}".format(name, getattr(self, name)), field=name)
    if not self.n*self.k - self.l**2 > 0:
      raise MicromechanicsError("Hill moduli violate n*k - l^2 > 0 ({}*{} - {}^2)".format(self.n, self.k, self.l), field="l")

@dataclass(frozen=True)
class CompositeSpec:
  matrix: IsotropicElastic
  cnt: HillModuli
  v_cn: float

  def __post_init__(self):
    if not 0 <= self.v_cn < 1:
      raise MicromechanicsError("CNT volume fraction must lie in [0, 1), got {}".format(self.v_cn), field="v_cn")

  @property
  def v_m(self):
    return 1 - self.v_cn

@dataclass(frozen=True)
class MTIntermediates:
  alpha_cn: float
  beta_cn: float
  delta_cn: float
  eta_cn: float

@dataclass(frozen=True)
class ReducedStiffness:
  q11: float
  q12: float
  q22: float
  q66: float

  def as_matrix(self):
    return np.array([
      [self.q11, self.q12, 0.0],
      [self.q12, self.q22, 0.0],
      [0.0, 0.0, self.q66]])

@dataclass(frozen=True)
class HomogenizedMaterial:
  matrix_moduli: BulkShear
  intermediates: MTIntermediates
  moduli: BulkShear
  effective: IsotropicElastic
  q: ReducedStiffness

def to_bulk_shear(mat):
  if mat.nu >= 0.5:
    raise MicromechanicsError("incompressible material (nu={}) has no finite bulk modulus".format(mat.nu))
  return BulkShear(K=mat.E/(3*(1 - 2*mat.nu)), G=mat.E/(2*(1 + mat.nu)))

def effective_E_nu(kg):
  K, G = kg.K, kg.G
  return IsotropicElastic(E=9*K*G/(3*K + G), nu=(3*K - 2*G)/(6*K + 2*G))

def matrix_equivalent_hill(mat):
  kg = to_bulk_shear(mat)
  K, G = kg.K, kg.G
  return HillModuli(k=K + G/3, l=K - 2*G/3, m=G, n=K + 4*G/3, p=G)

def _nonzero(value, term):
  if value == 0 or not math.isfinite(value):
    raise MicromechanicsError("vanishing denominator in {}".format(term), field="cnt")
  return value

def _intermediates(Km, Gm, cnt):
  k, l, m, n, p = cnt.k, cnt.l, cnt.m, cnt.n, cnt.p
  gk = _nonzero(Gm + k, "G_m + k_CN (alpha_CN, beta_CN, delta_CN, eta_CN)")
  gp = _nonzero(Gm + p, "G_m + p_CN (beta_CN, eta_CN)")
  beta_den = _nonzero(Gm*(3*Km + Gm) + m*(3*Km + 7*Gm), "G_m(3K_m + G_m) + m_CN(3K_m + 7G_m) (beta_CN)")
  eta_den = _nonzero(3*Km*(m + Gm) + Gm*(7*m + Gm), "3K_m(m_CN + G_m) + G_m(7m_CN + G_m) (eta_CN)")

  alpha = (3*(Km + Gm) + k - l)/(3*gk)
  # third term kept as printed, G_m appears in both numerator products
  beta = ((4*Gm + 2*k + l)/(3*gk)
    + 4*Gm/gp
    + 2*(Gm*(3*Km + Gm) + Gm*(3*Km + 7*Gm))/beta_den)/5
  delta = (n + 2*l + (2*k + l)*(3*Km + 2*Gm - l)/gk)/3
  eta = (2*(n - l)/3
    + 8*Gm*p/gp
    + 8*m*Gm*(3*Km + 4*Gm)/eta_den
    + 2*(k - l)*(2*Gm + l)/(3*gk))/5
  return MTIntermediates(alpha_cn=alpha, beta_cn=beta, delta_cn=delta, eta_cn=eta)

def mori_tanaka_random(spec):
  km = to_bulk_shear(spec.matrix)
  Km, Gm = km.K, km.G
  mt = _intermediates(Km, Gm, spec.cnt)
  vc, vm = spec.v_cn, spec.v_m
  if vc == 0:
    return km, mt
  k_den = _nonzero(vm + vc*mt.alpha_cn, "V_m + V_CN alpha_CN (K)")
  g_den = _nonzero(vm + vc*mt.beta_cn, "V_m + V_CN beta_CN (G)")
  K = Km + vc*(mt.delta_cn - 3*Km*mt.alpha_cn)/(3*k_den)
  G = Gm + vc*(mt.eta_cn - 2*Gm*mt.beta_cn)/(2*g_den)
  logging.debug("Mori-Tanaka v_cn=%g: alpha %.6g beta %.6g delta %.6g eta %.6g -> K %.6g G %.6g",
    vc, mt.alpha_cn, mt.beta_cn, mt.delta_cn, mt.eta_cn, K, G)
  return BulkShear(K=K, G=G), mt

# d(K, G)/dV_CN at V_CN = 0
def mori_tanaka_slope(spec):
  km = to_bulk_shear(spec.matrix)
  mt = _intermediates(km.K, km.G, spec.cnt)
  return (mt.delta_cn - 3*km.K*mt.alpha_cn)/3, (mt.eta_cn - 2*km.G*mt.beta_cn)/2

def reduced_stiffness(mat, g):
  if abs(mat.nu) >= 1:
    raise MicromechanicsError("reduced stiffness undefined for |nu| >= 1 (nu={})".format(mat.nu))
  if not g > 0:
    raise MicromechanicsError("shear modulus must be positive, got {}".format(g))
  q11 = mat.E/(1 - mat.nu**2)
  return ReducedStiffness(q11=q11, q12=mat.nu*q11, q22=q11, q66=g)

def homogenize(spec):
  km = to_bulk_shear(spec.matrix)
  kg, mt = mori_tanaka_random(spec)
  eff = effective_E_nu(kg)
  q = reduced_stiffness(eff, kg.G)
  logging.debug("homogenized v_cn=%g: E %.6g GPa nu %.6g", spec.v_cn, eff.E, eff.nu)
  return HomogenizedMaterial(matrix_moduli=km, intermediates=mt, moduli=kg, effective=eff, q=q)

# Smallest positive load factor of K phi = sigma Kg phi.
#
# K = L L^T is factored and the problem becomes the standard symmetric one
#   A y = mu y,  A = L^-1 Kg L^-T,  phi = L^-T y,  sigma = 1/mu
# so the critical load is the reciprocal of the largest eigenvalue of A.

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import LinAlgError, cholesky, eigh, ldl, solve_triangular

from cntplate.strip.assembly import MechanismError

MULTIPLICITY_TOLERANCE = 1e-6
# smallest admissible Cholesky pivot^2 relative to max(diag(K))
PIVOT_TOLERANCE = 1e-12

class NoBucklingError(RuntimeError):
  pass

@dataclass(frozen=True)
class BucklingResult:
  sigma_cr: float
  mode: np.ndarray = field(repr=False)
  multiplicity: int = 1
  residual: float = 0.0
  lam: float = None
  n_cr: float = None
  metadata: dict = field(default_factory=dict)

  def normalized(self, E_ref, nu_ref, plate_width_b, thickness, norm_ref):
    lam = normalized_factor(self.sigma_cr, E_ref, nu_ref, plate_width_b, thickness)
    meta = dict(self.metadata, norm_ref=norm_ref, E_ref=E_ref, nu_ref=nu_ref)
    return replace(self, lam=lam, n_cr=self.sigma_cr*thickness, metadata=meta)

def _factor(K):
  try:
    L = cholesky(K, lower=True)
  except LinAlgError as e:
    raise MechanismError("stiffness matrix is not positive definite (unconstrained mechanism)") from e
  if np.min(np.diag(L))**2 <= PIVOT_TOLERANCE*np.max(np.diag(K)):
    raise MechanismError("stiffness matrix is numerically singular (unconstrained mechanism)")
  return L

def _relative_residual(K, Kg, norms, sigma, phi):
  r = np.linalg.norm(K @ phi - sigma*(Kg @ phi))
  return r/((norms[0] + sigma*norms[1])*np.linalg.norm(phi))

def critical_loads(sys, n_modes=1):
  K, Kg = sys.K, sys.Kg
  L = _factor(K)
  A = solve_triangular(L, solve_triangular(L, Kg, lower=True).T, lower=True)
  mu, Y = eigh((A + A.T)/2)
  # eigh sorts ascending, the critical load belongs to the largest mu
  positive = mu > 1e-12*np.max(np.abs(mu)) if np.any(mu) else np.zeros_like(mu, dtype=bool)
  if not np.any(positive):
    raise NoBucklingError("load state cannot cause buckling (no positive load factor)")
  order = np.flatnonzero(positive)[::-1]
  sigmas = 1/mu[order]

  norms = (np.linalg.norm(K, 2), np.linalg.norm(Kg, 2))
  results = []
  for rank, idx in enumerate(order[:n_modes]):
    phi = solve_triangular(L, Y[:, idx], lower=True, trans='T')
    phi = phi/phi[np.argmax(np.abs(phi))]
    sigma = sigmas[rank]
    multiplicity = int(np.sum(np.abs(sigmas - sigma) <= MULTIPLICITY_TOLERANCE*sigma))
    results.append(BucklingResult(sigma_cr=float(sigma), mode=phi, multiplicity=multiplicity,
      residual=float(_relative_residual(K, Kg, norms, sigma, phi))))
  return results

def smallest_critical_load(sys):
  result = critical_loads(sys, 1)[0]
  if result.multiplicity > 1:
    logging.warning("critical load %.6g has multiplicity %d", result.sigma_cr, result.multiplicity)
  logging.debug("sigma_cr %.8g (residual %.2e, %d dofs)", result.sigma_cr, result.residual, sys.n_dofs)
  return result

# number of eigenvalues of K - sigma*Kg below zero, from the LDL^T inertia
def count_below(sys, sigma):
  _, d, _ = ldl(sys.K - sigma*sys.Kg, lower=True)
  # d is block diagonal with 1x1 and 2x2 blocks
  return int(np.sum(np.linalg.eigvalsh(d) < 0))

# lambda = N_cr 12(1-nu^2) b^2 / (pi^2 E h^3) with N_cr = sigma_cr*h
def normalized_factor(sigma_cr, E_ref, nu_ref, plate_width_b, thickness):
  n_cr = sigma_cr*thickness
  return n_cr*12*(1 - nu_ref**2)*plate_width_b**2/(math.pi**2*E_ref*thickness**3)

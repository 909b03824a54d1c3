import argparse
import logging

from scipy.linalg import LinAlgError

from cntplate.material.micromechanics import MicromechanicsError
from cntplate.solver.eigensolver import NoBucklingError
from cntplate.strip.assembly import MechanismError, PlateModelError

from .config import SWEEP_AXES, ConfigError, load_config, parse_mesh, with_value
from .runner import build_material, run_buckle, validate_table2
from .sweep import SweepError, SweepSpec, run_sweep
from .tables import write_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_OUTPUT = 4
EXIT_INTERNAL = 5

def build_parser():
  parser = argparse.ArgumentParser(description='Critical buckling loads of CNT reinforced thin plates')
  parser.add_argument('-q', '--quiet', action='store_const', dest='loglevel', const=logging.WARNING, help='Display warning messages only', default=logging.INFO)
  parser.add_argument('-D', '--debug', action='store_const', dest='loglevel', const=logging.DEBUG, help='Display verbose debugging information')
  sub = parser.add_subparsers(dest='command', required=True)

  p = sub.add_parser('homogenize', help='Print effective elastic constants and reduced stiffness')
  p.add_argument('config', help='JSON run configuration')

  p = sub.add_parser('buckle', help='Run a single buckling analysis')
  p.add_argument('config', help='JSON run configuration')
  p.add_argument('--mesh', help='Mesh override as <strips>x<sections>')
  p.add_argument('--csv', help='Write the result row to this CSV file')

  p = sub.add_parser('sweep', help='Run a parametric sweep')
  p.add_argument('config', help='JSON run configuration with optional sweep block')
  p.add_argument('--axis', choices=SWEEP_AXES, help='Swept quantity (overrides the config)')
  p.add_argument('--values', help='Comma separated sweep values (overrides the config)')
  p.add_argument('--series', help='Comma separated v_cn values, one curve each')
  p.add_argument('--jobs', type=int, default=1, help='Number of worker threads (default: 1)')
  p.add_argument('--mesh', help='Mesh override as <strips>x<sections>')
  p.add_argument('--csv', help='CSV output path (overrides the config)')
  p.add_argument('--svg', help='SVG plot output path (overrides the config)')

  p = sub.add_parser('validate', help='Check the four square-plate benchmarks')
  p.add_argument('--tolerance', type=float, help='Relative tolerance applied to every benchmark')
  p.add_argument('--mesh', help='Mesh as <strips>x<sections> (default: 8x12)')
  return parser

def _floats(text, path):
  try:
    return [float(v) for v in text.split(',') if v.strip()]
  except ValueError:
    raise ConfigError("expected comma separated numbers, got {!r}".format(text), path=path) from None

def _with_mesh(config, mesh_text):
  if mesh_text is None:
    return config
  mesh = parse_mesh(mesh_text)
  return with_value(config, 'mesh', mesh.model_dump())

def cmd_homogenize(args):
  config = load_config(args.config)
  mat = build_material(config)
  print("K_m {:.6g}  G_m {:.6g}".format(mat.matrix_moduli.K, mat.matrix_moduli.G))
  mt = mat.intermediates
  print("alpha_CN {:.6g}  beta_CN {:.6g}  delta_CN {:.6g}  eta_CN {:.6g}".format(mt.alpha_cn, mt.beta_cn, mt.delta_cn, mt.eta_cn))
  print("K {:.6g}  G {:.6g}".format(mat.moduli.K, mat.moduli.G))
  print("E_eff {:.6g}  nu_eff {:.6g}".format(mat.effective.E, mat.effective.nu))
  q = mat.q
  print("Q11 {:.6g}  Q12 {:.6g}  Q22 {:.6g}  Q66 {:.6g}".format(q.q11, q.q12, q.q22, q.q66))
  return EXIT_OK

def cmd_buckle(args):
  config = _with_mesh(load_config(args.config), args.mesh)
  result, row = run_buckle(config)
  print("sigma_cr {:.8g}  N_cr {:.8g}  lambda {:.6f}  ({} reference)".format(result.sigma_cr, result.n_cr, result.lam, config.normalization))
  if result.multiplicity > 1:
    print("multiplicity {}".format(result.multiplicity))
  csv_path = args.csv or config.output.csv
  if csv_path:
    write_csv([row], csv_path)
  return EXIT_OK

def cmd_sweep(args):
  config = _with_mesh(load_config(args.config), args.mesh)
  values = None
  if args.values is not None:
    axis = args.axis or (config.sweep.axis if config.sweep else None)
    if axis == 'bc_code':
      values = [v.strip().upper() for v in args.values.split(',') if v.strip()]
    else:
      values = _floats(args.values, 'sweep.values')
  series = _floats(args.series, 'sweep.series') if args.series is not None else None
  spec = SweepSpec.from_config(config, axis=args.axis, values=values, series=series)
  run_sweep(spec, jobs=args.jobs, csv_path=args.csv or config.output.csv, svg_path=args.svg or config.output.svg)
  return EXIT_OK

def cmd_validate(args):
  mesh = parse_mesh(args.mesh) if args.mesh else None
  report = validate_table2(tolerance=args.tolerance, mesh=mesh)
  for line in report.lines():
    print(line)
  return EXIT_OK if report.passed else EXIT_VALIDATION

COMMANDS = {'homogenize': cmd_homogenize, 'buckle': cmd_buckle, 'sweep': cmd_sweep, 'validate': cmd_validate}

def exit_code(error):
  if isinstance(error, SweepError):
    error = error.cause
  if isinstance(error, (ConfigError, MicromechanicsError, PlateModelError)):
    return EXIT_CONFIG
  if isinstance(error, (MechanismError, NoBucklingError, LinAlgError)):
    return EXIT_NUMERICAL
  if isinstance(error, OSError):
    return EXIT_OUTPUT
  return EXIT_INTERNAL

def main(argv=None):
  args = build_parser().parse_args(argv)
  logging.basicConfig(level=args.loglevel, format='%(levelname)s: %(message)s')
  try:
    return COMMANDS[args.command](args)
  except Exception as e:
    code = exit_code(e)
    if code == EXIT_INTERNAL:
      logging.exception("unexpected failure: %s", e)
    else:
      logging.error("%s", e)
    return code

import json
import math
import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from cntplate.bench.cli import main
from cntplate.bench.config import ConfigError, load_config, parse_config, parse_mesh, with_value
from cntplate.bench.runner import SQUARE_PLATE_REFERENCES, run_buckle, square_plate_config, validate_table2
from cntplate.bench.sweep import SweepError, SweepSpec, run_sweep
from cntplate.bench.tables import CSV_COLUMNS, REPRODUCIBLE_COLUMNS, curves_flatten, curves_ordered, read_csv
from cntplate.strip.assembly import MechanismError

CONFIG_DIR = os.path.join(os.path.dirname(__file__), '..', 'configs')


def swcnt_config(**overrides):
    data = {
        "case_id": "swcnt",
        "geometry": {"length_a": 1.0, "plate_width_b": 1.0, "thickness": 0.01},
        "matrix": {"E": 2.1, "nu": 0.34},
        "cnt": {"k": 271.0, "l": 88.0, "m": 17.0, "n": 1089.0, "p": 442.0, "v_cn": 0.05},
        "bc_code": "SSSS",
        "normalization": "matrix",
    }
    data.update(overrides)
    return parse_config(data)


class ConfigTestCase(unittest.TestCase):
    def test_sample_configs_load(self):
        config = load_config(os.path.join(CONFIG_DIR, 'square_ssss.json'))
        self.assertEqual(config.normalization, "effective")
        sweep = load_config(os.path.join(CONFIG_DIR, 'aspect_sweep.json'))
        self.assertEqual(sweep.sweep.axis, "aspect_ratio")
        self.assertIn("not benchmark-exact", sweep.description)

    def test_unknown_key_rejected(self):
        with self.assertRaises(ConfigError) as ctx:
            swcnt_config(geometry={"lenght_a": 1.0, "plate_width_b": 1.0, "thickness": 0.01})
        self.assertTrue(ctx.exception.path.startswith("geometry"))
        with self.assertRaises(ConfigError):
            swcnt_config(colour="blue")

    def test_normalization_required(self):
        data = swcnt_config().model_dump()
        del data["normalization"]
        with self.assertRaises(ConfigError) as ctx:
            parse_config(data)
        self.assertEqual(ctx.exception.path, "normalization")
        with self.assertRaises(ConfigError):
            swcnt_config(normalization="auto")

    def test_defaults(self):
        config = swcnt_config()
        self.assertEqual((config.mesh.n_strips, config.mesh.m_sections), (8, 12))
        self.assertEqual((config.load.sx0, config.load.sy0, config.load.sxy0), (0.0, 1.0, 0.0))

    def test_with_value(self):
        config = swcnt_config()
        changed = with_value(config, "geometry.thickness", 0.02)
        self.assertEqual(changed.geometry.thickness, 0.02)
        self.assertEqual(config.geometry.thickness, 0.01)

    def test_parse_mesh(self):
        mesh = parse_mesh("16x24")
        self.assertEqual((mesh.n_strips, mesh.m_sections), (16, 24))
        with self.assertRaises(ConfigError):
            parse_mesh("16by24")

    def test_bad_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w') as f:
                f.write('{"case_id": ')
            with self.assertRaises(ConfigError):
                load_config(path)
            with self.assertRaises(ConfigError):
                load_config(os.path.join(tmp, 'missing.json'))

    def test_downstream_errors_carry_config_path(self):
        cases = [
            (with_value(swcnt_config(), "geometry.thickness", 0.2), "geometry.thickness"),
            (with_value(swcnt_config(), "cnt.k", -1.0), "cnt.k"),
            (with_value(swcnt_config(), "cnt.v_cn", 1.2), "cnt.v_cn"),
            (with_value(swcnt_config(), "matrix.nu", 0.6), "matrix.nu"),
            (with_value(swcnt_config(), "bc_code", "SSXS"), "bc_code"),
            (with_value(swcnt_config(), "mesh.m_sections", 2), "mesh.m_sections"),
        ]
        for config, path in cases:
            with self.assertRaises(ConfigError) as ctx:
                run_buckle(config)
            self.assertEqual(ctx.exception.path, path)


class RunnerTestCase(unittest.TestCase):
    def test_square_ssss(self):
        result, row = run_buckle(square_plate_config("SSSS"))
        self.assertLessEqual(abs(result.lam - 4.0) / 4.0, 0.005)
        self.assertEqual(list(row), CSV_COLUMNS)
        self.assertEqual(row["norm_ref"], "effective")
        self.assertAlmostEqual(row["E_eff"], 2.1, places=12)

    def test_square_cccc(self):
        result, _ = run_buckle(square_plate_config("CCCC"))
        self.assertLessEqual(abs(result.lam - 10.072) / 10.072, 0.01)

    def test_deterministic_rows(self):
        _, first = run_buckle(swcnt_config())
        _, second = run_buckle(swcnt_config())
        self.assertEqual([first[c] for c in REPRODUCIBLE_COLUMNS], [second[c] for c in REPRODUCIBLE_COLUMNS])

    def test_normalization_reference(self):
        matrix_result, _ = run_buckle(swcnt_config())
        effective_result, row = run_buckle(swcnt_config(normalization="effective"))
        self.assertEqual(matrix_result.sigma_cr, effective_result.sigma_cr)
        ratio = (2.1 / (1 - 0.34 ** 2)) / (row["E_eff"] / (1 - row["nu_eff"] ** 2))
        self.assertAlmostEqual(effective_result.lam / matrix_result.lam, ratio, places=10)

    def test_lambda_invariant_under_modulus_scaling(self):
        c = 7.5
        base = swcnt_config(mesh={"n_strips": 4, "m_sections": 6})
        tube = {name: c * getattr(base.cnt, name) for name in "klmnp"}
        tube["v_cn"] = base.cnt.v_cn
        scaled = swcnt_config(mesh={"n_strips": 4, "m_sections": 6}, matrix={"E": c * 2.1, "nu": 0.34}, cnt=tube)
        for normalization in ("matrix", "effective"):
            result, _ = run_buckle(with_value(base, "normalization", normalization))
            scaled_result, _ = run_buckle(with_value(scaled, "normalization", normalization))
            self.assertLessEqual(abs(scaled_result.lam - result.lam) / result.lam, 1e-10)
            self.assertAlmostEqual(scaled_result.sigma_cr / result.sigma_cr, c, places=8)

    def test_result_carries_mesh_metadata(self):
        result, _ = run_buckle(swcnt_config(mesh={"n_strips": 4, "m_sections": 6}))
        self.assertEqual(result.metadata["n_strips"], 4)
        self.assertEqual(result.metadata["m_sections"], 6)
        self.assertEqual(result.metadata["bc_code"], "SSSS")
        self.assertEqual(result.metadata["norm_ref"], "matrix")


class ValidationTestCase(unittest.TestCase):
    def test_default_mesh_passes(self):
        report = validate_table2()
        self.assertTrue(report.passed, "\n".join(report.lines()))
        self.assertEqual([c.bc_code for c in report.checks], list(SQUARE_PLATE_REFERENCES))

    def test_tight_tolerance_fails(self):
        report = validate_table2(tolerance=1e-4)
        self.assertFalse(report.passed)
        self.assertTrue(any("FAIL" in line for line in report.lines()))

    def test_coarse_mesh_still_finite(self):
        with self.assertLogs(level="WARNING"):
            report = validate_table2(mesh=parse_mesh("2x3"))
        for check in report.checks:
            self.assertIsNone(check.error)
            self.assertTrue(math.isfinite(check.lam))
            self.assertGreater(check.lam, 0.0)
            self.assertIsNotNone(check.delta)


class SweepTestCase(unittest.TestCase):
    def test_volume_fraction_increases_lambda(self):
        spec = SweepSpec(axis="v_cn", values=(0.01, 0.05, 0.1), base=swcnt_config())
        lams = [row["lambda"] for row in run_sweep(spec)]
        self.assertTrue(all(b > a for a, b in zip(lams, lams[1:])), lams)

    def test_edge_condition_ordering(self):
        spec = SweepSpec(axis="bc_code", values=("SFSF", "SSSS", "SCSS", "SCSC"), base=swcnt_config())
        lams = [row["lambda"] for row in run_sweep(spec)]
        self.assertTrue(all(b > a for a, b in zip(lams, lams[1:])), lams)

    def test_garland_minima(self):
        base = with_value(square_plate_config("SSSS"), "mesh.m_sections", 24)
        spec = SweepSpec(axis="aspect_ratio", values=(1.0, 2.0, 3.0, 4.0), base=base)
        for row in run_sweep(spec):
            self.assertLessEqual(abs(row["lambda"] - 4.0) / 4.0, 0.005, row["case_id"])

    def test_slenderness_scaling(self):
        spec = SweepSpec(axis="b_over_h", values=(50.0, 100.0), base=square_plate_config("SSSS"))
        rows = run_sweep(spec)
        self.assertAlmostEqual(rows[0]["thickness"], 0.02)
        self.assertAlmostEqual(rows[0]["lambda"] / rows[1]["lambda"], 1.0, places=6)

    def test_parallel_matches_serial(self):
        spec = SweepSpec(axis="v_cn", values=(0.0, 0.02, 0.04, 0.06), base=swcnt_config())
        serial = run_sweep(spec, jobs=1)
        parallel = run_sweep(spec, jobs=3)
        for a, b in zip(serial, parallel):
            self.assertEqual([a[c] for c in REPRODUCIBLE_COLUMNS], [b[c] for c in REPRODUCIBLE_COLUMNS])

    def test_aspect_ratio_curves(self):
        base = with_value(swcnt_config(), "mesh.m_sections", 24)
        spec = SweepSpec(axis="aspect_ratio", values=(1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0), base=base,
            series=(0.01, 0.05, 0.1))
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, 'aspect.csv')
            svg_path = os.path.join(tmp, 'aspect.svg')
            run_sweep(spec, jobs=2, csv_path=csv_path, svg_path=svg_path)
            frame = read_csv(csv_path)
            with open(svg_path) as f:
                svg = f.read()
        self.assertEqual(list(frame.columns), CSV_COLUMNS)
        self.assertEqual(len(frame), 21)
        self.assertEqual(list(frame["v_cn"][:7]), [0.01] * 7)
        self.assertTrue(curves_ordered(frame))
        self.assertTrue(curves_flatten(frame))
        self.assertEqual(svg.count("<polyline"), 4)
        self.assertIn("V_CN = 0.05", svg)

    def test_invalid_spec(self):
        with self.assertRaises(ConfigError):
            SweepSpec(axis="thickness", values=(1.0,), base=swcnt_config())
        with self.assertRaises(ConfigError):
            SweepSpec(axis="v_cn", values=(), base=swcnt_config())
        with self.assertRaises(ConfigError):
            SweepSpec(axis="bc_code", values=(0.1,), base=swcnt_config())
        with self.assertRaises(ConfigError):
            SweepSpec(axis="b_over_h", values=(0.0,), base=swcnt_config())

    def test_failing_row_leaves_marker(self):
        real = run_buckle

        def flaky(config):
            if config.cnt.v_cn == 0.05:
                raise MechanismError("forced failure")
            return real(config)

        spec = SweepSpec(axis="v_cn", values=(0.01, 0.05, 0.1), base=swcnt_config())
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, 'partial.csv')
            with patch('cntplate.bench.sweep.run_buckle', side_effect=flaky) as runner:
                with self.assertRaises(SweepError) as ctx:
                    run_sweep(spec, csv_path=csv_path)
            frame = read_csv(csv_path)
        self.assertEqual([c.args[0].cnt.v_cn for c in runner.call_args_list], [0.01, 0.05])
        self.assertIsInstance(ctx.exception.cause, MechanismError)
        self.assertEqual(len(frame), 2)
        self.assertEqual(frame["case_id"][0], "swcnt/v_cn=0.01")
        self.assertTrue(frame["case_id"][1].startswith("ERROR:swcnt/v_cn=0.05: "))
        self.assertIn("forced failure", frame["case_id"][1])
        self.assertTrue(np.isnan(frame["lambda"][1]))

    def test_first_row_failure_stops_sweep(self):
        spec = SweepSpec(axis="v_cn", values=(0.01, 0.02, 0.03, 0.04, 0.05), base=swcnt_config())
        with patch('cntplate.bench.sweep.run_buckle', side_effect=MechanismError("forced failure")) as runner:
            with self.assertRaises(SweepError) as ctx:
                run_sweep(spec, jobs=1)
        self.assertEqual(runner.call_count, 1)
        self.assertEqual(ctx.exception.row_id, "swcnt/v_cn=0.01")

    def test_parallel_failure_keeps_earlier_rows(self):
        real = run_buckle

        def flaky(config):
            if config.cnt.v_cn == 0.03:
                raise MechanismError("forced failure")
            return real(config)

        spec = SweepSpec(axis="v_cn", values=(0.01, 0.02, 0.03, 0.04, 0.05, 0.06), base=swcnt_config())
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, 'partial.csv')
            with patch('cntplate.bench.sweep.run_buckle', side_effect=flaky):
                with self.assertRaises(SweepError) as ctx:
                    run_sweep(spec, jobs=2, csv_path=csv_path)
            frame = read_csv(csv_path)
        self.assertEqual(ctx.exception.row_id, "swcnt/v_cn=0.03")
        self.assertEqual(list(frame["case_id"][:2]), ["swcnt/v_cn=0.01", "swcnt/v_cn=0.02"])
        self.assertTrue(frame["case_id"][2].startswith("ERROR:swcnt/v_cn=0.03: "))


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write_config(self, name, **overrides):
        data = swcnt_config(**overrides).model_dump(exclude_none=True)
        data.pop("output", None)
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            json.dump(data, f)
        return path

    def test_validate_exit_codes(self):
        self.assertEqual(main(['-q', 'validate']), 0)
        self.assertEqual(main(['-q', 'validate', '--tolerance', '0.0001']), 1)

    def test_homogenize(self):
        self.assertEqual(main(['-q', 'homogenize', self.write_config('h.json')]), 0)

    def test_buckle_writes_csv(self):
        csv_path = os.path.join(self.tmp.name, 'out.csv')
        self.assertEqual(main(['-q', 'buckle', self.write_config('b.json'), '--mesh', '4x6', '--csv', csv_path]), 0)
        frame = read_csv(csv_path)
        self.assertEqual(len(frame), 1)
        self.assertEqual(frame["n_strips"][0], 4)

    def test_config_error_exit_code(self):
        path = os.path.join(self.tmp.name, 'bad.json')
        with open(path, 'w') as f:
            json.dump({"case_id": "x", "geometri": {}}, f)
        self.assertEqual(main(['-q', 'buckle', path]), 2)
        self.assertEqual(main(['-q', 'buckle', self.write_config('thick.json', geometry={
            "length_a": 1.0, "plate_width_b": 1.0, "thickness": 0.3})]), 2)

    def test_numerical_failure_exit_code(self):
        self.assertEqual(main(['-q', 'buckle', self.write_config('free.json', bc_code="FFFF")]), 3)

    def test_sweep_command(self):
        csv_path = os.path.join(self.tmp.name, 'sweep.csv')
        code = main(['-q', 'sweep', self.write_config('s.json'), '--axis', 'v_cn', '--values', '0.01,0.1',
            '--mesh', '4x6', '--jobs', '2', '--csv', csv_path])
        self.assertEqual(code, 0)
        self.assertEqual(len(read_csv(csv_path)), 2)

    def test_sweep_failure_exit_code(self):
        with patch('cntplate.bench.sweep.run_buckle', side_effect=MechanismError("forced failure")):
            code = main(['-q', 'sweep', self.write_config('f.json'), '--axis', 'bc_code', '--values', 'SSSS'])
        self.assertEqual(code, 3)

    def test_unwritable_output_exit_code(self):
        missing = os.path.join(self.tmp.name, 'missing', 'deeper')
        with self.assertLogs(level="ERROR"):
            code = main(['-q', 'buckle', self.write_config('o.json'), '--mesh', '4x6',
                '--csv', os.path.join(missing, 'out.csv')])
        self.assertEqual(code, 4)
        with self.assertLogs(level="ERROR"):
            code = main(['-q', 'sweep', self.write_config('p.json'), '--axis', 'v_cn', '--values', '0.01',
                '--mesh', '4x6', '--svg', os.path.join(missing, 'plot.svg')])
        self.assertEqual(code, 4)

    def test_unexpected_error_exit_code(self):
        with patch('cntplate.bench.cli.run_buckle', side_effect=KeyError("boom")):
            with self.assertLogs(level="ERROR"):
                code = main(['-q', 'buckle', self.write_config('u.json')])
        self.assertEqual(code, 5)

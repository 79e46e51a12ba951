import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medianqmc.plotting import convergence_svg, write_convergence_svg
from medianqmc.testbed import (
    ConvergenceRecord,
    TestFunction,
    exact_integral,
    fit_slope,
    read_records_csv,
    run_convergence,
    write_records_csv,
    write_replicates_csv,
)


class TestFunctions:
    def test_point_values(self):
        assert TestFunction("f3")(1.0) == pytest.approx(math.e, rel=1e-15)
        assert TestFunction("f2")(0.0) == 0.0
        assert TestFunction("f1")(0.25) == 0.5

    @pytest.mark.parametrize("c", [0.5, 1.5, 2.5])
    def test_f4_zero_of_factors(self, c):
        x = np.full(20, (1 / (1 + c)) ** (1 / c))
        assert TestFunction("f4", 20, c)(x) == pytest.approx(1.0, abs=1e-15)

    def test_defaults(self):
        assert TestFunction("f4", c=1.0).s == 20
        assert TestFunction("f5", c=1.0).s == 5

    def test_validation(self):
        with pytest.raises(ValueError):
            TestFunction("f1", 2)
        with pytest.raises(ValueError):
            TestFunction("f4")
        with pytest.raises(ValueError):
            TestFunction("f1", c=1.0)
        with pytest.raises(ValueError):
            TestFunction("f6")
        with pytest.raises(ValueError):
            TestFunction("f4", 3, 0.0)

    def test_labels(self):
        assert TestFunction("f4", 20, 1.5).label == "f4(c=1.5)"
        assert TestFunction("f2").label == "f2"


class TestExactIntegrals:
    def test_simple(self):
        assert exact_integral(TestFunction("f1")) == 2 / 3
        assert exact_integral(TestFunction("f2")) == 0
        assert exact_integral(TestFunction("f3")) == 1
        for c in (0.5, 1.5, 2.5):
            assert exact_integral(TestFunction("f4", 7, c)) == 1

    @pytest.mark.parametrize("fid", ["f1", "f2", "f3"])
    def test_1d_quadrature(self, fid):
        from scipy.integrate import quad

        tf = TestFunction(fid)
        val, _ = quad(lambda x: tf(x), 0, 1, epsabs=1e-14, limit=200)
        assert val == pytest.approx(tf.exact_integral(), abs=1e-12)

    @pytest.mark.parametrize("c", [0.0, 1.0, 2.0])
    def test_f5_per_coordinate_quadrature(self, c):
        # composite Simpson rule with 10^6 intervals per coordinate
        x = np.linspace(0, 1, 10**6 + 1)
        wts = np.ones_like(x)
        wts[1:-1:2], wts[2:-1:2] = 4, 2
        prod = 1.0
        for j in range(1, 6):
            prod *= math.fsum((wts * np.exp(-x / 2.0 ** (j**c))).tolist()) / (3 * 10**6)
        expected = math.prod(-(2.0 ** (j**c)) * math.expm1(-(2.0 ** -(j**c))) for j in range(1, 6))
        assert TestFunction("f5", 5, c).exact_integral() == pytest.approx(prod, abs=1e-12)
        assert TestFunction("f5", 5, c).exact_integral() == pytest.approx(expected, rel=1e-14)


def rec(m, err, **kw):
    base = dict(rule="sobol", function="f1", c=None, s=1, b=2, N=2**m, r=1, w=52, seed=0)
    base.update(kw)
    return ConvergenceRecord(m=m, abs_error=err, **base)


class TestFit:
    def test_exact_power(self):
        recs = [rec(m, 3.0 * 2.0 ** (-1.5 * m)) for m in range(6, 15)]
        assert fit_slope(recs) == pytest.approx(-1.5, abs=1e-12)

    def test_skips_small_m_and_floor(self):
        recs = [rec(m, 2.0**-m) for m in range(1, 12)] + [rec(12, 1e-15)]
        recs[0] = rec(1, 1e5)
        assert fit_slope(recs) == pytest.approx(-1.0, abs=1e-12)

    def test_all_zero_refused(self):
        tf = TestFunction("f4", 3, 1.0)
        recs = run_convergence("median-plr", tf, range(6, 9), r=3, seed=0)
        assert all(r.abs_error > 0 for r in recs)
        with pytest.raises(ValueError, match="zero"):
            fit_slope([rec(m, 0.0) for m in range(6, 10)])

    def test_too_few(self):
        with pytest.raises(ValueError):
            fit_slope([rec(6, 0.1)])


class TestRunConvergence:
    def test_sobol_f1(self):
        recs = run_convergence("sobol", TestFunction("f1"), range(6, 17))
        assert [r.N for r in recs] == [2**m for m in range(6, 17)]
        assert all(r.r == 1 for r in recs)
        assert -1.3 <= fit_slope(recs) <= -0.8

    def test_median_f2(self):
        recs = run_convergence("median-scrambled-sobol", TestFunction("f2"), range(6, 17), r=15, seed=0)
        assert fit_slope(recs) <= -1.7

    @pytest.mark.parametrize("rule", ["median-scrambled-sobol", "median-plr"])
    def test_record_invariants(self, rule):
        tf = TestFunction("f5", 5, 1.0)
        for r in run_convergence(rule, tf, range(4, 9), r=5, seed=3):
            assert r.N == r.b**r.m
            assert len(r.replicate_errors) == 5
            assert min(r.replicate_errors) <= r.abs_error <= max(r.replicate_errors)
            assert r.abs_error <= sorted(r.replicate_errors)[2]

    def test_deterministic(self):
        tf = TestFunction("f4", 4, 0.5)
        a = run_convergence("median-plr", tf, range(5, 8), r=3, seed=11)
        b = run_convergence("median-plr", tf, range(5, 8), r=3, seed=11)
        assert [x.abs_error for x in a] == [x.abs_error for x in b]

    def test_plr_other_base(self):
        recs = run_convergence("median-plr", TestFunction("f3"), range(2, 5), r=3, b=3)
        assert [r.N for r in recs] == [9, 27, 81]

    def test_errors(self):
        with pytest.raises(ValueError):
            run_convergence("halton", TestFunction("f1"), range(2, 4))
        with pytest.raises(ValueError):
            run_convergence("sobol", TestFunction("f1"), range(2, 4), b=3)
        with pytest.raises(ValueError):
            run_convergence("sobol", TestFunction("f1"), [5, 4])


class TestCsv:
    def test_round_trip_bit_exact(self):
        tf = TestFunction("f5", 5, 2.0)
        recs = run_convergence("median-scrambled-sobol", tf, range(6, 12), r=5, seed=0)
        buf = io.StringIO()
        write_records_csv(recs, buf, {"seed": 0, "r": 5})
        back, config = read_records_csv(io.StringIO(buf.getvalue()))
        assert config == {"seed": "0", "r": "5"}
        assert back == recs
        assert fit_slope(back) == fit_slope(recs)

    def test_header(self):
        buf = io.StringIO()
        write_records_csv([rec(6, 0.1)], buf)
        assert buf.getvalue().splitlines()[0] == "rule,function,c,s,b,m,N,r,w,seed,abs_error"

    def test_replicates(self):
        buf = io.StringIO()
        write_replicates_csv([rec(6, 0.1, replicate_errors=(0.1, 0.2, 0.3))], buf)
        assert len(buf.getvalue().splitlines()) == 4

    @settings(max_examples=50)
    @given(st.lists(st.floats(1e-300, 1e3, allow_subnormal=False), min_size=2, max_size=10))
    def test_round_trip_property(self, errs):
        recs = [rec(6 + i, e, c=0.1 * i) for i, e in enumerate(errs)]
        buf = io.StringIO()
        write_records_csv(recs, buf)
        back, _ = read_records_csv(io.StringIO(buf.getvalue()))
        assert [r.abs_error for r in back] == errs
        assert [r.c for r in back] == [r.c for r in recs]


class TestSvg:
    def test_contents(self, tmp_path):
        recs = [rec(m, 2.0**-m) for m in range(6, 10)] + [rec(m, 4.0**-m, rule="median-plr") for m in range(6, 10)]
        svg = convergence_svg(recs, "demo", {"seed": 0})
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert svg.count("<polyline") == 2
        assert "seed=0" in svg
        write_convergence_svg(recs, tmp_path / "x.svg")
        import xml.etree.ElementTree as ET

        ET.parse(tmp_path / "x.svg")

    def test_zero_errors_skipped(self):
        svg = convergence_svg([rec(6, 0.0), rec(7, 0.0)])
        assert "<polyline" not in svg

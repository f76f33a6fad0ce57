import json
import math

import numpy as np
import pytest

from ccdp.errors import ConditionViolation, DimensionError, ParameterRangeError
from ccdp.harness import grid as hg
from ccdp.harness import lemmas
from ccdp.harness import report as hr
from ccdp.harness import sweeps as hs
from ccdp.harness.strong import random_strong_specs
from ccdp.rates import PRINTED

SMALL = hg.parse_grid("P = log 0.5 1024 7\nc2 = log 0.0625 4096 9\n")


class TestGrid:
    def test_parse(self):
        g = hg.parse_grid("# demo\nP = log 0.5 1048576 43\nc2 = linear 0 10 11\na = 1, 1.5, -2\nM = 2 3 4\n")
        assert g["P"].size == 43 and g["P"][0] == 0.5 and g["P"][-1] == 2.0 ** 20
        np.testing.assert_array_equal(g["c2"], np.arange(11.0))
        np.testing.assert_array_equal(g["a"], [1, 1.5, -2])
        assert hg.as_int_list(g["M"], "M") == [2, 3, 4]

    @pytest.mark.parametrize("text, lineno, fragment", [
        ("P = log 1 10 5\nc2 = lin 0 1 3\n", 2, "unknown scale"),
        ("P = 1\nfoo = 2\n", 2, "unknown axis"),
        ("P = 1\nP = 2\n", 2, "twice"),
        ("P 1 2\n", 1, "expected"),
        ("P = log 1 10\n", 1, "min max points"),
        ("P = log 1 10 2.5\n", 1, "integer"),
        ("P = log 0 10 3\n", 1, "positive"),
        ("P = 1, x\n", 1, "x"),
        ("c2 =\n", 1, "no values"),
    ])
    def test_syntax_errors(self, text, lineno, fragment):
        with pytest.raises(hg.GridSyntaxError) as e:
            hg.parse_grid(text)
        assert e.value.lineno == lineno
        assert str(e.value).startswith(f"line {lineno}:")
        assert fragment in str(e.value)

    def test_empty_file(self):
        with pytest.raises(hg.GridSyntaxError):
            hg.parse_grid("# nothing\n")

    def test_defaults(self):
        g = hg.default_grid("wsfd")
        assert g["P"].size == 43 and g["c2"].size == 57 and g["a"].size == 18
        assert g["P"][0] == 0.5 and g["P"][-1] == 2.0 ** 20
        assert g["c2"][0] == 2.0 ** -4 and g["c2"][-1] == 2.0 ** 24

    def test_default_rho(self):
        r = hg.default_rho(4)
        assert r[0] == -1 / 3 and r[-1] == 1.0 and 0.0 in r
        assert hg.default_rho(2).size == 17

    def test_empty_axis(self):
        with pytest.raises(DimensionError):
            hg.Axis("P", [])


def _report(n):
    recs = [hr.GapRecord("t", float(i + 1), 2.0, 0.5, 1.0 + i / 10, 0.5 + i / 10, "in", "out", M=2) for i in range(n)]
    return hr.GapReport("t", 1.0, recs, {"P": {"points": n}})


class TestReport:
    def test_empty_csv_is_header(self):
        assert hr.report_to_csv(_report(0)) == ",".join(hr.CSV_COLUMNS) + "\n"

    def test_three_points(self):
        text = hr.report_to_csv(_report(3))
        assert len(text.splitlines()) == 4
        assert text.splitlines()[2].startswith("t,2,2,,,,2,0.5,1.1,0.6,in,out,")

    def test_json_round_trip(self, tmp_path):
        rep = _report(3)
        path = tmp_path / "r.json"
        hr.emit_report(rep, "json", str(path))
        assert hr.load_report(str(path)) == rep
        assert json.loads(path.read_text())["summary"]["max_gap"] == pytest.approx(0.7)

    def test_pass_rule(self):
        rep = _report(7)
        assert not rep.passed and rep.worst.P == 7.0
        assert _report(6).passed  # max gap exactly 1.0

    def test_slack(self):
        rec = hr.GapRecord("t", 1.0, 1.0, 0.0, 1.0 + 5e-10, 1.0 + 5e-10, "", "")
        assert hr.GapReport("t", 1.0, [rec]).passed
        rec.gap = 1.0 + 2e-9
        assert not hr.GapReport("t", 1.0, [rec]).passed

    def test_unasserted_records_ignored(self):
        rep = _report(8)
        for r in rep.records[5:]:
            r.asserted = False
        assert rep.passed

    def test_io_errors_name_path(self, tmp_path):
        bad = tmp_path / "missing" / "r.csv"
        with pytest.raises(hr.ReportIOError, match="missing"):
            hr.emit_report(_report(1), "csv", str(bad))
        with pytest.raises(hr.ReportIOError):
            hr.emit_report(_report(1), "xml", None)

    def test_flag_printed(self):
        rep = hr.flag_printed(_report(8))
        assert not rep.gating
        assert [r.flag for r in rep.records].count(hr.PRINTED_DISCREPANCY) == 2


class TestSweeps:
    def test_wrdp2(self):
        rep = hs.gap_sweep_wrdp2(SMALL)
        assert rep.passed and len(rep.records) == 63
        point = hs.gap_sweep_wrdp2(hg.parse_grid("P = 7\nc2 = 4\n")).records[0]
        assert point.gap == pytest.approx(0.9195, abs=1e-4)

    def test_wrdpM_example(self):
        rep = hs.gap_sweep_wrdpM(hg.parse_grid("P = 1000\nc2 = 50\n"), [100])
        assert rep.records[0].gap == pytest.approx(1.54, abs=0.01)

    def test_wrdpM_printed_is_flagged(self):
        rep = hs.gap_sweep_wrdpM(SMALL, [2, 4, 8], PRINTED)
        assert not rep.gating and rep.flagged
        assert rep.theorem == "wrdp-M-printed"

    def test_wsfd2_needs_strong_scaling(self):
        with pytest.raises(ParameterRangeError):
            hs.gap_sweep_wsfd2(SMALL.with_axis(hg.Axis("a", [0.5])))

    def test_wsfd2_negative_point(self):
        rep = hs.gap_sweep_wsfd2(hg.parse_grid("P = 15\nc2 = 17\na = -1\n"))
        r = rep.records[0]
        assert rep.passed and r.gap <= 4
        assert r.gap <= r.outer - 0.25 * math.log2(16) + 1e-12

    def test_wsfd2_capped(self):
        rep = hs.gap_sweep_wsfd2(SMALL.with_axis(hg.Axis("a", [1.0])), outer="canonical")
        assert rep.theorem == "wsfd-2-capped" and rep.max_gap <= 1e-12

    def test_strong(self):
        rep = hs.gap_sweep_strong(random_strong_specs(5, 20))
        assert rep.passed and abs(hs.strong_excess(rep)) < 1e-12

    def test_strong_v2_threshold(self):
        rep = hs.gap_sweep_strong([hs.StrongSpec(1.0, 2.0, (0.2, 2.0), 4.0)])
        assert rep.records[0].claim == pytest.approx(3.5)
        assert rep.records[0].gap == pytest.approx(3.5)

    def test_strong_rejects_failing_spec(self):
        specs = random_strong_specs(5, 3) + [hs.StrongSpec(3.0, 1.0, (0.0, 1.0, 2.0))]
        with pytest.raises(ConditionViolation) as e:
            hs.gap_sweep_strong(specs)
        assert e.value.condition == "c^2 a_2^2 > P+1"

    def test_ccdpes(self):
        g = SMALL.with_axis(hg.Axis("M", [2, 3]))
        r2, rM, ru = hs.gap_sweep_ccdpes(g)
        assert r2.passed and rM.passed and ru.passed
        assert (r2.theorem, rM.theorem, ru.theorem) == ("ccdpes-2", "ccdpes-M", "unequal-2")

    def test_ccdpes_skips_infeasible(self):
        g = SMALL.with_axis(hg.Axis("M", [3])).with_axis(hg.Axis("rho", [-0.9, 0.0]))
        r2, rM, _ = hs.gap_sweep_ccdpes(g)
        assert {r.rho for r in rM.records} == {0.0}
        assert {r.rho for r in r2.records} == {-0.9, 0.0}
        assert any("M=3" in n for n in rM.notes)

    def test_unequal_assertion_mask(self):
        rep = hs.gap_sweep_unequal(SMALL)
        for r in rep.records:
            assert r.asserted == (r.c2 * math.sqrt(r.Q) >= r.P + 1)

    def test_threads_do_not_change_records(self, monkeypatch):
        monkeypatch.setenv("CCDP_THREADS", "1")
        serial = hr.report_to_json(hs.gap_sweep_wsfd2(SMALL.with_axis(hg.Axis("a", [1.5, -3.0]))))
        monkeypatch.setenv("CCDP_THREADS", "4")
        threaded = hr.report_to_json(hs.gap_sweep_wsfd2(SMALL.with_axis(hg.Axis("a", [1.5, -3.0]))))
        assert serial == threaded

    def test_threads_env_validation(self, monkeypatch):
        monkeypatch.setenv("CCDP_THREADS", "many")
        with pytest.raises(ParameterRangeError):
            hs.max_threads()

    def test_parallel_map_order(self, monkeypatch):
        monkeypatch.setenv("CCDP_THREADS", "3")
        assert hs.parallel_map(lambda x: x * x, list(range(200))) == [x * x for x in range(200)]


class TestConsistency:
    @pytest.mark.parametrize("model", ["wrdp", "wrdp-M", "wsfd", "ccdp-es", "ccdp-uneq"])
    def test_models_consistent(self, model):
        g = SMALL
        if model == "wsfd":
            g = g.with_axis(hg.Axis("a", hg.DEFAULT_A))
        rep = hs.consistency_sweep(g, model)
        assert rep.checked > 0 and rep.passed, rep.violations[:3]

    def test_swapped_self_test_fails(self):
        rep = hs.consistency_sweep(SMALL, "wrdp", swap=True)
        assert not rep.passed
        v = rep.violations[0]
        assert {"check", "P", "c2", "inner", "outer"} <= set(v)

    def test_unknown_model(self):
        with pytest.raises(ParameterRangeError):
            hs.consistency_sweep(SMALL, "nope")


class TestContinuity:
    def test_audit_lists_every_boundary(self):
        jumps = hs.continuity_audit()
        assert jumps
        by_name = {}
        for j in jumps:
            by_name.setdefault(j.function, []).append(abs(j.size))
        assert max(by_name["wrdp_inner_2"]) < 1e-9
        assert max(by_name["wrdp_outer_M"]) < 1e-9
        assert max(by_name["lapidoth_outer_2"]) < 1e-9
        # two-receiver outer form steps up as c^2 crosses 1; reported only
        assert max(by_name["wrdp_outer_2"]) > 0.1
        assert max(by_name["wrdp_outer_M_printed"]) > 0.1


class TestLemmas:
    def test_small_run_passes(self):
        rep = lemmas.lemma_validation(seed=3, n=20_000)
        assert rep.passed, rep.to_dict()
        names = [c.name for c in rep.checks]
        assert names == ["reduction", "split", "split", "sandwich"]

    def test_gamma_one_exact(self):
        rep = lemmas.lemma_validation(seed=3, n=20_000)
        assert rep.checks[2].exact_error == 0.0

    def test_sample_floor(self):
        with pytest.raises(ParameterRangeError):
            lemmas.lemma_validation(n=100)

    def test_z_scores_detect_wrong_covariance(self):
        x = np.random.default_rng(0).standard_normal((50_000, 2))
        z = lemmas.moment_z_scores(x, np.zeros(2), 1.2 * np.eye(2))
        assert max(abs(v) for v in z) > 3

import json

import pandas as pd
import pytest

from htplab import cli, suite
from htplab.utils import errors, load
from htplab.utils.reports import Report
from htplab.workbench import Workbench


wb = Workbench()

minimal = {
    "fields": [{"label": "gauss", "min_poly": [1, 0, 1]}],
    "curves": [
        {"label": "37a", "field": "gauss", "a": [0, 0, 1, -1, 0], "generator": ["0", "0"]}
    ],
    "caps": {"max_index": "300"},
}


def test_parse_config():
    config = load.parse_config(minimal)
    assert config.fields["gauss"].class_number == 1
    assert config.curves["37a"].stability == "empirical"
    assert config.caps.max_index == 300
    assert config.caps.scan_cap == load.Caps().scan_cap
    assert config.output_format == "text"


@pytest.mark.parametrize(
    "document",
    [
        [],
        {"fields": [{"min_poly": [1, 0, 1]}]},
        {"curves": [{"label": "E", "field": "nowhere", "a": [0] * 5, "generator": [0, 0]}]},  # noqa E501
        dict(minimal, caps={"max_index": -1}),
        dict(minimal, caps={"precision": "many"}),
        dict(minimal, caps={"precision": 16}),
        dict(minimal, output={"format": "xml"}),
        dict(minimal, divample=[{"label": "A", "field": "gauss"}]),
        dict(minimal, pipelines=[{"field": "gauss", "curve": "37a", "divample": "A"}]),
    ],
)
def test_parse_config_errors(document):
    with pytest.raises(errors.ConfigParse):
        load.parse_config(document)


def test_read_config(tmp_path):
    assert wb.config.source.endswith("workbench.json")
    assert "rationals" in wb.config.pipelines
    with pytest.raises(errors.ConfigParse):
        load.read_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(errors.ConfigParse):
        load.read_config(str(broken))
    path = tmp_path / "minimal.json"
    path.write_text(json.dumps(minimal))
    with pytest.warns(UserWarning):
        config = load.read_config(str(path))
    assert config.source == str(path)


def test_caps_replace():
    caps = load.Caps()
    assert caps.replace(max_index=None) == caps
    assert caps.replace(max_index=10).max_index == 10
    assert set(caps.to_dict()) >= {"max_index", "precision", "fallback_elements"}


def test_workbench():
    assert wb.field("gauss") is wb.field("gauss")
    assert wb.field("sqrt-5").class_number == 2
    assert wb.curve("x3p8x").torsion_order == 2
    assert wb.divample("gauss-sample").ell == 2
    assert wb.divample("37a-gauss").stride == 11
    assert wb.torus("gauss-sqrt2").ranks_agree
    with pytest.raises(errors.ConfigParse):
        wb.field("nowhere")
    small = Workbench(wb.config, max_index=100, precision=None)
    assert small.caps.max_index == 100
    assert small.caps.precision == wb.caps.precision
    assert small.curve("37a").max_index == 100


def test_report():
    report = Report("demo", {"x": 1}, {"big": 2**60, "small": 3, "flag": True})
    report.add_table("rows", pd.DataFrame([{"a": 1, "b": "x"}]))
    document = json.loads(report.to_json())
    assert document["results"]["big"] == str(2**60)
    assert document["tables"]["rows"] == [{"a": 1, "b": "x"}]
    assert report["small"] == 3
    assert report["rows"].shape == (1, 2)
    assert "# rows" in report.to_csv()
    assert "== demo ==" in report.render("text")
    with pytest.raises(KeyError):
        report["missing"]
    with pytest.raises(AssertionError):
        report.render("xml")


def test_cli_field_and_ideal():
    code, report = cli.run(["field", "check", "--field", "sqrt-5"])
    assert code == 0
    assert report["class_number_verified"]
    assert report["minkowski_bound"] == pytest.approx(2.847, abs=1e-3)
    assert report["strategy"] == "QuadraticImaginaryTorusWorks"
    _, report = cli.run(["ideal", "wn", "--field", "sqrt-5", "--x", "1/2,1/2"])
    assert (report["wn"], report["wd"]) == ("-2 + 1*θ", "2")
    _, report = cli.run(["ideal", "factor", "--field", "gauss", "--x", "2"])
    assert report["norm"] == "4"
    assert report["factorization"]["exponent"].tolist() == [2]


def test_cli_curve_and_lemmas():
    _, report = cli.run(["curve", "eds", "--curve", "37a", "--indices", "1-5"])
    assert report["eds"]["wd"].tolist() == ["1", "1", "1", "1", "4"]
    _, report = cli.run(["lemma", "ec3", "--curve", "37a", "--xi", "12", "--sharpen"])
    assert report["n"] == 385
    _, report = cli.run(["lemma", "ec4", "--curve", "37a", "--m", "5", "--n", "10"])
    assert (report["q"], report["holds"]) == (2, True)
    _, report = cli.run(["lemma", "dl", "--field", "gauss", "--xi", "1", "--u", "32", "--ell", "2"])  # noqa E501
    assert (report["product"], report["condition"], report["bound"]) == ("32", True, True)
    _, report = cli.run(["torus", "analyze", "--K", "gauss", "--L", "sqrt2", "--KL", "compositum"])  # noqa E501
    assert report["ranks_agree"]


def test_cli_divample_check():
    _, report = cli.run(["divample", "check", "--set", "gauss-sample", "--xs", "1-3"])
    assert not report["all_ok"]
    audit = report["audit"]
    assert audit[audit["property"] == "density"]["ok"].all()


def test_cli_htp(tmp_path):
    path = tmp_path / "witness.json"
    code, report = cli.run(["htp", "witness", "--field", "rationals", "--xi", "1", "--out", str(path)])  # noqa E501
    assert code == 0
    assert report["kind"] == "IntegerCertified"
    assert json.loads(path.read_text())["m"] == 55
    code, report = cli.run(["htp", "verify", "--witness", str(path)])
    assert code == 0
    assert report["verdict"]
    document = json.loads(path.read_text())
    document["n"] = 110
    path.write_text(json.dumps(document))
    code, report = cli.run(["htp", "verify", "--witness", str(path)])
    assert code == 2
    assert not report["verdict"]
    code, report = cli.run(["--max-index", "100", "htp", "witness", "--field", "rationals", "--xi", "2"])  # noqa E501
    assert code == 2
    assert report.cap_exhausted


def test_cli_errors(capsys):
    with pytest.raises(errors.UnknownCommand):
        cli.run(["bogus"])
    with pytest.raises(errors.UnknownCommand):
        cli.run(["field"])
    assert cli.main(["field", "check", "--field", "nowhere"]) == 1
    assert "ConfigParse" in capsys.readouterr().err
    assert cli.main(["--precision", "16", "field", "check", "--field", "gauss"]) == 1
    assert "precision must be at least" in capsys.readouterr().err
    assert cli.main(["--max-index", "0", "field", "check", "--field", "gauss"]) == 1
    capsys.readouterr()
    assert cli.main(["--format", "json", "field", "check", "--field", "gauss"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["results"]["unit_rank"] == 0


def test_suite():
    table = suite.run_suite([2, 10])
    assert list(table.columns) == ["item", "name", "passed", "detail", "seconds"]
    assert table["passed"].all()
    code, report = cli.run(["suite", "--items", "10"])
    assert code == 0
    assert report["passed"] == 1

import io
import json
import math
from fractions import Fraction

import pytest

from hydrogen_vpt.output import RunConfig, emit, format_number, render


class TestFormatNumber:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (0.4244131815783876, "0.4244131816"),
            (100000.0, "100000.0000"),
            (1e6, "1.000000000e+06"),
            (-2.5e-4, "-2.500000000e-04"),
            (0.001, "0.001000000000"),
            (0.0, "0"),
            (7, "7"),
            (True, "true"),
            (None, ""),
            ("converged", "converged"),
            (math.nan, "nan"),
            (-math.inf, "-inf"),
            (Fraction(1, 4), "0.2500000000"),
        ],
    )
    def test_rendering(self, value, expected):
        assert format_number(value) == expected

    def test_digits(self):
        assert format_number(math.pi, digits=4) == "3.142"


class TestRender:
    config = RunConfig(command="units", parameters={"kind": "field"}, precision=40)

    def test_csv(self):
        text = render(["kind", "value"], [{"kind": "field", "value": 1e5}], self.config, [{"operation": "x"}])
        lines = text.splitlines()
        assert json.loads(lines[0][len("# config: "):])["parameters"] == {"kind": "field"}
        assert lines[1] == '# event: {"operation": "x"}'
        assert lines[2:] == ["kind,value", "field,100000.0000"]

    def test_missing_cells_are_empty(self):
        text = render(["a", "b"], [{"a": 1}], self.config)
        assert text.splitlines()[-1] == "1,"

    def test_json(self):
        config = self.config.model_copy(update={"output_format": "json"})
        payload = json.loads(render(["value"], [{"value": math.nan}, {"value": 2.5}], config))
        assert payload["meta"]["config"]["precision"] == 40
        assert payload["meta"]["events"] == []
        assert payload["data"] == [{"value": "nan"}, {"value": 2.5}]

    def test_precision_defaults_to_settings(self, fresh_settings):
        assert RunConfig(command="units").precision == 50


class TestEmit:
    def test_stream(self):
        stream = io.StringIO()
        emit("abc\n", None, stream)
        assert stream.getvalue() == "abc\n"

    def test_file(self, tmp_path):
        stream = io.StringIO()
        emit("abc\n", str(tmp_path / "out.csv"), stream)
        assert (tmp_path / "out.csv").read_text() == "abc\n"
        assert stream.getvalue() == ""

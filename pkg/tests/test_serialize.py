import json
from fractions import Fraction

import pytest

from fsrk import build_extended, catalogue, catalogue_splitting
from fsrk.errors import SpecFileError
from fsrk.serialize import (extended_to_dict, scheme_from_spec,
                            splitting_from_dict, splitting_to_dict,
                            tableau_from_dict, tableau_to_dict)
from fsrk.tableau import sdirk_gamma

from conftest import worked_example_scheme


class TestTableauRoundTrip:
    @pytest.mark.parametrize("name", ["FE", "BE", "Heun", "CrankNicolson", "RK3"])
    def test_rational_lossless(self, name):
        t = catalogue(name)
        doc = tableau_to_dict(t)
        json.dumps(doc)  # must be JSON-compatible
        back = tableau_from_dict(doc)
        assert back.a == t.a and back.b == t.b and back.c == t.c

    def test_rational_strings(self):
        doc = tableau_to_dict(catalogue("Heun"))
        assert doc["b"] == ["1/2", "1/2"]
        assert doc["A"] == [["0", "0"], ["1", "0"]]

    def test_float_round_trip(self):
        t = sdirk_gamma(0.2928932188134524)
        back = tableau_from_dict(tableau_to_dict(t))
        assert back.a == t.a and back.b == t.b and back.c == t.c

    def test_missing_key(self):
        with pytest.raises(SpecFileError):
            tableau_from_dict({"A": [["0"]]})


class TestSplittingRoundTrip:
    def test_ruth_lossless(self):
        m = catalogue_splitting("Ruth", 2)
        doc = splitting_to_dict(m)
        assert doc["alpha"][0] == ["7/24", "2/3"]
        assert doc["order"] == 3
        back = splitting_from_dict(doc)
        assert back.alpha == m.alpha
        assert back.declared_order == 3


class TestSchemeSpec:
    def test_catalogue_names_resolve(self):
        s = scheme_from_spec({
            "splitting": "Strang",
            "integrators": [["Heun", "SDIRK22"], ["Heun", "SDIRK22"]],
        })
        assert s.splitting.alpha == ((Fraction(1, 2), Fraction(1)),
                                     (Fraction(1, 2), Fraction(0)))

    def test_single_row_broadcast(self):
        s = scheme_from_spec({
            "splitting": "Ruth",
            "integrators": [["RK3", "SDIRK23"]],
        })
        assert s.splitting.stages == 3
        assert s.integrators[2][1].name == "SDIRK23"

    def test_gamma_parameter(self):
        s = scheme_from_spec({
            "splitting": "Strang",
            "integrators": [[{"name": "SDIRKgamma", "gamma": "1/2"}, "Heun"]],
        })
        assert s.integrators[0][0].a[0][0] == Fraction(1, 2)

    def test_inline_splitting(self):
        s = scheme_from_spec({
            "splitting": {"name": "custom", "alpha": [["1/2", "1"], ["1/2", "0"]]},
            "integrators": [["FE", "FE"]],
        })
        assert s.splitting.name == "custom"

    def test_grid_width_mismatch(self):
        with pytest.raises(SpecFileError):
            scheme_from_spec({
                "splitting": "Ruth",
                "integrators": [["RK3", "SDIRK23", "FE"]],
            })

    def test_stage_count_mismatch(self):
        with pytest.raises(SpecFileError):
            scheme_from_spec({
                "splitting": "Ruth",
                "integrators": [["RK3", "FE"], ["RK3", "FE"]],
            })

    def test_missing_entries(self):
        with pytest.raises(SpecFileError):
            scheme_from_spec({"integrators": [["FE"]]})
        with pytest.raises(SpecFileError):
            scheme_from_spec({"splitting": "Godunov"})


class TestExtendedDocument:
    def test_worked_example_document(self):
        ext = build_extended(worked_example_scheme())
        doc = extended_to_dict(ext)
        json.dumps(doc)
        assert doc["total_stages"] == 11
        assert doc["operators"] == 3
        assert doc["b"][1] == ["0", "1/2", "1/2", "0", "0", "-1/2",
                               "0", "0", "0", "1/2", "0"]
        stage2_op2 = next(b for b in doc["blocks"]
                          if b["stage"] == 2 and b["operator"] == 2)
        assert stage2_op2["rows"] == [5, 6]

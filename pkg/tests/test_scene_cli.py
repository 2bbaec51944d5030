"""Scene files and the command line wrapper, exercised end to end."""

import json
from fractions import Fraction

import pytest

from logfol import cli, leafcomplex
from logfol.cli import Report
from logfol.scene import SceneError, load_scene, scene_fraction


def write_scene(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload, indent=1))
    return str(path)


BALANCED = {
    "germ": {"n": 2, "r": 2},
    "fields": {"v": "x1*dx1 - x2*dx2"},
    "foliation": {"generators": ["v"]},
}

UNBALANCED = {
    "germ": {"n": 2, "r": 2},
    "fields": {"v": "x1*dx1 - 2*x2*dx2"},
    "foliation": {"generators": ["v"]},
}


# -- fractions and file loading ----------------------------------------------------


def test_scene_fraction_accepts_ints_and_strings():
    assert scene_fraction(3, "x") == Fraction(3)
    assert scene_fraction("-7/2", "x") == Fraction(-7, 2)
    assert scene_fraction(" 5/3 ", "x") == Fraction(5, 3)


def test_scene_fraction_rejects_floats_and_booleans():
    with pytest.raises(SceneError, match="floating point is not allowed"):
        scene_fraction(0.5, "glue")
    with pytest.raises(SceneError, match="boolean"):
        scene_fraction(True, "glue")
    with pytest.raises(SceneError, match="cannot read"):
        scene_fraction("three halves", "glue")


def test_load_scene_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"germ": \n  [}')
    with pytest.raises(SceneError, match=r"line 2, column 4"):
        load_scene(str(path))


def test_load_scene_rejects_non_objects(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    with pytest.raises(SceneError, match="JSON object"):
        load_scene(str(path))


def test_order_precedence(tmp_path):
    path = write_scene(tmp_path, "s.json", {"order": 4, "germ": {"n": 1}})
    assert load_scene(path).order == 4
    assert load_scene(path, order=9).order == 9
    plain = write_scene(tmp_path, "p.json", {"germ": {"n": 1}})
    assert load_scene(plain).order == 6


def test_bad_order_is_rejected(tmp_path):
    path = write_scene(tmp_path, "s.json", {"order": 0})
    with pytest.raises(SceneError, match="positive integer"):
        load_scene(path)


# -- accessor validation -------------------------------------------------------------


def test_missing_key_names_the_key(tmp_path):
    path = write_scene(
        tmp_path, "s.json",
        {"germ": {"n": 2, "r": 2}, "fields": {"v": "x1*dx1"}},
    )
    with pytest.raises(SceneError, match="'foliation'"):
        load_scene(path).foliation()


def test_one_form_counts_are_checked(tmp_path):
    path = write_scene(
        tmp_path, "s.json",
        {"germ": {"n": 3, "r": 2}, "one_form": {"dlog": ["1"], "reg": []}},
    )
    with pytest.raises(SceneError, match="need 2 dlog and 1 regular"):
        load_scene(path).one_form()


def test_unknown_generator_is_rejected(tmp_path):
    path = write_scene(
        tmp_path, "s.json",
        {
            "germ": {"n": 2, "r": 2},
            "fields": {"v": "x1*dx1"},
            "foliation": {"generators": ["w"]},
        },
    )
    with pytest.raises(SceneError, match="unknown field 'w'"):
        load_scene(path).foliation()


def test_duplicate_component_names_are_rejected(tmp_path):
    path = write_scene(tmp_path, "s.json", {"components": ["A", "A"]})
    with pytest.raises(SceneError, match="duplicate"):
        load_scene(path).component_names()


def test_field_parse_errors_carry_the_key(tmp_path):
    path = write_scene(
        tmp_path, "s.json",
        {"germ": {"n": 2, "r": 1}, "fields": {"v": "x2*dx1"}},
    )
    with pytest.raises(SceneError, match=r"fields\.v.*not tangent"):
        load_scene(path).fields()


def test_params_feed_expressions(tmp_path):
    path = write_scene(
        tmp_path, "s.json",
        {
            "germ": {"n": 2, "r": 2},
            "params": {"lam": "-3/2"},
            "fields": {"v": "x1*dx1 + lam*x2*dx2"},
            "foliation": {"generators": ["v"]},
        },
    )
    fol = load_scene(path).foliation()
    assert fol.generators[0].b[1].constant_term() == Fraction(-3, 2)


# -- report plumbing ------------------------------------------------------------------


def test_report_round_trips_through_dicts():
    rep = Report(
        tool="cs-log",
        decision="value",
        summary="index 3",
        details={"index": "3", "pair": [1, 2]},
        lines=("a", "b"),
        scene="s.json",
        order=6,
    )
    assert Report.from_dict(rep.to_dict()) == rep


def test_exit_codes_by_decision():
    codes = {"yes": 0, "value": 0, "no": 1, "error": 2, "inconclusive": 3}
    for decision, code in codes.items():
        rep = Report(tool="t", decision=decision, summary="", details={})
        assert rep.exit_code() == code


# -- flat units -----------------------------------------------------------------------


def test_cli_semistable_yes(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", BALANCED)
    assert cli.main(["semistable", "check", path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("yes: flat unit exists at order 6 (the unique one)")
    assert "unit = 1" in out


def test_cli_semistable_no(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", UNBALANCED)
    assert cli.main(["semistable", "check", path]) == 1
    out = capsys.readouterr().out
    assert out.startswith("no: no flat unit; the degree-0 system is inconsistent")


def test_cli_order_override_lands_in_the_report(tmp_path):
    path = write_scene(tmp_path, "s.json", BALANCED)
    json_path = tmp_path / "report.json"
    assert cli.main(["semistable", "check", path, "--order", "3",
                     "--json", str(json_path)]) == 0
    rep = Report.from_dict(json.loads(json_path.read_text()))
    assert rep.order == 3
    assert rep.scene == path


# -- residue indices --------------------------------------------------------------------


CS_SCENE = {
    "germ": {"n": 3, "r": 3},
    "one_form": {"dlog": ["1", "2", "4"], "reg": []},
    "index_pair": [1, 2],
}


def test_cli_cs_log_value(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", CS_SCENE)
    assert cli.main(["cs", "log", path]) == 0
    assert "index 3 along the stratum of components 1 and 2" in capsys.readouterr().out


def test_cli_cs_alias_and_pair_flag(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", CS_SCENE)
    assert cli.main(["cs", "paper", path, "--pair", "1", "3"]) == 0
    assert "index 1/3" in capsys.readouterr().out


def test_cli_cs_log_default_pair_on_double_germs(tmp_path, capsys):
    scene = {
        "germ": {"n": 2, "r": 2},
        "one_form": {"dlog": ["2", "3"], "reg": []},
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["cs", "log", path]) == 0
    assert "index 0" in capsys.readouterr().out


def test_cli_cs_log_resonance_is_an_error(tmp_path, capsys):
    scene = {
        "germ": {"n": 3, "r": 3},
        "one_form": {"dlog": ["1", "1", "4"], "reg": []},
        "index_pair": [1, 2],
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["cs", "log", path]) == 2
    assert capsys.readouterr().out.startswith("error:")


def test_cli_cs_surface_value(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json", {"surface_form": {"a": "z", "b": "-3*y"}}
    )
    assert cli.main(["cs", "surface", path]) == 0
    assert "index 3 along the invariant curve" in capsys.readouterr().out


def test_cli_cs_surface_inconclusive(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json", {"surface_form": {"a": "y", "b": "y"}}
    )
    assert cli.main(["cs", "surface", path]) == 3
    assert capsys.readouterr().out.startswith("inconclusive:")


def test_cli_cs_surface_non_invariant(tmp_path):
    path = write_scene(
        tmp_path, "s.json", {"surface_form": {"a": "z", "b": "1"}}
    )
    assert cli.main(["cs", "surface", path]) == 2


# -- gluing ---------------------------------------------------------------------------


def glue_scene(ab, bc, ac):
    return {
        "components": ["A", "B", "C"],
        "double_strata": [
            {"pair": ["A", "B"], "scalar": ab},
            {"pair": ["B", "C"], "scalar": bc},
            {"pair": ["A", "C"], "scalar": ac},
        ],
        "triple_strata": [["A", "B", "C"]],
    }


def test_cli_pushout_check_passes(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", glue_scene(2, "1/2", 1))
    assert cli.main(["pushout", "check", path]) == 0
    assert "holds on all 1 triple strata" in capsys.readouterr().out


def test_cli_pushout_check_reports_the_product(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", glue_scene(2, 1, 1))
    assert cli.main(["pushout", "check", path]) == 1
    assert "cocycle fails on A|B|C with product 2" in capsys.readouterr().out


PUSHOUT_MEMBER = {
    "germ": {"n": 2, "r": 2, "names": ["x", "y"]},
    "candidate": "x*dx + y*dy",
    "components": [
        {"name": "A", "fields": {"u": "y*dy"}, "foliation": ["u"]},
        {"name": "B", "fields": {"u": "x*dx"}, "foliation": ["u"]},
    ],
}


def test_cli_pushout_member_yes(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", PUSHOUT_MEMBER)
    assert cli.main(["pushout", "member", path]) == 0
    assert "restricts into every component foliation" in capsys.readouterr().out


def test_cli_pushout_member_names_the_failing_component(tmp_path, capsys):
    scene = json.loads(json.dumps(PUSHOUT_MEMBER))
    scene["components"][1]["fields"]["u"] = "x*x*dx"
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["pushout", "member", path]) == 1
    assert "component B" in capsys.readouterr().out


# -- cohomology -----------------------------------------------------------------------


def test_cli_cohomology_p1(capsys):
    assert cli.main(["cohomology", "p1", "--deg", "-2"]) == 0
    assert "degree -2: h0 = 0, h1 = 1" in capsys.readouterr().out


def test_cli_cohomology_snc_curve(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json", {"bundle": {"left": [1, -1, 3], "right": [1, -1, 3]}}
    )
    assert cli.main(["cohomology", "snc-curve", path]) == 0
    assert "h0 = 10, h1 = 1" in capsys.readouterr().out


def test_cli_cohomology_snc_curve_with_glue(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json",
        {"bundle": {"left": [0], "right": [0], "glue": [["1/2"]]}},
    )
    assert cli.main(["cohomology", "snc-curve", path]) == 0
    assert "h0 = 1, h1 = 0" in capsys.readouterr().out


# -- leaf complexes ----------------------------------------------------------------------


def test_cli_leaf_complex_constant(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json",
        {"leaf_data": {"builder": "constant", "ce": [[[0, 0]]], "opens": 3}},
    )
    assert cli.main(["leaf-complex", path]) == 0
    assert "(2, 1, 0, 0)" in capsys.readouterr().out


def test_cli_leaf_complex_windows(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json",
        {"leaf_data": {"builder": "p1-windows", "degrees": [2], "window": 3}},
    )
    assert cli.main(["leaf-complex", path]) == 0
    assert "(3, 0, 0)" in capsys.readouterr().out


def test_cli_leaf_complex_explicit(tmp_path, capsys):
    scene = {
        "leaf_data": {
            "builder": "explicit",
            "opens": ["U0", "U1"],
            "pairs": [[0, 1]],
            "triples": [],
            "spaces": {"U0": [1], "U1": [1], "U0|U1": [1]},
            "restrictions": {
                "U0->U0|U1": [[[1]]],
                "U1->U0|U1": [[[1]]],
            },
            "ce": {"U0": [], "U1": [], "U0|U1": []},
        }
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["leaf-complex", path]) == 0
    assert "(1, 0, 0)" in capsys.readouterr().out


# -- obstruction subcommands -----------------------------------------------------------


def obstruction_scene(perturb=False):
    data = leafcomplex.constant_cover([[[1, 0], [0, 1], [1, 1]], [[1, 1, -1]]], 3)
    rho = [[1, 2], [0, 1], [3, -1]]
    hbar = [[1, 0, 2], [0, 0, 1], [1, 1, 1]]
    theta, gbar, bbar = leafcomplex.coboundary_triple(data, rho, hbar)
    gbar = [list(map(str, v)) for v in gbar]
    if perturb:
        gbar[0][0] = str(Fraction(gbar[0][0]) + 1)
    return {
        "leaf_data": {
            "builder": "constant",
            "ce": [[[1, 0], [0, 1], [1, 1]], [[1, 1, -1]]],
            "opens": 3,
        },
        "cochains": {
            "theta": [list(map(str, v)) for v in theta],
            "gbar": gbar,
            "bbar": [list(map(str, v)) for v in bbar],
        },
    }


def test_cli_obstruction_verify_yes(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", obstruction_scene())
    assert cli.main(["obstruction", "verify", path]) == 0
    out = capsys.readouterr().out
    assert "satisfies all four equations and is a total coboundary" in out
    assert "equation 1 (triple overlaps): holds" in out


def test_cli_obstruction_verify_no(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", obstruction_scene(perturb=True))
    assert cli.main(["obstruction", "verify", path]) == 1
    out = capsys.readouterr().out
    assert "violates the compatibility equations" in out
    assert "fails" in out


SL2 = [
    [[0, 0, 0], [0, 2, 0], [0, 0, -2]],
    [[0, -2, 0], [0, 0, 0], [1, 0, 0]],
    [[0, 0, 2], [-1, 0, 0], [0, 0, 0]],
]


def test_cli_obstruction_lie_vanishing(tmp_path, capsys):
    scene = {
        "lie": {
            "structure": SL2,
            "sub_basis": [[1, 0, 0], [0, 1, 0]],
            "perturbation": [[0, 0, 0], [0, 0, 0]],
            "mu": [[[0, 0, 0], [0, 0, 1]], [[0, 0, -1], [0, 0, 0]]],
        }
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["obstruction", "lie", path]) == 0
    assert "class vanishes; a corrector exists" in capsys.readouterr().out


def test_cli_obstruction_lie_blocked(tmp_path, capsys):
    solvable = [
        [[0, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, -1, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 0, -1], [0, 0, 0], [0, 0, 0]],
    ]
    scene = {
        "lie": {
            "structure": solvable,
            "sub_basis": [[1, 0, 0], [0, 1, 0]],
            "perturbation": [[0, 0, 0], [0, 0, 0]],
            "mu": [[[0, 0, 0], [0, 0, 1]], [[0, 0, -1], [0, 0, 0]]],
        }
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["obstruction", "lie", path]) == 1
    assert "does not vanish" in capsys.readouterr().out


# -- holonomy and monoids --------------------------------------------------------------


def test_cli_holonomy_compatible(tmp_path, capsys):
    scene = {
        "holonomy": {"inner": [2, "1/2"], "outer": ["1/2", 2]},
        "normal_degrees": [1, -1],
    }
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["holonomy", path]) == 0
    assert "gluing data is compatible" in capsys.readouterr().out


def test_cli_holonomy_incompatible(tmp_path, capsys):
    scene = {"holonomy": {"inner": [2, 1], "outer": [1, 1]}}
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["holonomy", path]) == 1


def test_cli_monoid_saturate(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json", {"monoid": {"ambient_rank": 1, "generators": [[2], [3]]}}
    )
    assert cli.main(["monoid", "saturate", path]) == 0
    out = capsys.readouterr().out
    assert "saturation generated by 1 vectors" in out
    assert "(1,)" in out


def test_cli_monoid_group(tmp_path, capsys):
    path = write_scene(
        tmp_path, "s.json",
        {"monoid": {"ambient_rank": 2, "generators": [[1, 0], [1, 2]]}},
    )
    assert cli.main(["monoid", "group", path]) == 0
    assert "difference group of rank 2" in capsys.readouterr().out


def test_cli_monoid_membership(tmp_path, capsys):
    scene = {"monoid": {"ambient_rank": 1, "generators": [[2], [3]]}, "element": [5]}
    path = write_scene(tmp_path, "s.json", scene)
    assert cli.main(["monoid", "check", path]) == 0
    scene["element"] = [1]
    path = write_scene(tmp_path, "t.json", scene)
    assert cli.main(["monoid", "check", path]) == 1


def test_cli_monoid_saturation_check(tmp_path):
    not_sat = write_scene(
        tmp_path, "a.json", {"monoid": {"ambient_rank": 1, "generators": [[2], [3]]}}
    )
    sat = write_scene(
        tmp_path, "b.json", {"monoid": {"ambient_rank": 1, "generators": [[1]]}}
    )
    assert cli.main(["monoid", "check", not_sat]) == 1
    assert cli.main(["monoid", "check", sat]) == 0


# -- plumbing: errors, json, batch mode --------------------------------------------------


def test_cli_requires_a_scene(capsys):
    assert cli.main(["semistable", "check"]) == 2
    assert "a scene file (or --all DIR) is required" in capsys.readouterr().err


def test_cli_reports_scene_errors(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ nope }")
    assert cli.main(["semistable", "check", str(path)]) == 2
    assert capsys.readouterr().out.startswith("error:")


def test_cli_rejects_floats_in_scenes(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", glue_scene(0.5, 2, 1))
    assert cli.main(["pushout", "check", path]) == 2
    assert "floating point is not allowed" in capsys.readouterr().out


def test_cli_json_report_round_trips(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", CS_SCENE)
    json_path = tmp_path / "out.json"
    assert cli.main(["cs", "log", path, "--json", str(json_path)]) == 0
    rep = Report.from_dict(json.loads(json_path.read_text()))
    assert rep.tool == "cs-log"
    assert rep.decision == "value"
    assert rep.details["index"] == "3"
    assert rep.exit_code() == 0


def test_cli_json_to_stdout(tmp_path, capsys):
    path = write_scene(tmp_path, "s.json", BALANCED)
    assert cli.main(["semistable", "check", path, "--json", "-"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out[out.index("{"):])
    assert payload["decision"] == "yes"


def test_cli_batch_mode_takes_the_worst_code(tmp_path, capsys):
    write_scene(tmp_path, "a_yes.json", BALANCED)
    write_scene(tmp_path, "b_no.json", UNBALANCED)
    json_path = tmp_path / "batch_report"
    assert cli.main([
        "semistable", "check", "--all", str(tmp_path), "--json", str(json_path)
    ]) == 1
    out = capsys.readouterr().out
    assert "a_yes.json: yes:" in out
    assert "b_no.json: no:" in out
    reports = [Report.from_dict(d) for d in json.loads(json_path.read_text())]
    assert [r.decision for r in reports] == ["yes", "no"]


def test_cli_batch_mode_requires_scenes(tmp_path, capsys):
    assert cli.main(["semistable", "check", "--all", str(tmp_path)]) == 2
    assert "no scene files" in capsys.readouterr().err


def test_cli_without_a_command_prints_help(capsys):
    assert cli.main([]) == 2
    assert "COMMAND" in capsys.readouterr().out


def test_cli_selftest_smoke(capsys):
    assert cli.main(["selftest", "--trials", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("yes:")
    assert "ok (2 trials)" in out

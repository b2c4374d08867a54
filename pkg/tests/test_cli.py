"""Command-line surface: exit codes, JSON contract on stdout, fixture
resolution, determinism, and the operation-coverage registry."""

import inspect
import json

import pytest

from towerforge import (
    cli,
    combinat,
    families,
    groups,
    localcond,
    localring,
    modrep,
    report as rp,
)

AUDITED_MODULES = {
    "groups": groups,
    "modrep": modrep,
    "combinat": combinat,
    "localring": localring,
    "localcond": localcond,
    "families": families,
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    obj = json.loads(out)
    rp.validate_report(obj)
    return code, obj


class TestExitCodes:
    def test_passing_command_exits_zero(self, capsys):
        code, obj = run_json(capsys, "--command", "subgroups", "--p", "2", "--n", "2")
        assert code == 0
        assert obj["verdict"] == "pass"
        assert obj["results"]["count"] == 35

    def test_missing_fixture_exits_two(self, capsys):
        code = cli.main(["--command", "ring-dichotomy", "--input", "no-such-ring"])
        assert code == 2

    def test_guard_exits_three(self, capsys):
        code = cli.main(["--command", "subgroups", "--p", "2", "--n", "30"])
        assert code == 3

    def test_unknown_command_exits_two_via_argparse(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--command", "no-such-command"])
        assert exc.value.code == 2

    def test_non_p_group_input_exits_two(self, capsys, tmp_path):
        path = tmp_path / "s3.json"
        path.write_text(json.dumps(groups.symmetric_group(3).to_json()))
        code = cli.main(["--command", "filtration", "--input", str(path), "--p", "2"])
        assert code == 2

    def test_bad_property_p_datum_exits_two(self, capsys):
        assert cli.main(["--command", "property-p", "3,6,tame"]) == 2  # q not a prime power
        assert cli.main(["--command", "property-p", "3,7,maybe"]) == 2
        assert cli.main(["--command", "property-p", "nonsense"]) == 2


class TestFixtureResolution:
    def test_builtin_group_name(self, capsys):
        code, obj = run_json(capsys, "--command", "filtration", "--input", "quaternion", "--p", "2")
        assert code == 0

    def test_packaged_ring_fixture(self, capsys):
        code, obj = run_json(capsys, "--command", "ring-dichotomy", "--input", "f2_y3")
        assert code == 0
        assert obj["results"]["branch"] == "frattini"

    def test_json_file_path_wins_over_fixture_names(self, capsys, tmp_path):
        ring = families.poly_quotient_ring(2, 1, 2)
        path = tmp_path / "ring.json"
        path.write_text(json.dumps(localring.ring_to_json(ring)))
        code, obj = run_json(capsys, "--command", "ring-dichotomy", "--input", str(path))
        assert code == 0

    def test_every_shipped_ring_fixture_resolves(self):
        manifest = cli.manifest()
        for name in manifest["shipped"]:
            ring, kernel = cli.resolve_ring(name)
            assert kernel is None
            ring.validate()
        assert len(manifest["shipped"]) == 18
        assert len(manifest["frattini_counterexamples"]) == 9


class TestCommands:
    def test_dichotomy_split_branch(self, capsys):
        code, obj = run_json(capsys, "--command", "ring-dichotomy", "--input", "z4_sq")
        assert code == 0
        assert obj["results"]["branch"] == "square-zero"

    def test_ring_split_reports_layers(self, capsys):
        code, obj = run_json(capsys, "--command", "ring-split", "--input", "mixed4")
        assert code == 0
        assert obj["results"]["tower_layers"] >= 2

    def test_lift_search_fixture_matches_frozen_expectations(self, capsys):
        code, obj = run_json(capsys, "--command", "lift-search", "--input", "f2y3_z3")
        assert code == 0
        res = obj["results"]
        assert res["found"] is False
        assert res["search_space"] == 4096
        assert res["candidates_per_generator"] == [4, 0, 16]
        assert res["pruned_by_order"] == 28

    def test_property_p_reports_verdicts_without_failing(self, capsys):
        code, obj = run_json(
            capsys, "--command", "property-p", "3,7,tame", "3,5,tame", "1,8,tame"
        )
        assert code == 0  # verdicts are results, not check failures
        verdicts = [v["property_p"] for v in obj["results"]["data"]]
        assert verdicts == [True, False, True]

    def test_congruence_plans_sample_size_override(self, capsys):
        code, obj = run_json(
            capsys, "--command", "congruence-plans", "--p", "3", "--n", "2",
            "--guard-max", "17",
        )
        assert code == 0
        assert obj["results"]["samples"] == 17

    def test_wedge_check_on_both_family_fixtures(self, capsys):
        # the command verifies that the rank oracle and the constructive
        # basis agree, so both fixtures exit 0; the verdict sits in results
        code, obj = run_json(capsys, "--command", "wedge-check", "--input", "coordinate_z2_4")
        assert code == 0
        assert obj["results"] == {"surjective": True, "constructive": True}
        code, obj = run_json(capsys, "--command", "wedge-check", "--input", "cyclic_z2_4")
        assert code == 0
        assert obj["results"] == {"surjective": False, "constructive": False}

    def test_projectors_over_builtin_group(self, capsys):
        code, obj = run_json(capsys, "--command", "projectors", "--input", "s3", "--p", "5")
        assert code == 0


class TestDeterminism:
    def test_same_seed_is_byte_identical(self, capsys):
        args = ("--command", "congruence-plans", "--p", "2", "--n", "2", "--seed", "5")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert first == second

    def test_different_seed_changes_results(self, capsys):
        base = ("--command", "congruence-plans", "--p", "2", "--n", "3")
        _, a = run(capsys, *base, "--seed", "1")
        _, b = run(capsys, *base, "--seed", "2")
        assert json.loads(a)["results"] != json.loads(b)["results"]


class TestOutputFiles:
    def test_output_base_writes_all_renderings(self, capsys, tmp_path):
        base = tmp_path / "reports" / "subgroups"
        code = cli.main(
            ["--command", "subgroups", "--p", "2", "--n", "2", "--output", str(base)]
        )
        assert code == 0
        for suffix in (".json", ".txt", ".csv", ".png"):
            assert (tmp_path / "reports" / ("subgroups" + suffix)).exists()
        obj = json.loads((tmp_path / "reports" / "subgroups.json").read_text())
        rp.validate_report(obj)


class TestCoverageRegistry:
    def public_operations(self):
        ops = set()
        for mod_name, module in AUDITED_MODULES.items():
            for fn_name, fn in vars(module).items():
                if fn_name.startswith("_") or not inspect.isfunction(fn):
                    continue
                if fn.__module__ != module.__name__:
                    continue
                ops.add(f"{mod_name}.{fn_name}")
        return ops

    def test_registry_covers_every_public_operation(self):
        missing = self.public_operations() - set(cli.COVERAGE)
        assert not missing, f"operations missing from the coverage registry: {sorted(missing)}"

    def test_registry_has_no_stale_entries(self):
        stale = set(cli.COVERAGE) - self.public_operations()
        assert not stale, f"stale coverage entries: {sorted(stale)}"

    def test_registry_values_are_real_commands(self):
        bad = {o: c for o, c in cli.COVERAGE.items() if c not in cli.COMMANDS}
        assert not bad

    def test_registry_keys_resolve(self):
        for op in cli.COVERAGE:
            mod_name, fn_name = op.split(".")
            assert hasattr(AUDITED_MODULES[mod_name], fn_name), op

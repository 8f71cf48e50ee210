import numpy as np
import pytest
from click.testing import CliRunner

from permcross.cli import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    EXIT_PARSE,
    main,
    parse_permutation_file,
)
from permcross.errors import ParseError


@pytest.fixture
def runner():
    return CliRunner()


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def parents6(tmp_path):
    return write(tmp_path / "parents.txt", "1 2 3 4 5 6\n1 3 2 4 6 5\n")


@pytest.fixture
def unit_instance6(tmp_path):
    rows = "\n".join(
        " ".join("0" if i == j else "1" for j in range(6)) for i in range(6)
    )
    return write(tmp_path / "inst.txt", f"6\nMATRIX\n{rows}\n")


class TestParsePermutationFile:
    def test_basic(self, tmp_path):
        path = write(tmp_path / "p.txt", "1 2 3\n1 3 2\n")
        perms = parse_permutation_file(path)
        assert len(perms) == 2
        assert perms[0].to_one_based() == [1, 2, 3]

    def test_comments_and_blanks(self, tmp_path):
        path = write(tmp_path / "p.txt", "# comment\n\n2 1\n")
        perms = parse_permutation_file(path)
        assert len(perms) == 1
        assert perms[0].to_one_based() == [2, 1]

    def test_duplicate_symbol_line_number(self, tmp_path):
        path = write(tmp_path / "p.txt", "1 2 2\n")
        with pytest.raises(ParseError, match=":1: duplicate symbol 2"):
            parse_permutation_file(path)

    def test_out_of_range(self, tmp_path):
        path = write(tmp_path / "p.txt", "1 2 5\n")
        with pytest.raises(ParseError, match="out of range"):
            parse_permutation_file(path)

    def test_ragged_sizes(self, tmp_path):
        path = write(tmp_path / "p.txt", "1 2 3\n2 1\n")
        with pytest.raises(ParseError, match=":2: ragged"):
            parse_permutation_file(path)

    def test_non_integer(self, tmp_path):
        path = write(tmp_path / "p.txt", "1 x 3\n")
        with pytest.raises(ParseError, match="not an integer"):
            parse_permutation_file(path)


class TestXoverCommand:
    def test_directed_output_format(self, runner, parents6):
        result = runner.invoke(main, [
            "xover", "--mode", "directed", "--parents", parents6, "--seed", "42",
        ])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "seed: 42"
        assert lines[1] == "mode: directed"
        assert lines[2] in (
            "offspring: 1 2 3 4 6 5", "offspring: 1 3 2 4 5 6",
        )
        assert lines[3].startswith("trials: ")
        assert lines[4] == "trivial: false"

    def test_identical_parents(self, runner, tmp_path):
        parents = write(tmp_path / "same.txt", "1 2 3 4\n1 2 3 4\n")
        result = runner.invoke(main, [
            "xover", "--parents", parents, "--seed", "1",
        ])
        assert result.exit_code == 0
        assert "offspring: 1 2 3 4" in result.output
        assert "trials: 1" in result.output
        assert "trivial: true" in result.output

    def test_byte_identical_reruns(self, runner, parents6):
        args = ["xover", "--mode", "undirected", "--parents", parents6, "--seed", "7"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == second.exit_code == 0
        assert first.output == second.output

    def test_optimal_prints_cost(self, runner, parents6, unit_instance6):
        result = runner.invoke(main, [
            "xover", "--mode", "optimal", "--parents", parents6,
            "--instance", unit_instance6, "--seed", "3",
        ])
        assert result.exit_code == 0, result.output
        assert "cost: 6.0" in result.output

    def test_optimal_without_instance_is_config_error(self, runner, parents6):
        result = runner.invoke(main, [
            "xover", "--mode", "optimal", "--parents", parents6,
        ])
        assert result.exit_code == EXIT_CONFIG

    def test_malformed_file_exit_2(self, runner, tmp_path):
        bad = write(tmp_path / "bad.txt", "1 2 2\n1 2 3\n")
        result = runner.invoke(main, ["xover", "--parents", bad])
        assert result.exit_code == EXIT_PARSE
        assert "duplicate" in result.output

    def test_single_parent_exit_2(self, runner, tmp_path):
        single = write(tmp_path / "one.txt", "1 2 3\n")
        result = runner.invoke(main, ["xover", "--parents", single])
        assert result.exit_code == EXIT_PARSE

    def test_budget_exhaustion_exit_3(self, runner, tmp_path):
        # find a pair+seed needing more than one trial, then cap at one
        from permcross import crossover, random_permutation

        for seed in range(50):
            a = random_permutation(30, np.random.default_rng(seed))
            b = random_permutation(30, np.random.default_rng(seed + 1000))
            if crossover(a, b, seed, avoid_trivial=False).trials > 1:
                parents = write(
                    tmp_path / "hard.txt",
                    " ".join(map(str, a.to_one_based())) + "\n"
                    + " ".join(map(str, b.to_one_based())) + "\n",
                )
                result = runner.invoke(main, [
                    "xover", "--parents", parents, "--seed", str(seed),
                    "--avoid-trivial", "false", "--max-trials", "1",
                ])
                assert result.exit_code == EXIT_BUDGET
                assert "trivial: true" in result.output
                return
        pytest.fail("no hard pair found")

    def test_out_file_matches_stdout(self, runner, parents6, tmp_path):
        out = tmp_path / "result.txt"
        result = runner.invoke(main, [
            "xover", "--parents", parents6, "--seed", "5", "--out", str(out),
        ])
        assert result.exit_code == 0
        assert out.read_text() == result.output

    def test_seed_echoed_when_generated(self, runner, parents6):
        result = runner.invoke(main, ["xover", "--parents", parents6])
        assert result.exit_code == 0
        seed_line = result.output.splitlines()[0]
        seed = int(seed_line.split(":")[1])
        rerun = runner.invoke(main, [
            "xover", "--parents", parents6, "--seed", str(seed),
        ])
        assert rerun.output == result.output


class TestOracleCommand:
    def test_lists_canonical_tours(self, runner, parents6):
        result = runner.invoke(main, ["oracle", "--parents", parents6])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines == [
            "1 2 3 4 5 6  count=1",
            "1 2 3 4 6 5  count=1",
            "1 3 2 4 5 6  count=1",
            "1 3 2 4 6 5  count=1",
        ]

    def test_optimal_line_with_instance(self, runner, parents6, unit_instance6):
        result = runner.invoke(main, [
            "oracle", "--parents", parents6, "--instance", unit_instance6,
        ])
        assert result.exit_code == 0
        assert result.output.splitlines()[-1].startswith("optimal: ")

    def test_rerun_identical(self, runner, parents6):
        a = runner.invoke(main, ["oracle", "--parents", parents6, "--mode", "undirected"])
        b = runner.invoke(main, ["oracle", "--parents", parents6, "--mode", "undirected"])
        assert a.output == b.output
        assert a.exit_code == 0

    def test_refused_large_exit_4(self, runner, tmp_path):
        big = " ".join(str(i) for i in range(1, 18))
        rev = " ".join(str(i) for i in range(17, 0, -1))
        parents = write(tmp_path / "big.txt", f"{big}\n{rev}\n")
        result = runner.invoke(main, ["oracle", "--parents", parents])
        assert result.exit_code == EXIT_CONFIG


class TestBenchCommand:
    def test_writes_csvs(self, runner, tmp_path):
        out = tmp_path / "stats.csv"
        result = runner.invoke(main, [
            "bench", "--mode", "directed", "--n", "10,12", "--swaps", "1,2",
            "--batch", "25", "--seed", "42", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "seed: 42" in result.output
        stats = out.read_text().splitlines()
        assert stats[0].startswith("# mode=directed")
        assert stats[1] == "mode,n,swaps,batch,seed,mean_trials,fraction_nontrivial"
        assert len(stats) == 6  # comment + header + 4 cells
        curve = (tmp_path / "stats_cumulative.csv").read_text().splitlines()
        assert curve[1] == "mode,n,swaps,N,fraction"

    def test_zero_swaps_all_trivial(self, runner, tmp_path):
        out = tmp_path / "z.csv"
        result = runner.invoke(main, [
            "bench", "--n", "10", "--swaps", "0", "--batch", "30",
            "--seed", "1", "--out", str(out),
        ])
        assert result.exit_code == 0
        row = out.read_text().splitlines()[2].split(",")
        assert row[5] == "1.0"   # mean trials
        assert row[6] == "0.0"   # fraction nontrivial

    def test_random_parents_grid(self, runner, tmp_path):
        out = tmp_path / "r.csv"
        result = runner.invoke(main, [
            "bench", "--n", "8", "--swaps", "random", "--batch", "20",
            "--seed", "2", "--out", str(out),
        ])
        assert result.exit_code == 0
        assert ",random," in out.read_text().splitlines()[2]

    def test_byte_identical_files_on_rerun(self, runner, tmp_path):
        args_a = [
            "bench", "--n", "10", "--swaps", "1,3", "--batch", "20",
            "--seed", "9", "--out", str(tmp_path / "a.csv"),
        ]
        args_b = [
            "bench", "--n", "10", "--swaps", "1,3", "--batch", "20",
            "--seed", "9", "--out", str(tmp_path / "b.csv"),
        ]
        ra = runner.invoke(main, args_a)
        rb = runner.invoke(main, args_b)
        assert ra.exit_code == rb.exit_code == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a_cumulative.csv").read_bytes() == (
            tmp_path / "b_cumulative.csv"
        ).read_bytes()

    def test_malformed_flag_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "bench", "--n", "ten", "--swaps", "1",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert result.exit_code != 0
        assert "expects a comma-separated integer list" in result.output


class TestFitCommand:
    def test_prints_slopes(self, runner, tmp_path):
        out = tmp_path / "fit.csv"
        result = runner.invoke(main, [
            "fit", "--n", "10,14", "--swaps", "1,2,3", "--batch", "30",
            "--seed", "3", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "argmax-swaps: slope=" in result.output
        assert "peak-trials: slope=" in result.output
        rows = out.read_text().splitlines()
        assert rows[0] == "n,best_swaps,max_mean_trials"
        assert len(rows) == 3

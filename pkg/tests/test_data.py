import numpy as np
import pytest

from abcttb.data import (build_pairs, load_city_fixture, load_objects_csv, load_pairs,
                         parse_objects, split_objects, write_pairs_csv)
from abcttb.errors import ContractViolation, DegenerateSplit, DuplicateName, EmptyTable, ParseError
from abcttb.proposal import make_rng
from abcttb.synth import SynthConfig, generate


def table_text(rows, cues=("c1",)):
    return "name,criterion," + ",".join(cues) + "\n" + "\n".join(rows) + "\n"


def small_table(n, k=2, seed=0):
    rng = np.random.default_rng(seed)
    rows = [f"obj{i},{1000 - i * 7},{','.join(str(v) for v in rng.integers(0, 2, k))}"
            for i in range(n)]
    return parse_objects(table_text(rows, tuple(f"c{j}" for j in range(k))))


def test_two_rows(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("# comment\n" + table_text(["A,100,1", "B,50,0"]), encoding="utf-8")
    t = load_objects_csv(path)
    assert t.names == ("A", "B") and t.k == 1 and len(t) == 2


def test_non_binary_cue_located():
    with pytest.raises(ParseError) as err:
        parse_objects(table_text(["A,100,1", "B,50,2"]))
    assert err.value.row == 3 and err.value.column == "c1"


def test_non_numeric_criterion():
    with pytest.raises(ParseError) as err:
        parse_objects(table_text(["A,lots,1"]))
    assert err.value.column == "criterion"


def test_duplicate_and_empty():
    with pytest.raises(DuplicateName):
        parse_objects(table_text(["A,100,1", "A,50,0"]))
    with pytest.raises(EmptyTable):
        parse_objects(table_text([]))
    with pytest.raises(EmptyTable):
        parse_objects("# nothing here\n")


def test_bad_header_and_width():
    with pytest.raises(ParseError):
        parse_objects("city,pop,c1\nA,1,0\n")
    with pytest.raises(ParseError):
        parse_objects(table_text(["A,100,1,0"]))


def test_city_fixture_shape():
    t = load_city_fixture()
    assert len(t) == 81 and t.k == 9
    pairs = build_pairs(t)
    assert len(pairs) == 81 * 80 // 2


def test_single_pair_construction():
    t = parse_objects(table_text(["A,100,1", "B,50,0"]))
    pairs = build_pairs(t)
    assert len(pairs) == 1
    assert pairs.diffs.tolist() == [[1]] and pairs.outcome.tolist() == [1]


def test_build_pairs_antisymmetry():
    t = small_table(8, k=3)
    forward = build_pairs(t)
    backward = build_pairs(t.subset(np.arange(len(t))[::-1]))
    fwd = {tuple(d) + (y,) for d, y in zip(forward.diffs.tolist(), forward.outcome.tolist())}
    mirrored = {tuple(-x for x in d) + (1 - y,) for d, y in zip(backward.diffs.tolist(), backward.outcome.tolist())}
    assert sorted(fwd) == sorted(mirrored)
    assert len(forward) == len(backward) == 28


def test_ties_dropped_and_counted():
    t = parse_objects(table_text(["A,100,1", "B,100,0", "C,50,0"]))
    pairs, ties = build_pairs(t, return_ties=True)
    assert ties == 1 and len(pairs) == 2
    with pytest.warns(UserWarning, match="1 pair"):
        build_pairs(t)


def test_build_pairs_needs_two():
    with pytest.raises(ContractViolation):
        build_pairs(parse_objects(table_text(["A,100,1"])))


def test_split_half():
    t = small_table(10)
    train, test = split_objects(t, 0.5, make_rng(0))
    assert len(train) == len(test) == 5
    assert len(build_pairs(train)) == len(build_pairs(test)) == 10
    assert set(train.names) | set(test.names) == set(t.names)
    assert not set(train.names) & set(test.names)


def test_split_rounding():
    train, test = split_objects(load_city_fixture(), 0.05, make_rng(0))
    assert len(train) == 4 and len(build_pairs(train)) == 6
    assert len(test) == 77


def test_split_deterministic():
    t = small_table(20)
    a = split_objects(t, 0.3, make_rng(5))
    b = split_objects(t, 0.3, make_rng(5))
    assert a[0].names == b[0].names


def test_degenerate_split():
    with pytest.raises(DegenerateSplit):
        split_objects(small_table(10), 0.05, make_rng(0))
    with pytest.raises(DegenerateSplit):
        split_objects(small_table(10), 0.9, make_rng(0))


def test_pair_csv_round_trip(tmp_path):
    data = generate(SynthConfig(n=30), make_rng(0))
    path = write_pairs_csv(data, tmp_path / "pairs.csv")
    back, names = load_pairs(path)
    assert names == ("c1", "c2", "c3", "c4")
    assert (back.diffs == data.diffs).all() and (back.outcome == data.outcome).all()


def test_load_pairs_from_object_file(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(table_text(["A,100,1", "B,50,0", "C,10,1"]), encoding="utf-8")
    pairs, names = load_pairs(path)
    assert names == ("c1",) and len(pairs) == 3

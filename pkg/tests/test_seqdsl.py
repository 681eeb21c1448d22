from fractions import Fraction

import pytest

from latval.intervals import interval, iset_make
from latval.seqdsl import parse_affine, producer_from_json


def test_affine_terms():
    e = parse_affine("1 + 1/n")
    assert e.at(4) == Fraction(5, 4)
    assert parse_affine("2 - 1/n").at(2) == Fraction(3, 2)
    assert parse_affine("n + 1").at(3) == 4
    assert parse_affine("3/2*n").at(2) == 3
    assert parse_affine("-1/2").at(9) == Fraction(-1, 2)
    assert parse_affine("1/2/n").at(2) == Fraction(1, 4)


def test_interval_template():
    producer, kind = producer_from_json({"kind": "interval", "template": "[0, 1 + 1/n]"})
    assert kind == "interval"
    assert producer(4) == interval(0, Fraction(5, 4))


def test_interval_union_template():
    producer, _ = producer_from_json(
        {"kind": "interval", "template": "[0, 1] u [2 - 1/n, 3]"}
    )
    assert producer(2) == iset_make([(0, 1), (Fraction(3, 2), 3)])


def test_step_template():
    producer, kind = producer_from_json({"kind": "step", "template": "(1/n)*1_[n, n+1]"})
    assert kind == "step"
    f = producer(3)
    assert f(Fraction(7, 2)) == Fraction(1, 3)
    assert f(10) == 0


def test_explicit_stage_list():
    producer, _ = producer_from_json(
        {
            "kind": "interval-list",
            "stages": [[{"lo": "0", "hi": "2"}], [{"lo": "0", "hi": "1"}]],
            "tail": "constant",
        }
    )
    assert producer(1) == interval(0, 2)
    assert producer(5) == interval(0, 1)


def test_explicit_stage_list_without_tail_errors_past_end():
    producer, _ = producer_from_json(
        {"kind": "interval-list", "stages": [[{"lo": "0", "hi": "2"}]]}
    )
    with pytest.raises(IndexError):
        producer(2)


def test_unknown_kind():
    with pytest.raises(ValueError):
        producer_from_json({"kind": "nope"})

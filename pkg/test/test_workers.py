# -*- coding: utf-8 -*-
import pytest

from pathipy import workers


def square(value):
    return value * value


def test_run_in_order():
    assert workers.run(square, range(10)) == [value * value for value in range(10)]
    assert workers.run(square, range(10), max_workers=4) == [value * value for value in range(10)]


def test_run_nothing():
    assert workers.run(square, []) == []
    assert workers.run(square, [], max_workers=3) == []


def test_run_invalid_workers():
    with pytest.raises(ValueError):
        workers.run(square, range(3), max_workers=0)

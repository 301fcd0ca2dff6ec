# -*- coding: utf-8 -*-
import contextlib
import functools
import json
import os
from pathlib import Path
import tempfile
from typing import Sequence, Union

import numpy as np

__all__ = ('to_json', 'dumps', 'decode_complex', 'decode_matrix', 'generator', 'atomic_write')


@functools.singledispatch
def to_json(obj):
    """Convert an object into something the json module can serialise.  Complex numbers become
    [re, im] pairs and arrays nested lists (row-major)."""
    raise TypeError('Cannot encode object of type: {}'.format(obj.__class__.__name__))


@to_json.register(str)
@to_json.register(bool)
@to_json.register(int)
@to_json.register(float)
@to_json.register(type(None))
def _(obj):
    return obj


@to_json.register(complex)
@to_json.register(np.complexfloating)
def _(obj):
    return [float(obj.real), float(obj.imag)]


@to_json.register(np.bool_)
def _(obj):
    return bool(obj)


@to_json.register(np.integer)
def _(obj):
    return int(obj)


@to_json.register(np.floating)
def _(obj):
    return float(obj)


@to_json.register(np.ndarray)
def _(obj):
    return [to_json(entry) for entry in obj.tolist()] if obj.ndim else to_json(obj.item())


@to_json.register(list)
@to_json.register(tuple)
def _(obj):
    return [to_json(entry) for entry in obj]


@to_json.register(dict)
def _(obj):
    return {str(key): to_json(value) for key, value in obj.items()}


def dumps(obj, **kwargs) -> str:
    kwargs.setdefault('indent', 2)
    return json.dumps(to_json(obj), **kwargs)


def decode_complex(value: Union[float, Sequence[float]]) -> complex:
    """Inverse of the [re, im] encoding, plain numbers are accepted as real values"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError('Complex values are encoded as [re, im], got {}'.format(value))
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError("Expected a number or an [re, im] pair, got '{}'".format(value))
    return complex(value)


def decode_matrix(rows) -> np.ndarray:
    return np.array([[decode_complex(entry) for entry in row] for row in rows], dtype=complex)


def generator(seed: int, *key: int) -> np.random.Generator:
    """A counter-based generator for the stream identified by (seed, *key).  Streams with different
    keys are independent so results do not depend on the order they are drawn in."""
    entropy = (int(seed),) + tuple(int(part) for part in key)
    if any(part < 0 for part in entropy):
        raise ValueError('Seeds and stream keys must be non-negative, got {}'.format(entropy))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@contextlib.contextmanager
def atomic_write(path: Union[str, Path], mode='w', encoding='utf-8'):
    """Write to a temporary file next to the destination and move it into place on success.  On
    failure the temporary file is removed and the destination is left untouched."""
    path = Path(path)
    handle, temp_path = tempfile.mkstemp(dir=str(path.parent or Path('.')),
                                         prefix='.{}.'.format(path.name),
                                         suffix='.tmp')
    try:
        kwargs = {} if 'b' in mode else {'encoding': encoding, 'newline': ''}
        with os.fdopen(handle, mode, **kwargs) as stream:
            yield stream
        os.replace(temp_path, str(path))
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise

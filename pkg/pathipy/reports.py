# -*- coding: utf-8 -*-
"""Human readable tables for states, experiment results and fidelity summaries"""
import numbers
from typing import Iterable, Iterator, Sequence, Tuple

import beautifultable

from . import experiments
from . import states

__all__ = 'experiment_table', 'state_table', 'fidelity_report', 'format_value'

COL_WIDTH = 18


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, complex):
        return '{:.6g}{:+.6g}j'.format(value.real, value.imag)
    if isinstance(value, numbers.Integral):
        return str(value)
    if isinstance(value, numbers.Real):
        return '{:.6g}'.format(value)
    return str(value)


def _lines(header: Sequence[str], rows: Iterable[Sequence], widths: Sequence[int] = None,
           alignment=None) -> Iterator[str]:
    table = _create_table()
    table.columns.header = list(header)
    table.columns.width = list(widths) if widths else [COL_WIDTH] * len(header)
    if alignment is not None:
        table.columns.alignment = alignment
    rows = [[format_value(value) for value in row] for row in rows]
    if not rows:
        yield 'Empty'
        return
    yield from table.stream(rows)


def experiment_table(result: experiments.ExperimentResult) -> Iterator[str]:
    """Lines of a table with the rows of an experiment result, preceded by a title"""
    yield "{} '{}':".format(result.kind, result.name)
    yield from _lines(result.header, result.rows)


def state_table(ket: states.BiphotonKet) -> Iterator[str]:
    """Lines listing the amplitudes of a ket, largest first"""
    rows = sorted(ket.items(), key=lambda item: -abs(item[1]))
    yield from _lines(('signal', 'idler', 'amplitude', 'probability'),
                      ((sig, idl, amp, abs(amp)**2) for (sig, idl), amp in rows),
                      widths=(8, 8, 30, 14),
                      alignment=[beautifultable.ALIGN_RIGHT] * 4)


def fidelity_report(rows: Iterable[Tuple[str, float, float]]) -> Iterator[str]:
    """Lines of a (state, fidelity, uncertainty) summary"""
    yield from _lines(('state', 'fidelity', '+/-'),
                      ((name, '{:.3f}'.format(mean), '{:.3f}'.format(stddev))
                       for name, mean, stddev in rows),
                      widths=(16, 10, 10),
                      alignment=[
                          beautifultable.ALIGN_LEFT, beautifultable.ALIGN_RIGHT,
                          beautifultable.ALIGN_RIGHT
                      ])


def _create_table() -> beautifultable.BeautifulTable:
    """Creates a new table for printing, cells are shown exactly as formatted"""
    table = beautifultable.BeautifulTable(detect_numerics=False)
    table.set_style(beautifultable.STYLE_COMPACT)
    table.columns.width_exceed_policy = beautifultable.WEP_ELLIPSIS

    return table

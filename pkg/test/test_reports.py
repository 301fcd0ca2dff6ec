# -*- coding: utf-8 -*-
from pathipy import experiments
from pathipy import reports
from pathipy import states


def test_format_value():
    assert reports.format_value(True) == 'true'
    assert reports.format_value(3) == '3'
    assert reports.format_value(0.5) == '0.5'
    assert reports.format_value(1 - 2j) == '1-2j'
    assert reports.format_value('q_in') == 'q_in'


def test_experiment_table():
    result = experiments.ExperimentResult('coherence', 'arms', {}, ('satisfied', 'margin'),
                                          [(True, 20.)])
    lines = list(reports.experiment_table(result))
    assert lines[0] == "coherence 'arms':"
    assert any('satisfied' in line for line in lines)
    assert any('true' in line and '20' in line for line in lines)

    empty = result._replace(rows=[])
    assert list(reports.experiment_table(empty)) == ["coherence 'arms':", 'Empty']


def test_state_table():
    lines = list(reports.state_table(states.target_state('psi5')))
    body = '\n'.join(lines)
    assert 'amplitude' in body
    # Largest first
    largest = next(idx for idx, line in enumerate(lines) if '0.639602' in line)
    smallest = next(idx for idx, line in enumerate(lines) if '0.426401' in line)
    assert largest < smallest


def test_fidelity_report():
    lines = list(reports.fidelity_report([('psi1', 0.99951, 0.0123)]))
    body = '\n'.join(lines)
    assert 'psi1' in body
    assert '1.000' in body
    assert '0.012' in body

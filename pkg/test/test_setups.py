# -*- coding: utf-8 -*-
import math
import pathlib

import pytest

from pathipy import chains
from pathipy import exceptions
from pathipy import setups
from pathipy import states

SETUPS = pathlib.Path(__file__).parent / 'setups'
VALID = sorted((SETUPS / 'valid').glob('*.setup'))
MALFORMED = sorted((SETUPS / 'malformed').glob('*.setup'))


def expected_error(path: pathlib.Path):
    """Malformed documents state the error they should produce on their first line:
    # expect <error class> <line> <column or ->"""
    _, _, kind, line, column = path.read_text().splitlines()[0].split()
    return getattr(exceptions, kind), int(line), None if column == '-' else int(column)


def test_corpus_size():
    assert len(VALID) >= 20
    assert len(MALFORMED) >= 10


@pytest.mark.parametrize('path', VALID, ids=lambda path: path.stem)
def test_valid_round_trip(path):
    document = setups.load_setup(path)
    text = setups.format_setup(document)
    again = setups.parse_setup(text)
    assert again == document
    # The canonical text is a fixed point
    assert setups.format_setup(again) == text
    # Every valid document describes a buildable chain
    assert chains.build_state(document.chain()).norm() == pytest.approx(1.)


@pytest.mark.parametrize('path', MALFORMED, ids=lambda path: path.stem)
def test_malformed_diagnostics(path):
    error_type, line, column = expected_error(path)
    with pytest.raises(error_type) as excinfo:
        setups.load_setup(path)
    assert excinfo.value.line == line
    assert excinfo.value.column == column
    assert 'line {}'.format(line) in str(excinfo.value)


def test_three_crystal_reference():
    document = setups.load_setup(SETUPS / 'valid' / 'three_crystals.setup')
    assert document.truncation == 4
    assert len(document.stages) == 7
    assert document.stage_lines == (3, 4, 5, 6, 7, 8, 9)
    ket = chains.build_state(document.chain())
    assert ket.allclose(states.target_state('psi1', document.space))

    block = document.experiment('psi1')
    assert block.kind == 'tomography'
    assert block.params == {'modes': (-2, 0, 2), 'target': 'psi1', 'noiseless': True}
    assert block.line == 11
    with pytest.raises(ValueError):
        document.experiment('psi2')


def test_path_identity_documents():
    for name, target in (('psi2', 'psi2'), ('psi4_degrees', 'psi4'), ('psi5_weighted', 'psi5'),
                         ('bell_phi_minus', 'phi-')):
        document = setups.load_setup(SETUPS / 'valid' / '{}.setup'.format(name))
        ket = chains.build_state(document.chain())
        assert ket.allclose(states.target_state(target, document.space), atol=1e-12), name


def test_syntax_error_expected_tokens():
    with pytest.raises(exceptions.SetupSyntaxError) as excinfo:
        setups.parse_setup('truncation 2\nlens 2\n')
    assert 'crystal' in excinfo.value.expected
    assert 'phase' in excinfo.value.expected
    assert 'expected one of' in str(excinfo.value)


def test_empty_document():
    with pytest.raises(exceptions.SetupSemanticError):
        setups.parse_setup('')
    with pytest.raises(exceptions.SetupSemanticError):
        setups.parse_setup('truncation 2\nphase 0rad\n')


def test_angles():
    degrees = setups.parse_setup('crystal\nphase 180deg\ncrystal\n')
    radians = setups.parse_setup('crystal\nphase {!r}rad\ncrystal\n'.format(math.pi))
    assert degrees.stages[1].phi == pytest.approx(radians.stages[1].phi, abs=1e-15)
    assert setups.parse_angle('90', 'deg') == pytest.approx(math.pi / 2.)
    assert setups.parse_angle('0.5') == 0.5
    with pytest.raises(ValueError):
        setups.parse_angle('90 deg')


def test_default_truncation():
    assert setups.parse_setup('crystal\n').truncation == 4
    assert setups.parse_setup('crystal\n', default_truncation=6).truncation == 6
    assert setups.parse_setup('truncation 1\ncrystal\n', default_truncation=6).truncation == 1


def test_unknown_key():
    with pytest.raises(exceptions.SetupSyntaxError) as excinfo:
        setups.parse_setup('crystal\n[experiment qhq lock]\ntarget = 10\ncolour = red\n')
    assert excinfo.value.line == 4
    assert 'input' in excinfo.value.expected


def test_duplicates():
    with pytest.raises(exceptions.SetupSemanticError) as excinfo:
        setups.parse_setup('crystal\n[experiment qhq a]\ntarget = 1\n[experiment qhq a]\ntarget = 2\n')
    assert excinfo.value.line == 4
    with pytest.raises(exceptions.SetupSemanticError) as excinfo:
        setups.parse_setup('crystal\n[experiment qhq a]\ntarget = 1\ntarget = 2\n')
    assert excinfo.value.line == 4
    with pytest.raises(exceptions.SetupSemanticError):
        setups.parse_setup('crystal amp=1 amp=2\n')


def test_stage_checks():
    with pytest.raises(exceptions.SetupSemanticError) as excinfo:
        setups.parse_setup('crystal\nphase 0\ncrystal\n[experiment phase-scan s]\nstage = 0\n')
    assert excinfo.value.line == 5
    with pytest.raises(exceptions.SetupSemanticError):
        setups.parse_setup('crystal\n[experiment spiral-spectrum s]\ncrystal = 1\n')


def test_jones_values():
    document = setups.load_setup(SETUPS / 'valid' / 'qhq_jones.setup')
    vector = document.experiment('lock').params['input']
    assert vector.h == pytest.approx(0.6)
    assert vector.v == pytest.approx(0.8)
    assert setups.parse_jones('R').v == pytest.approx(-1j / math.sqrt(2.))
    with pytest.raises(ValueError):
        setups.parse_jones('[0, 0]')
    with pytest.raises(ValueError):
        setups.parse_jones('[1, 0, 0]')


def test_complex_alpha():
    document = setups.load_setup(SETUPS / 'valid' / 'complex_alpha.setup')
    spec = document.stages[0].spec
    assert spec.max_order == 2
    assert spec.spiral_coefficients[1].imag > 0.
    assert spec.spiral_coefficients[2].real == 0.


@pytest.mark.parametrize('line', [
    'crystal alpha=[1e308,1e308]',
    'crystal alpha=[NaN]',
    'crystal alpha=[Infinity]',
    'crystal alpha=[1.0,[0.0,-Infinity]]',
    'crystal amp=1e200',
    'crystal amp=inf',
])
def test_non_finite_crystal_values(line):
    with pytest.raises(exceptions.SetupError) as excinfo:
        setups.parse_setup('truncation 2\n{}\n'.format(line))
    assert excinfo.value.line == 2


def test_non_finite_jones():
    with pytest.raises(ValueError):
        setups.parse_jones('[NaN, 1]')

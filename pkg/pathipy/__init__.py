# -*- coding: utf-8 -*-
from .chains import *
from .exceptions import *
from .experiments import *
from .fringes import *
from .measurements import *
from .polarization import *
from .reports import *
from .settings import *
from .setups import *
from .states import *
from .tomography import *
from .utils import *
from .version import *
from .workers import *
# Keep the linter happy
from . import constants
from . import defaults
from . import version

_ADDITIONAL = 'defaults', 'constants'

__all__ = (chains.__all__ + exceptions.__all__ + experiments.__all__ + fringes.__all__ +
           measurements.__all__ + polarization.__all__ + reports.__all__ + settings.__all__ +
           setups.__all__ + states.__all__ + tomography.__all__ + utils.__all__ + version.__all__ +
           workers.__all__) + _ADDITIONAL

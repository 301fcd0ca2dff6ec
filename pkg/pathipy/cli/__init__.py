# -*- coding: utf-8 -*-
# Expose the command groups
from . import main
from . import settings
from .main import pathi

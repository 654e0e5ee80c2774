# -*- coding: utf-8 -*-

"""Top-level package for drillsim."""

__author__ = 'drillsim developers'
__version__ = '0.1.0.dev0'

from drillsim import analysis, dynamics, fem, model, reduction, uq
from drillsim.config import RunConfig
from drillsim.drillstring import Drillstring

__all__ = (
    'analysis',
    'dynamics',
    'fem',
    'model',
    'reduction',
    'uq',
    'Drillstring',
    'RunConfig',
)

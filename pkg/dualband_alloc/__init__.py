# -*- coding: utf-8 -*-

import ast
import logging
import os

_logger = logging.getLogger(__name__)


def _read_manifest():
    """Read the package manifest without importing it as a module"""
    path = os.path.join(os.path.dirname(__file__), '__manifest__.py')
    with open(path, encoding='utf-8') as handle:
        return ast.literal_eval(handle.read())


MANIFEST = _read_manifest()
__version__ = MANIFEST['version']

from . import exceptions
from . import models
from . import services

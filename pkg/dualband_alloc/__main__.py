# -*- coding: utf-8 -*-

import sys

from .controllers.cli import main

sys.exit(main())

#!/usr/bin/env python3

import sys

from cntplate.bench.cli import main

sys.exit(main())

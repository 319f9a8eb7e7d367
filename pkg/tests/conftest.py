"""Shared test configuration.

Turns on exact re-verification of every Smith decomposition (U*M*V == D
recomputed by sparse multiplication on each call) for the whole suite.
"""

from __future__ import annotations

import cohomotopy.linalg as linalg

linalg.VERIFY = True

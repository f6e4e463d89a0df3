"""Normal-form bisimulation workbench for the lambda calculus with shift and reset."""

import sys

# Terms produced by long reductions nest deeply; the tree walkers recurse.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"

"""
viprox: adaptive extra-gradient and mirror-prox solvers for monotone
variational inequalities, with a benchmark harness.
"""
import logging

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

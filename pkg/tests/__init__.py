"""
Test suite for viprox.

Long end-to-end experiment runs are marked ``slow``.
"""

# This file makes the tests directory a Python package

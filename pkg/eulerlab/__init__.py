"""
eulerlab: pseudo-spectral laboratory for the damped isentropic Euler equations
on the periodic box.
"""

__version__ = "0.1.0"

"""
Ultradiff - diffusion and reaction on ultrametric hierarchies
"""

__version__ = "0.1.0"
__author__ = "Ultradiff"
__description__ = "Spectral solver, asymptotic laws and brute-force oracles for ultrametric diffusion"

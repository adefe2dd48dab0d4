"""
Atkin-Lehner Twist Toolkit
Points, analytic ranks and deficient places of the prime twists C(N, p) of X_0(N)
"""

__version__ = "1.0.0"

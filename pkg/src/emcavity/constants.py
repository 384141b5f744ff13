"""Physical constants (CODATA, via scipy)."""

from scipy.constants import hbar as HBAR  # J s
from scipy.constants import k as K_BOLTZMANN  # J/K
from scipy.constants import epsilon_0 as EPSILON_0  # F/m

TWO_PI = 6.283185307179586

__all__ = ["HBAR", "K_BOLTZMANN", "EPSILON_0", "TWO_PI"]

"""Physical constants used throughout the package (SI)."""

C_LIGHT = 2.99792458e8      # m/s
HBAR = 1.054571817e-34      # J*s

# Coupling-coefficient length convention: the fitted gain coefficient g is
# quoted per millimetre of crystal, so cosh/sinh arguments are
# g * lambda_m * (length / GAIN_LENGTH_UNIT).
GAIN_LENGTH_UNIT = 1e-3     # m

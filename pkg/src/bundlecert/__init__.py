"""bundlecert: exact stability certificates for monad bundles on P2 / P1xP1 /
a quartic K3, and Picard-rank upper bounds for double-cover K3 surfaces via
finite-field point counting."""

__version__ = "0.1.0"

"""Energy-preserving graph shift operators, graph filters and Wiener filtering."""

__version__ = "0.1.0"

"""cartan-ho-lab - exact computations in modular Lie superalgebras of Cartan type."""

__version__ = "0.1.0"

"""Find a target licence plate across recorded camera footage."""

__version__ = "0.1.0"

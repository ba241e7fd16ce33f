"""Star packings and star decompositions of multigraphs."""

__version__ = "0.1.0"

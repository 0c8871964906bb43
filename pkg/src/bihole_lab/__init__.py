"""Large bi-holes and balanced colorings in bipartite graphs."""

__version__ = "0.1.0"

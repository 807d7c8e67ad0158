"""Starting partitions, eigen-based loading starts and the 16-model lattice."""
__all__ = ["eigen", "hierarchy", "lattice", "partitions"]

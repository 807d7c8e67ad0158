"""BIC/ARI criteria, grid search and the group-factor report."""
__all__ = ["criteria", "report", "search"]

"""Total causal effects in large fuzzy cognitive maps"""
__all__ = [
    "config",
    "errors",
    "graph",
    "formats",
    "solver",
    "oracle",
    "dynamics",
    "generator",
    "bench",
    "verify",
    "cli",
]

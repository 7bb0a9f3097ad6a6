"""Exception types shared across the package.

Two failure modes exist: a request that is invalid before any numerics run
(bad parameter ranges, violated preconditions, degenerate inputs), and a
request that is valid but cannot be resolved on the configured grids.
The CLI maps them to exit codes 2 and 3 respectively.
"""


class ParameterError(ValueError):
    """Invalid parameters or violated operation preconditions."""


class ResolutionError(RuntimeError):
    """Requested evaluation exceeds the grid/node budget needed for accuracy."""

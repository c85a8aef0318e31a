"""Sparse grid collocation for elliptic PDEs with lognormal coefficients."""

from . import (adaptive, bench, field, hermite, multiindex, nodes, pde,
               sparse_grid)

__all__ = ["adaptive", "bench", "field", "hermite", "multiindex", "nodes",
           "pde", "sparse_grid"]

"""traitnorm: trait-based metadata normalization for property graphs."""

__version__ = "0.1.0"

from .graph import (  # noqa: F401
    HAS_TRAIT,
    TRAIT_LABEL,
    ElementRef,
    GraphError,
    PropertyGraph,
)
from .normalize import (  # noqa: F401
    NormalizerConfig,
    TraitCatalog,
    run_pipeline,
)
from .tfd import (  # noqa: F401
    DependencySet,
    TraitDependency,
    TraitFamily,
    closure,
    holds,
    implies,
)

"""Flows, invariants and induced representations of linear vector fields."""
from flowlab.errors import DomainError, FlowlabError, ParseError

__version__ = "0.1.0"

__all__ = ["DomainError", "FlowlabError", "ParseError", "__version__"]

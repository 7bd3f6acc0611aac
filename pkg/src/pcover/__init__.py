"""pcover: exact and Monte Carlo verification of selector-process cover bounds."""

from .domain import FORMAT_VERSION, FragmentConstants, Guards, InequalityCheck, RunConfig, SelectorConfig

__all__ = ["FORMAT_VERSION", "FragmentConstants", "Guards", "InequalityCheck", "RunConfig", "SelectorConfig"]

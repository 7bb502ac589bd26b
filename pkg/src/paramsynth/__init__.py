"""Synthesis of controllers for parameterized infinite-state GR(1)
specifications, with a checkable proof witness."""

from .driver import RunConfig, RunResult, parameterized_synthesis
from .spec import ParamSpec, instantiate, load_spec, parse_spec
from .verify import Consistent, Counterexample, ParamSystem, RankingPair, Witness, check_consistency

__version__ = "0.1.0"

"""Chip-firing games, their configuration-space lattices, and lattice-to-game
synthesis (classical and coloured)."""

from .coloured import ColouredCfg, ColouredState, from_classical
from .engine import Cfg, ConfigSpace, FixpointRun
from .errors import (
    CapExceeded,
    DetectorDisagreement,
    NotALatticeError,
    ParseError,
    StateCapExceeded,
    StepCapExceeded,
)
from .lattice import (
    ArrowPartition,
    ArrowRelations,
    ArrowWitnessReport,
    IdealFamily,
    Lattice,
    Poset,
    arrow_witness_report,
    find_isomorphism,
    ideal_lattice,
    is_isomorphic,
)
from .multigraph import ColouredMultigraph, Multigraph
from .transforms import (
    SplitReport,
    cfg_from_distributive,
    coloured_from_uld,
    coloured_ideal_game,
    interval_cfg,
    simplify,
    split_vertex,
)

__version__ = "0.1.0"

__all__ = [
    "ArrowPartition",
    "ArrowRelations",
    "ArrowWitnessReport",
    "CapExceeded",
    "Cfg",
    "ColouredCfg",
    "ColouredMultigraph",
    "ColouredState",
    "ConfigSpace",
    "DetectorDisagreement",
    "FixpointRun",
    "IdealFamily",
    "Lattice",
    "Multigraph",
    "NotALatticeError",
    "ParseError",
    "Poset",
    "SplitReport",
    "StateCapExceeded",
    "StepCapExceeded",
    "arrow_witness_report",
    "cfg_from_distributive",
    "coloured_from_uld",
    "coloured_ideal_game",
    "find_isomorphism",
    "from_classical",
    "ideal_lattice",
    "interval_cfg",
    "is_isomorphic",
    "simplify",
    "split_vertex",
]

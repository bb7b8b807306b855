"""Freezing majority cellular automata on a torus with L-shaped neighborhoods.

Simulation, graph-based prediction for size-2 neighborhoods, and
compilation of monotone circuits into initial configurations whose
fixed-point behavior evaluates the circuit.
"""

from .compile import (
    CompiledInstance,
    check_compiled,
    compile_circuit,
    format_compiled,
    parse_compiled,
    prune_dead_gates,
)
from .gadgets import (
    Contiguous,
    GadgetSet,
    Periodic,
    Sparse2,
    Tile,
    WireParams,
    build_gadget_set,
    format_gadget_set,
    parse_family,
    parse_gadget_set,
    verify_gadget,
    wire_params,
)
from .circuit import (
    MonotoneCircuit,
    evaluate_circuit,
    format_circuit,
    normalize_fanout,
    parse_circuit,
    random_circuit,
)
from .errors import (
    CellOutOfRange,
    FamilyOutOfRange,
    FreezemajError,
    GadgetConstructionFailed,
    InstanceTooLarge,
    LayoutOverflow,
    OffsetCollision,
    ParseError,
    WrongNeighborhoodArity,
)
from .grid import (
    MINUS,
    PLUS,
    TOOM,
    Configuration,
    LNeighborhood,
    format_grid,
    local_rule,
    parse_grid,
    predict_by_simulation,
    run_to_fixed_point,
    simulate,
    step,
)
from .predict import (
    CellDigraph,
    FlipSchedule,
    SubgridMap,
    build_cell_digraph,
    cycle_vertices,
    flip_times,
    locate,
    matrix_power_predictor,
    never_flip_set,
    predict_fast,
    subgrid_map,
)

__version__ = "0.1.0"

"""qxpile: SDK-to-SDK style quantum circuit transpilation strategies and their benchmark harness."""
from .ir import KINDS, Circuit, GateInstance, GateKind, depth, gate, gatecount, idle_qubits, structural_eq
from .qasm2 import ParseError, emit, parse
from .simulator import check_transpilation, circuit_unitary, equal_up_to_global_phase, kind_matrix
from .dialects import Dialect, builtin_dialects, builtin_rules, load_dialect
from .transpiler import TranspileError, hub_and_spokes, hybrid, one_to_one, rebase, transpile, zyz_decompose
from .randgen import HEAParams, dialect_gate_circuits, pure_random, range_gates, vqe

__version__ = "0.1.0"

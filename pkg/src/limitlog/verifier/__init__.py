"""Independent oracles, graph references and the bounded counter-model search."""

from .countermodel import counter_model_search
from .graphs import dag_path_counts, diffusion, graph_oracle, shortest_paths
from .oracle import (OracleResult, OracleVerdict, naive_fixpoint_oracle,
                     oracle_closure, oracle_entails)

__all__ = [
    "OracleResult", "OracleVerdict", "naive_fixpoint_oracle", "oracle_closure",
    "oracle_entails", "counter_model_search", "graph_oracle", "shortest_paths",
    "dag_path_counts", "diffusion",
]

"""Graph carriers, fat graphs and graph-induced transfunctions."""

from .analyzer import base_balls, carries, graph_transfunction
from .carrier import GraphCarrier, exact_graph, fat_graph
from .models import CarrierReport, Rectangle

__all__ = [
    "CarrierReport",
    "GraphCarrier",
    "Rectangle",
    "base_balls",
    "carries",
    "exact_graph",
    "fat_graph",
    "graph_transfunction",
]

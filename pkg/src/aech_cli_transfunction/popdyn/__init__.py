"""Population dynamics driven by composed transfunctions."""

from .model import PopulationModel, StepOrder, Trajectory, simulate, step

__all__ = ["PopulationModel", "StepOrder", "Trajectory", "simulate", "step"]

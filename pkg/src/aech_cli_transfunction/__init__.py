"""aech-cli-transfunction: Transfunctions between spaces of finite measures on point clouds."""

__version__ = "0.1.0"

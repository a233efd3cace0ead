"""ecosim - power-capped HPC cluster simulator comparing FCFS killer and eco-mode scheduling."""

__version__ = "0.1.0"
